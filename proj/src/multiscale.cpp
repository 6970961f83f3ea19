#include "dimerlab/multiscale.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "fourier_quadrature.hpp"

namespace dimerlab {

int deepest_scale(double m, int h_max) {
  if (!(m >= 0.0 && m < 1.0)) throw Error("InvalidArgument", "scale decomposition needs 0 <= m < 1");
  if (h_max < 1) throw Error("InvalidArgument", "h_max must be positive");
  if (m == 0.0) return -h_max;
  return static_cast<int>(std::floor(std::log2(m)));
}

double scale_outer_radius(int h, const GevreyCutoff& cutoff) {
  const double edge = kPi / 2.0 + cutoff.eps();
  if (h == 0) return edge * std::sqrt(2.0);
  return std::ldexp(edge, h);
}

Mat2 ScaleTable::operator()(int x1, int x2) const {
  if (std::abs(x1) > range || std::abs(x2) > range)
    throw Error("OutOfRange", "displacement outside the scale table");
  const int span = 2 * range + 1;
  return values[(x1 + range) * span + (x2 + range)];
}

namespace {

using Symbol = Mat2 (*)(double m, double k1, double k2);

Mat2 lattice_symbol(double m, double k1, double k2) { return majorana_symbol(m, k1, k2); }

Mat2 continuum_symbol(double, double k1, double k2) {
  const double inv = 0.5 / (k1 * k1 + k2 * k2);
  return {cplx(k2, k1) * inv, 0.0, 0.0, cplx(-k2, k1) * inv};
}

Symbol symbol_for(SymbolKind kind) { return kind == SymbolKind::Lattice ? lattice_symbol : continuum_symbol; }

double box_half_width(int h, const GevreyCutoff& cutoff) { return std::ldexp(kPi / 2.0 + cutoff.eps(), h); }

// (1/4pi^2) sum over the n x n midpoint grid of [-K, K]^2 of
// dk^2 f_h(k) S(k) e^{-i k x}, for x1 in [lo1, lo1 + n1) and x2 in [lo2, lo2 + n2).
std::vector<Mat2> tensor_sum(int h, const GevreyCutoff& cutoff, Symbol symbol, double m, int n, int lo1, int n1,
                             int lo2, int n2) {
  const double K = box_half_width(h, cutoff);
  const double dk = 2.0 * K / n;
  std::vector<double> ks(n);
  for (int a = 0; a < n; ++a) ks[a] = -K + dk * (a + 0.5);
  std::vector<std::array<cplx, 4>> rows(static_cast<std::size_t>(n) * n2, {0.0, 0.0, 0.0, 0.0});
  parallel_for(n, [&](std::size_t a) {
    for (double k2 : ks) {
      const double w = cutoff.f_h(h, ks[a], k2);
      if (w == 0.0) continue;
      const Mat2 s = symbol(m, ks[a], k2);
      const cplx step = std::polar(1.0, -k2);
      cplx ph = std::polar(w, -k2 * lo2);
      for (int i = 0; i < n2; ++i) {
        auto& r = rows[a * n2 + i];
        r[0] += ph * s.pp;
        r[1] += ph * s.pm;
        r[2] += ph * s.mp;
        r[3] += ph * s.mm;
        ph *= step;
      }
    }
  });
  const double scale = dk * dk / (4.0 * kPi * kPi);
  std::vector<Mat2> out(static_cast<std::size_t>(n1) * n2);
  parallel_for(n1, [&](std::size_t i1) {
    const int x1 = lo1 + static_cast<int>(i1);
    std::vector<std::array<cplx, 4>> acc(n2, {0.0, 0.0, 0.0, 0.0});
    for (int a = 0; a < n; ++a) {
      const cplx ph = std::polar(1.0, -ks[a] * x1);
      for (int i = 0; i < n2; ++i)
        for (int c = 0; c < 4; ++c) acc[i][c] += ph * rows[a * n2 + i][c];
    }
    for (int i = 0; i < n2; ++i)
      out[i1 * n2 + i] = {scale * acc[i][0], scale * acc[i][1], scale * acc[i][2], scale * acc[i][3]};
  });
  return out;
}

// Enough points per axis that the aliasing period 2 pi / dk exceeds 4 x_max.
int grid_points(int h, const GevreyCutoff& cutoff, int requested, int x_max) {
  const double K = box_half_width(h, cutoff);
  int n = std::max(requested, static_cast<int>(std::ceil(4.0 * x_max * K / kPi)));
  return n + (n % 2);
}

void check_scale(int h) {
  if (h > 0) throw Error("ScaleOutOfRange", "scale index must be <= 0, got " + std::to_string(h));
}

}  // namespace

ScaleTable single_scale_propagator(int h, double m, const GevreyCutoff& cutoff, int range, SymbolKind symbol,
                                   int grid) {
  check_scale(h);
  if (range < 0) throw Error("InvalidArgument", "negative range");
  if (symbol == SymbolKind::Continuum && m != 0.0)
    throw Error("Unsupported", "the continuum split is defined at m = 0");
  ScaleTable t;
  t.h = h;
  t.range = range;
  const int span = 2 * range + 1;
  const int n = grid_points(h, cutoff, grid, 2 * range);
  t.values = tensor_sum(h, cutoff, symbol_for(symbol), m, n, -range, span, -range, span);
  return t;
}

ScaleTable infrared_bundle(int h_star, double m, const GevreyCutoff& cutoff, int range) {
  if (h_star >= 0) throw Error("ScaleOutOfRange", "the infrared bundle needs h* < 0");
  ScaleTable t;
  t.h = h_star;
  t.bundle = true;
  t.range = range;
  const int span = 2 * range + 1;
  t.values.assign(static_cast<std::size_t>(span) * span, Mat2{0.0, 0.0, 0.0, 0.0});
  const double eps = cutoff.eps();
  const double flat = std::ldexp(kPi / 2.0 - eps, h_star);
  const double outer = std::ldexp(kPi / 2.0 + eps, h_star);
  add_polar_disk(
      m, range, [&](double rho) { return cutoff.chi_h_radial(h_star, rho); },
      radial_edges(m, flat, outer, 12), angular_points(outer, range), t.values);
  return t;
}

ScaleTable scale_remainder(int h, const GevreyCutoff& cutoff, int range, int grid) {
  ScaleTable g = single_scale_propagator(h, 0.0, cutoff, range, SymbolKind::Lattice, grid);
  ScaleTable c = single_scale_propagator(h, 0.0, cutoff, range, SymbolKind::Continuum, grid);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    g.values[i].pp -= c.values[i].pp;
    g.values[i].pm -= c.values[i].pm;
    g.values[i].mp -= c.values[i].mp;
    g.values[i].mm -= c.values[i].mm;
  }
  return g;
}

ScaleDecomposition::ScaleDecomposition(double m, const GevreyCutoff& cutoff, int range, int h_max, int grid)
    : m_(m), h_star_(deepest_scale(m, h_max)), range_(range) {
  for (int h = h_star_ + 1; h <= 0; ++h) scales_.emplace(h, single_scale_propagator(h, m, cutoff, range,
                                                                                 SymbolKind::Lattice, grid));
  bundle_ = infrared_bundle(h_star_, m, cutoff, range);
}

const ScaleTable& ScaleDecomposition::scale(int h) const {
  auto it = scales_.find(h);
  if (it == scales_.end()) throw Error("ScaleOutOfRange", "no single-scale table for h = " + std::to_string(h));
  return it->second;
}

Mat2 ScaleDecomposition::reassembled(int x1, int x2) const {
  Mat2 s = bundle_(x1, x2);
  for (const auto& [h, t] : scales_) {
    Mat2 v = t(x1, x2);
    s.pp += v.pp;
    s.pm += v.pm;
    s.mp += v.mp;
    s.mm += v.mm;
  }
  return s;
}

ScaleRay single_scale_ray(int h, double m, const GevreyCutoff& cutoff, int x_max, int grid) {
  check_scale(h);
  if (x_max < 1) throw Error("InvalidArgument", "ray needs x_max >= 1");
  ScaleRay r;
  r.h = h;
  const int n = grid_points(h, cutoff, grid, x_max);
  r.values = tensor_sum(h, cutoff, lattice_symbol, m, n, 0, x_max + 1, 0, 1);
  return r;
}

double entry_norm(const Mat2& g) {
  return std::max({std::abs(g.pp), std::abs(g.pm), std::abs(g.mp), std::abs(g.mm)});
}

std::vector<Mat2> ray_derivative(const ScaleRay& ray) {
  std::vector<Mat2> d;
  for (std::size_t x = 0; x + 1 < ray.values.size(); ++x) {
    const Mat2& a = ray.values[x];
    const Mat2& b = ray.values[x + 1];
    d.push_back({b.pp - a.pp, b.pm - a.pm, b.mp - a.mp, b.mm - a.mm});
  }
  return d;
}

double sup_norm(const std::vector<Mat2>& values) {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, entry_norm(v));
  return s;
}

double sup_offdiagonal(const std::vector<Mat2>& values) {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, std::abs(v.pm));
  return s;
}

DecayFit fit_stretched_decay(int h, const std::vector<double>& distance, const std::vector<double>& norm,
                             double rel_floor) {
  if (distance.size() != norm.size()) throw Error("InvalidArgument", "distance/norm size mismatch");
  std::vector<std::size_t> order(distance.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distance[a] > distance[b]; });
  // Envelope: running max from the far end inward.
  std::vector<double> s, y;
  double env = 0.0, top = 0.0;
  for (double v : norm) top = std::max(top, v);
  for (std::size_t i : order) {
    env = std::max(env, norm[i]);
    if (env <= rel_floor * top || env <= 0.0) continue;
    s.push_back(std::sqrt(std::ldexp(distance[i], h)));
    y.push_back(std::log(env));
  }
  DecayFit f;
  f.points = static_cast<int>(s.size());
  if (f.points < 3) return f;
  const double n = f.points;
  double ms = 0, my = 0;
  for (int i = 0; i < f.points; ++i) ms += s[i], my += y[i];
  ms /= n, my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < f.points; ++i) {
    sxx += (s[i] - ms) * (s[i] - ms);
    sxy += (s[i] - ms) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return f;
  const double slope = sxy / sxx;
  const double icept = my - slope * ms;
  f.c = -slope;
  f.C = std::exp(icept);
  f.r2 = sxy * sxy / (sxx * syy);
  double rss = 0.0;
  for (int i = 0; i < f.points; ++i) rss += std::pow(y[i] - icept - slope * s[i], 2);
  f.residual = std::sqrt(rss / n);
  return f;
}

DecayFit verify_decay(int h, const ScaleRay& ray, double rel_floor) {
  std::vector<double> d, v;
  for (std::size_t x = 0; x < ray.values.size(); ++x) {
    d.push_back(static_cast<double>(x));
    v.push_back(entry_norm(ray.values[x]));
  }
  return fit_stretched_decay(h, d, v, rel_floor);
}

DecayFit verify_decay(int h, const ScaleTable& table, double rel_floor) {
  std::vector<double> d, v;
  for (int x1 = -table.range; x1 <= table.range; ++x1)
    for (int x2 = -table.range; x2 <= table.range; ++x2) {
      d.push_back(std::hypot(x1, x2));
      v.push_back(entry_norm(table(x1, x2)));
    }
  return fit_stretched_decay(h, d, v, rel_floor);
}

CutoffCheck check_cutoffs(const GevreyCutoff& cutoff, int h_star, int n, std::uint64_t seed) {
  if (h_star >= 0) throw Error("ScaleOutOfRange", "need h* < 0");
  CutoffCheck r;
  // Partition of unity on the n x n grid, with chi_bar = chi_t(k1) chi_t(k2)
  // tabulated per axis at k and k - pi.
  std::vector<double> k(n), c0(n), c1(n);
  for (int a = 0; a < n; ++a) {
    k[a] = -kPi + 2.0 * kPi * a / n;
    c0[a] = cutoff.chi_tilde(k[a]);
    c1[a] = cutoff.chi_tilde(k[a] - kPi);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = c0[a] * c0[b] + c1[a] * c0[b] + c0[a] * c1[b] + c1[a] * c1[b];
      r.partition_of_unity = std::max(r.partition_of_unity, std::abs(s - 1.0));
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double pts[4][2] = {{0, 0}, {kPi, 0}, {0, kPi}, {kPi, kPi}};
  for (int i = 0; i < 1000; ++i) {
    double k1 = -kPi + 2 * kPi * unit(rng), k2 = -kPi + 2 * kPi * unit(rng), s = 0.0;
    for (const auto& p : pts) s += cutoff.chi_bar(k1 - p[0], k2 - p[1]);
    r.partition_of_unity = std::max(r.partition_of_unity, std::abs(s - 1.0));
  }
  // Scale sum and supports: n points, log-spaced in |k| from deep below the
  // bundle to the zone corner, each in a random direction.
  const double lo = std::ldexp(1.0, h_star - 3), hi = kPi * std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    const double rho = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    const double phi = 2 * kPi * unit(rng);
    const double k1 = reduce_momentum(rho * std::cos(phi)), k2 = reduce_momentum(rho * std::sin(phi));
    std::vector<double> f(-h_star + 1, 0.0);
    double s = cutoff.chi_h(h_star, k1, k2);
    for (int h = h_star + 1; h <= 0; ++h) s += f[h - h_star] = cutoff.f_h(h, k1, k2);
    r.scale_sum = std::max(r.scale_sum, std::abs(s - cutoff.chi_bar(k1, k2)));
    for (int a = 1; a < static_cast<int>(f.size()); ++a)
      for (int b = a + 2; b < static_cast<int>(f.size()); ++b)
        r.disjoint_support = std::max(r.disjoint_support, std::abs(f[a] * f[b]));
  }
  // Rotations keep |k| < pi inside the zone.
  for (int i = 0; i < 1000; ++i) {
    const double rho = kPi * unit(rng), phi = 2 * kPi * unit(rng), rot = 2 * kPi * unit(rng);
    const double a = cutoff.chi_rot(rho * std::cos(phi), rho * std::sin(phi));
    const double b = cutoff.chi_rot(rho * std::cos(phi + rot), rho * std::sin(phi + rot));
    r.rotation = std::max(r.rotation, std::abs(a - b));
  }
  return r;
}

}  // namespace dimerlab
