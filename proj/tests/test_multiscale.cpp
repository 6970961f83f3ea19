#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "dimerlab/multiscale.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

// Nested Gauss-Legendre in polar coordinates over the annulus carrying f_h
// (h < 0): an independent route to G^(h)(x).
Mat2 polar_single_scale(int h, double m, const GevreyCutoff& cut, int x1, int x2) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  // Nodes and weights of the 20-point rule on [-1, 1].
  std::vector<double> t, w;
  for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
    const double x = GL::abscissa()[i], wt = GL::weights()[i];
    t.push_back(x);
    w.push_back(wt);
    if (x != 0.0) {
      t.push_back(-x);
      w.push_back(wt);
    }
  }
  const double a = std::ldexp(kPi / 2 - cut.eps(), h - 1), b = std::ldexp(kPi / 2 + cut.eps(), h);
  const int radial_panels = 32, angular_panels = 32;
  const double dr = (b - a) / radial_panels, dp = 2 * kPi / angular_panels;
  Mat2 acc{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < radial_panels; ++i)
    for (std::size_t u = 0; u < t.size(); ++u) {
      const double rho = a + dr * (i + 0.5 + 0.5 * t[u]);
      const double wr = 0.5 * dr * w[u] * rho * cut.f_h_radial(h, rho);
      if (wr == 0.0) continue;
      for (int j = 0; j < angular_panels; ++j)
        for (std::size_t v = 0; v < t.size(); ++v) {
          const double phi = dp * (j + 0.5 + 0.5 * t[v]);
          const double k1 = rho * std::cos(phi), k2 = rho * std::sin(phi);
          const Mat2 sym = majorana_symbol(m, k1, k2);
          const cplx f = std::polar(wr * 0.5 * dp * w[v], -(k1 * x1 + k2 * x2));
          acc.pp += f * sym.pp;
          acc.pm += f * sym.pm;
          acc.mm += f * sym.mm;
        }
    }
  const double norm = 1.0 / (4 * kPi * kPi);
  acc.pp *= norm;
  acc.pm *= norm;
  acc.mm *= norm;
  acc.mp = -acc.pm;
  return acc;
}

double max_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.pp - b.pp), std::abs(a.pm - b.pm), std::abs(a.mp - b.mp), std::abs(a.mm - b.mm)});
}

}  // namespace

TEST_CASE("Gevrey cutoff pieces") {
  GevreyCutoff cut(0.4);
  CHECK(cut.chi_tilde(0.0) == 1.0);
  CHECK(cut.chi_tilde(kPi) == 0.0);
  CHECK(cut.primitive(0.4) == 1.0);
  CHECK(cut.primitive(-0.4) == 0.0);
  for (double k : {-0.39, -0.2, 0.0, 0.05, 0.31}) CHECK(std::abs(cut.primitive(k) + cut.primitive(-k) - 1.0) < 1e-12);
  CHECK_THROWS_AS(GevreyCutoff(0.0), Error);
  CHECK_THROWS_AS(GevreyCutoff(kPi / 4), Error);
  for (double k1 : {-1.0, 0.3, 2.9})
    for (double k2 : {-2.0, 0.1, 1.6}) {
      CHECK(cut.chi_bar(k1, k2) == doctest::Approx(cut.chi_bar(-k1, -k2)).epsilon(1e-15));
      CHECK(cut.chi_bar(k1, k2) >= 0.0);
      CHECK(cut.chi_bar(k1, k2) <= 1.0);
    }
  // No support at the other Fermi points.
  CHECK(cut.chi_bar(kPi, 0.0) == 0.0);
  CHECK(cut.chi_bar(0.0, kPi) == 0.0);
  CHECK(cut.chi_bar(kPi, kPi) == 0.0);
}

TEST_CASE("partition of unity, scale sum and disjoint supports") {
  GevreyCutoff cut(0.4);
  CutoffCheck c = check_cutoffs(cut, -20, 4096);
  CHECK(c.partition_of_unity < 1e-12);
  CHECK(c.scale_sum < 1e-12);
  CHECK(c.disjoint_support == 0.0);
  CHECK(c.rotation < 1e-12);
}

TEST_CASE("deepest scale") {
  CHECK(deepest_scale(0.0) == -20);
  CHECK(deepest_scale(0.0, 12) == -12);
  CHECK(deepest_scale(0.05) == -5);
  CHECK(deepest_scale(0.5) == -1);
  CHECK(deepest_scale(0.25) == -2);
  CHECK_THROWS_AS(deepest_scale(1.0), Error);
  CHECK_THROWS_AS(deepest_scale(-0.1), Error);
}

TEST_CASE("scales reassemble the Majorana propagator") {
  GevreyCutoff cut(0.4);
  for (double m : {0.05, 0.0}) {
    ScaleDecomposition d(m, cut, 32);
    MajoranaPropagator g(m, 32, cut);
    double err = 0.0;
    for (int a = -32; a <= 32; ++a)
      for (int b = -32; b <= 32; ++b) err = std::max(err, max_diff(d.reassembled(a, b), g(a, b)));
    CAPTURE(m);
    CHECK(err < 1e-8);
    if (m == 0.0) {
      // The bundled tail below 2^-20 is of order 2^-20.
      double tail = sup_norm(d.bundle().values);
      CHECK(tail < 4.0 * std::ldexp(1.0, -20));
      CHECK(tail > 0.0);
    }
  }
}

TEST_CASE("tensor grid matches polar quadrature") {
  GevreyCutoff cut(0.4);
  for (int h : {-1, -3}) {
    ScaleTable t = single_scale_propagator(h, 0.1, cut, 12);
    for (auto [x1, x2] : {std::pair{0, 0}, {3, 1}, {-7, 4}, {12, -12}}) {
      CAPTURE(h);
      CAPTURE(x1);
      CHECK(max_diff(t(x1, x2), polar_single_scale(h, 0.1, cut, x1, x2)) < 1e-12);
    }
  }
}

TEST_CASE("single-scale propagator symmetries") {
  GevreyCutoff cut(0.4);
  ScaleTable t = single_scale_propagator(-2, 0.2, cut, 10);
  double err = 0.0;
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= 10; ++b) {
      Mat2 v = t(a, b), w = t(-a, -b);
      err = std::max({err, std::abs(v.pp - std::conj(v.mm)), std::abs(v.pm + v.mp), std::abs(v.pm - std::conj(v.mp)),
                      std::abs(v.pp + w.pp), std::abs(v.mm + w.mm), std::abs(v.pm - w.pm)});
    }
  CHECK(err < 1e-14);
  // Diagonal entries are odd, so they vanish at the origin.
  CHECK(std::abs(t(0, 0).pp) < 1e-15);
}

TEST_CASE("single-scale amplitudes scale like 2^h") {
  GevreyCutoff cut(0.4);
  double prev = 0.0, prev_d = 0.0;
  for (int h = -1; h >= -8; --h) {
    ScaleRay r = single_scale_ray(h, 0.0, cut, 40 << (-h));
    const double s = sup_norm(r.values), d = sup_norm(ray_derivative(r));
    if (prev > 0.0) {
      CAPTURE(h);
      CHECK(std::log2(prev / s) >= 0.8);
      CHECK(std::log2(prev / s) <= 1.2);
      // One extra 2^h per derivative.
      CHECK(std::abs(std::log2(prev_d / d) - 2.0) < 0.2);
    }
    prev = s;
    prev_d = d;
  }
}

TEST_CASE("off-diagonal part is proportional to the mass") {
  GevreyCutoff cut(0.4);
  for (int h : {-1, -3}) {
    double ref = 0.0;
    for (double m : {0.005, 0.01, 0.02}) {
      ScaleRay r = single_scale_ray(h, m, cut, 40 << (-h));
      const double ratio = sup_offdiagonal(r.values) / m;
      if (ref == 0.0) ref = ratio;
      CAPTURE(m);
      CHECK(std::abs(ratio / ref - 1.0) < 0.05);
      CHECK(sup_offdiagonal(r.values) < sup_norm(r.values));
    }
    CHECK(sup_offdiagonal(single_scale_ray(h, 0.0, cut, 40).values) == 0.0);
  }
}

TEST_CASE("stretched exponential decay") {
  GevreyCutoff cut(0.4);
  DecayFit f4 = verify_decay(-4, single_scale_ray(-4, 0.0, cut, 200 << 4));
  CHECK(f4.c > 0.0);
  CHECK(f4.r2 >= 0.95);
  DecayFit f0 = verify_decay(0, single_scale_ray(0, 0.0, cut, 200));
  DecayFit f6 = verify_decay(-6, single_scale_ray(-6, 0.0, cut, 200 << 6));
  // Same rate in sqrt(2^h |x|): decay lengths differ by 2^6 in |x|.
  CHECK(f0.c / f6.c == doctest::Approx(1.0).epsilon(0.1));
  // A square table gives a consistent fit.
  DecayFit t = verify_decay(-1, single_scale_propagator(-1, 0.0, cut, 48));
  CHECK(t.c > 0.0);
  CHECK(t.r2 >= 0.9);
}

TEST_CASE("remainder after the continuum part is smaller by 2^h") {
  GevreyCutoff cut(0.4);
  double prev = 0.0;
  for (int h = 0; h >= -4; --h) {
    const double r = sup_norm(scale_remainder(h, cut, 24).values);
    const double g = sup_norm(single_scale_propagator(h, 0.0, cut, 24).values);
    const double bound = r / std::ldexp(1.0, 2 * h);
    CAPTURE(h);
    CHECK(r < g);
    if (prev > 0.0) CHECK(bound <= prev);
    prev = bound;
  }
  CHECK_THROWS_AS(single_scale_propagator(-2, 0.1, cut, 4, SymbolKind::Continuum), Error);
}
