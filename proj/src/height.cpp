#include "dimerlab/height.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>

namespace dimerlab {

int height_difference_quarters(const TorusLattice& lat, const std::vector<char>& occ,
                               const DualPath& path) {
  int q = 0;
  for (const auto& s : path.steps) q += s.sigma * (4 * occ[lat.bond_index(lat.wrap(s.bond))] - 1);
  return q;
}

int height_difference_quarters(const TorusLattice& lat, const Matching& m, const DualPath& path) {
  return height_difference_quarters(lat, m.occupied, path);
}

double height_difference(const TorusLattice& lat, const Matching& m, const DualPath& path) {
  return height_difference_quarters(lat, m, path) / 4.0;
}

HeightField height_field(const TorusLattice& lat, const Matching& m, std::uint64_t seed) {
  HeightField hf;
  hf.L = lat.L();
  hf.quarters.assign(lat.num_faces(), 0);
  std::vector<char> seen(lat.num_faces(), 0);
  const int lo = -lat.L() / 2 + 1, hi = lat.L() / 2;
  std::mt19937_64 rng(seed);
  std::array<int, 4> dirs{0, 1, 2, 3};
  std::deque<Face> queue{Face{0, 0}};
  seen[lat.face_index({0, 0})] = 1;
  while (!queue.empty()) {
    Face f;
    if (seed != 0 && (rng() & 1)) {
      f = queue.back();
      queue.pop_back();
    } else {
      f = queue.front();
      queue.pop_front();
    }
    if (seed != 0) std::shuffle(dirs.begin(), dirs.end(), rng);
    for (int d : dirs) {
      DualStep s = dual_step(f, d);
      if (s.to.a1 < lo || s.to.a1 > hi || s.to.a2 < lo || s.to.a2 > hi) continue;
      int ti = lat.face_index(s.to);
      if (seen[ti]) continue;
      seen[ti] = 1;
      hf.quarters[ti] = hf.quarters[lat.face_index(f)] +
                        s.sigma * (4 * m.occupied[lat.bond_index(lat.wrap(s.bond))] - 1);
      queue.push_back(s.to);
    }
  }
  return hf;
}

WindingPeriods winding(const TorusLattice& lat, const std::vector<char>& occ) {
  const int L = lat.L();
  DualPath p1 = path_from_moves({0, 0}, std::vector<int>(L, 0));
  DualPath p2 = path_from_moves({0, 0}, std::vector<int>(L, 1));
  // Over a full loop sum sigma = 0, so the period is sum sigma 1_b.
  return {height_difference_quarters(lat, occ, p1) / 4, height_difference_quarters(lat, occ, p2) / 4};
}

WindingPeriods winding(const TorusLattice& lat, const Matching& m) { return winding(lat, m.occupied); }

namespace {

Site head_plane(const Bond& b) {
  return b.j == 1 ? Site{b.x.x1 + 1, b.x.x2} : Site{b.x.x1, b.x.x2 + 1};
}

double path_sum(int n, const std::vector<DualPath>& paths, const DimerCorrelator& corr) {
  std::vector<const DualStep*> pick(n);
  double total = 0.0;
  std::function<void(int, int)> rec = [&](int level, int sign) {
    if (level == n) {
      std::vector<Bond> bonds(n);
      for (int i = 0; i < n; ++i) bonds[i] = pick[i]->bond;
      total += sign * corr.cumulant(bonds);
      return;
    }
    for (const auto& s : paths[level].steps) {
      pick[level] = &s;
      rec(level + 1, sign * s.sigma);
    }
  };
  rec(0, 1);
  return total;
}

struct SiteSet {
  std::map<std::pair<int, int>, int> index;
  std::vector<Site> sites;
  int add(Site s) {
    auto [it, inserted] = index.try_emplace({s.x1, s.x2}, static_cast<int>(sites.size()));
    if (inserted) sites.push_back(s);
    return it->second;
  }
};

// sum_b w_b D_b on the given site set, where D_b has K_xy at (x, y) and -K_xy at (y, x).
CMatrix bond_matrix(const std::vector<DualStep>& steps, SiteSet& set,
                    const std::function<cplx(const DualStep&)>& w,
                    const WickCorrelator::Entry& k) {
  for (const auto& s : steps) {
    set.add(s.bond.x);
    set.add(head_plane(s.bond));
  }
  const int n = static_cast<int>(set.sites.size());
  CMatrix d = CMatrix::Zero(n, n);
  for (const auto& s : steps) {
    int x = set.add(s.bond.x), y = set.add(head_plane(s.bond));
    cplx v = w(s) * k(s.bond);
    d(x, y) += v;
    d(y, x) -= v;
  }
  return d;
}

CMatrix propagator_block(const std::vector<Site>& a, const std::vector<Site>& b,
                         const WickCorrelator::Propagator& g) {
  CMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = (a[i] == b[j]) ? cplx(0.0) : g(a[i], b[j]);
  return m;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

void compositions(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = 1; p <= n; ++p) {
    cur.push_back(p);
    compositions(n - p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double exact_height_cumulant_trace(int n, Face xi, Face eta, const WickCorrelator::Propagator& g,
                                   const WickCorrelator::Entry& k, CumulantRoute route) {
  if (n < 1 || n > 4) throw Error("Unsupported", "height cumulants are implemented for n <= 4");
  if (xi == eta) return 0.0;
  if (route == CumulantRoute::SinglePath) {
    DualPath p = path_from_moves(xi, staircase_moves(xi, eta));
    SiteSet set;
    CMatrix d_odd = bond_matrix(p.steps, set, [](const DualStep& s) { return cplx(s.sigma); }, k);
    CMatrix d_even = bond_matrix(p.steps, set, [](const DualStep&) { return cplx(1.0); }, k);
    CMatrix gv = propagator_block(set.sites, set.sites, g);
    CMatrix a = gv * d_odd, b = gv * d_even;
    if (n == 1) {
      double shift = 0.0;
      for (const auto& s : p.steps) shift -= 0.25 * s.sigma;
      return 0.5 * a.trace().real() + shift;
    }
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, cur, comps);
    cplx coef = 0.0;
    for (const auto& c : comps) {
      const int q = static_cast<int>(c.size());
      CMatrix prod = CMatrix::Identity(gv.rows(), gv.cols());
      double scale = 1.0;
      for (int p_i : c) {
        prod = (prod * (p_i % 2 ? a : b)).eval();
        scale /= factorial(p_i);
      }
      coef += (q % 2 ? 1.0 : -1.0) / q * scale * prod.trace();
    }
    return 0.5 * factorial(n) * coef.real();
  }
  if (route != CumulantRoute::LoopTrace) throw Error("BadRoute", "trace evaluation needs a trace route");
  if (n == 1) return exact_height_cumulant_trace(1, xi, eta, g, k, CumulantRoute::SinglePath);
  auto paths = build_paths(xi, eta, n, PathStyle::WellSeparated);
  std::vector<SiteSet> sets(n);
  std::vector<CMatrix> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = bond_matrix(paths[i].steps, sets[i], [](const DualStep& s) { return cplx(s.sigma); }, k);
  // W_ij = D_i G_{V_i V_j}; tr(G D_1 ... G D_n) = tr(W_12 W_23 ... W_n1).
  std::vector<std::vector<CMatrix>> w(n, std::vector<CMatrix>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) w[i][j] = d[i] * propagator_block(sets[i].sites, sets[j].sites, g);
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  cplx total = 0.0;
  do {
    // The trace is tr(G D_1 G D_pi2 ...) = tr(W_{1,pi2} W_{pi2,pi3} ... W_{pin,1}).
    CMatrix prod = w[0][perm[0]];
    for (int i = 0; i + 1 < n - 1; ++i) prod = (prod * w[perm[i]][perm[i + 1]]).eval();
    prod = (prod * w[perm[n - 2]][0]).eval();
    total += prod.trace();
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 0.5 * (n % 2 ? 1.0 : -1.0) * total.real();
}

double exact_height_cumulant(int n, Face xi, Face eta, const DimerCorrelator& corr,
                             CumulantRoute route, const TorusLattice* lattice) {
  if (n < 1 || n > 4) throw Error("Unsupported", "height cumulants are implemented for n <= 4");
  if (xi == eta) return 0.0;
  if (route != CumulantRoute::PathSum && route != CumulantRoute::RepeatedPath)
    throw Error("BadRoute", "trace routes need a single-propagator correlator");
  if (n == 1 || route == CumulantRoute::RepeatedPath) {
    DualPath p = path_from_moves(xi, staircase_moves(xi, eta));
    double v = 0.0;
    if (n > 1) return path_sum(n, std::vector<DualPath>(n, p), corr);
    for (const auto& s : p.steps) v += s.sigma * (corr.occupancy(s.bond) - 0.25);
    return v;
  }
  auto paths = build_paths(xi, eta, n, PathStyle::WellSeparated, lattice);
  return path_sum(n, paths, corr);
}

double exact_height_cumulant(int n, Face xi, Face eta, const InfiniteCorrelator& corr,
                             CumulantRoute route) {
  if (route == CumulantRoute::PathSum || route == CumulantRoute::RepeatedPath)
    return exact_height_cumulant(n, xi, eta, static_cast<const DimerCorrelator&>(corr), route);
  const InfinitePropagator& ip = corr.propagator();
  const double m = ip.m();
  return exact_height_cumulant_trace(
      n, xi, eta, [&ip](Site x, Site y) { return ip(x, y); },
      [m](const Bond& b) {
        double t = bond_weight(b, m);
        return b.j == 1 ? cplx(t, 0.0) : cplx(0.0, t);
      },
      route);
}

cplx electric_correlator(double alpha, Face xi, Face eta, const InfinitePropagator& ip,
                         int steps) {
  if (xi == eta) return 1.0;
  const double m = ip.m();
  DualPath p = path_from_moves(xi, staircase_moves(xi, eta));
  WickCorrelator::Entry k = [m](const Bond& b) {
    double t = bond_weight(b, m);
    return b.j == 1 ? cplx(t, 0.0) : cplx(0.0, t);
  };
  SiteSet set;
  for (const auto& s : p.steps) {
    set.add(s.bond.x);
    set.add(head_plane(s.bond));
  }
  CMatrix gv = propagator_block(set.sites, set.sites, [&ip](Site x, Site y) { return ip(x, y); });
  const int nv = static_cast<int>(set.sites.size());
  cplx root = 1.0;
  for (int st = 1; st <= steps; ++st) {
    const double a = alpha * st / steps;
    CMatrix dk = bond_matrix(
        p.steps, set, [a](const DualStep& s) { return std::exp(cplx(0.0, a * s.sigma)) - 1.0; }, k);
    cplx det = (CMatrix::Identity(nv, nv) + gv * dk).determinant();
    cplx r = std::sqrt(det);
    root = std::abs(r - root) <= std::abs(-r - root) ? r : -r;
  }
  double sigma_sum = 0.0;
  for (const auto& s : p.steps) sigma_sum += s.sigma;
  return std::exp(cplx(0.0, -alpha * sigma_sum / 4.0)) * root;
}

}  // namespace dimerlab
