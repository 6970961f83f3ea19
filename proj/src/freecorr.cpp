#include "dimerlab/freecorr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dimerlab {

namespace {

bool same_bond(const Bond& a, const Bond& b) { return a == b; }

Site head_plane(const Bond& b) {
  return b.j == 1 ? Site{b.x.x1 + 1, b.x.x2} : Site{b.x.x1, b.x.x2 + 1};
}

cplx pf_small(const CMatrix& a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  if (n == 2) return a(0, 1);
  if (n == 4) return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  return pfaffian_unchecked(a);
}

}  // namespace

double DimerCorrelator::moment(std::vector<Bond> bonds) const {
  std::vector<Bond> distinct;
  for (const auto& b : bonds) {
    Bond c = canonical(b);
    bool dup = false;
    for (const auto& d : distinct) dup = dup || same_bond(canonical(d), c);
    if (!dup) distinct.push_back(b);
  }
  return distinct_moment(distinct);
}

double DimerCorrelator::cumulant(const std::vector<Bond>& bonds) const {
  const int k = static_cast<int>(bonds.size());
  if (k > kMaxCumulantOrder) throw Error("Unsupported", "cumulant order exceeds 6");
  std::vector<double> mom(1u << k, 0.0);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<Bond> sub;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) sub.push_back(bonds[i]);
    mom[mask] = moment(sub);
  }
  mom[0] = 1.0;
  return cumulant_from_moments(k, [&](unsigned m) { return mom[m]; });
}

cplx WickCorrelator::sector_value(const std::vector<Bond>& bonds) const {
  const int k = static_cast<int>(bonds.size());
  std::vector<Site> pts;
  cplx pref = 1.0;
  for (const auto& b : bonds) {
    pts.push_back(b.x);
    pts.push_back(head_plane(b));
    pref *= -k_(b);
  }
  CMatrix a = CMatrix::Zero(2 * k, 2 * k);
  for (int i = 0; i < 2 * k; ++i)
    for (int j = i + 1; j < 2 * k; ++j) {
      a(i, j) = g_(pts[i], pts[j]);
      a(j, i) = -a(i, j);
    }
  return pref * pf_small(a);
}

double WickCorrelator::distinct_moment(const std::vector<Bond>& bonds) const {
  return sector_value(bonds).real();
}

InfiniteCorrelator::InfiniteCorrelator(std::shared_ptr<const InfinitePropagator> g)
    : WickCorrelator(
          [g](Site x, Site y) { return (*g)(x, y); },
          [m = g->m()](const Bond& b) {
            double t = bond_weight(b, m);
            return b.j == 1 ? cplx(t, 0.0) : cplx(0.0, t);
          }),
      g_(std::move(g)) {}

FlavorCorrelator::FlavorCorrelator(const TorusLattice& lat, double m, Flavor f)
    : FlavorCorrelator(lat, m, f, std::make_shared<FinitePropagator>(lat, m, f)) {}

FlavorCorrelator::FlavorCorrelator(const TorusLattice& lat, double m, Flavor f,
                                   std::shared_ptr<FinitePropagator> g)
    : WickCorrelator([g](Site x, Site y) { return g->at(x, y); },
                     [lat, m, f](const Bond& b) { return kasteleyn_entry(lat, m, f, b); }),
      lat_(lat),
      g_(std::move(g)) {}

FourFlavorCorrelator::FourFlavorCorrelator(const TorusLattice& lat, double m)
    : lat_(lat), m_(m) {
  cplx z = 0.0;
  for (int s = 0; s < 4; ++s) {
    k_[s] = kasteleyn_matrix(lat, m, kFlavors[s].theta, kFlavors[s].tau).k;
    PfaffianResult r = pfaffian_checked(k_[s]);
    singular_[s] = r.singular;
    pf_[s] = r.value;
    z += 0.5 * static_cast<double>(kFlavorCoefficients[s]) * r.value;
    if (!r.singular) flavors_[s] = std::make_unique<FlavorCorrelator>(lat, m, kFlavors[s]);
  }
  z_ = z.real();
}

cplx FourFlavorCorrelator::fixed_pairs(int s, const std::vector<Bond>& bonds) const {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& b : bonds) {
    int bi = lat_.bond_index(lat_.wrap(b));
    pairs.push_back({lat_.tail_index(bi), lat_.head_index(bi)});
  }
  return pfaffian_fixed_pairs(k_[s], pairs);
}

double FourFlavorCorrelator::distinct_moment(const std::vector<Bond>& bonds) const {
  cplx total = 0.0;
  for (int s = 0; s < 4; ++s) {
    double c = 0.5 * kFlavorCoefficients[s];
    if (singular_[s])
      total += c * fixed_pairs(s, bonds);
    else
      total += c * pf_[s] * flavors_[s]->sector_value(bonds);
  }
  return total.real() / z_;
}

double FourFlavorCorrelator::moment_by_expansion(const std::vector<Bond>& bonds) const {
  cplx total = 0.0;
  for (int s = 0; s < 4; ++s) total += 0.5 * kFlavorCoefficients[s] * fixed_pairs(s, bonds);
  return total.real() / z_;
}

double dimer_moment(const std::vector<Bond>& bonds, const DimerCorrelator& c) {
  return c.moment(bonds);
}

double dimer_cumulant(const std::vector<Bond>& bonds, const DimerCorrelator& c) {
  return c.cumulant(bonds);
}

double two_point_asymptotic(int d1, int d2, int j, int jp, double K, double Kt, double kappa) {
  if (d1 == 0 && d2 == 0) throw Error("Coincident", "two_point_asymptotic needs x != y");
  const cplx z(d1, d2);
  cplx ij = std::pow(cplx(0.0, 1.0), j + jp);
  double first = -(K / (2.0 * kPi * kPi)) * parity_sign(d1 + d2) * (ij / (z * z)).real();
  double second = 0.0;
  if (j == jp)
    second = (Kt / (2.0 * kPi * kPi)) * parity_sign(j == 1 ? d1 : d2) *
             std::pow(std::abs(z), -2.0 * kappa);
  return first + second;
}

cplx n_point_fermion_loop(const std::vector<cplx>& points,
                          const std::function<cplx(cplx)>& kernel) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw Error("TooFewPoints", "loop needs at least two points");
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  cplx total = 0.0;
  do {
    cplx term = kernel(points[0] - points[perm[0]]);
    for (int i = 0; i + 1 < n - 1; ++i) term *= kernel(points[perm[i]] - points[perm[i + 1]]);
    term *= kernel(points[perm[n - 2]] - points[0]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return -total;
}

}  // namespace dimerlab
