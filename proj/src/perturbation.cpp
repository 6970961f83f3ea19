#include "dimerlab/perturbation.hpp"

#include <climits>
#include <cmath>
#include <set>

namespace dimerlab {

PlaquetteVertex plaquette_vertex(Face p) {
  Site x{p.a1, p.a2};
  return {p,
          {Bond{x, 1}, Bond{{x.x1, x.x2 + 1}, 1}},
          {Bond{x, 2}, Bond{{x.x1 + 1, x.x2}, 2}}};
}

double plaquette_insertion_cumulant(const std::vector<Bond>& bonds, Face p, const DimerCorrelator& c) {
  const int k = static_cast<int>(bonds.size());
  if (k + 1 > kMaxCumulantOrder) throw Error("Unsupported", "at most 5 bonds besides the plaquette");
  const PlaquetteVertex v = plaquette_vertex(p);
  const unsigned ybit = 1u << k;
  std::vector<double> mom(1u << (k + 1), 0.0);
  for (unsigned mask = 1; mask < mom.size(); ++mask) {
    std::vector<Bond> sub;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) sub.push_back(bonds[i]);
    if (mask & ybit) {
      auto h = sub, w = sub;
      h.insert(h.end(), v.horizontal.begin(), v.horizontal.end());
      w.insert(w.end(), v.vertical.begin(), v.vertical.end());
      mom[mask] = c.moment(h) + c.moment(w);
    } else {
      mom[mask] = c.moment(sub);
    }
  }
  mom[0] = 1.0;
  return cumulant_from_moments(k + 1, [&](unsigned m) { return mom[m]; });
}

double plaquette_exclusion_moment(Face p, const DimerCorrelator& c) {
  const PlaquetteVertex v = plaquette_vertex(p);
  return c.moment({v.horizontal[0], v.horizontal[1], v.vertical[0], v.vertical[1]});
}

namespace {

// Window centre in quarter units: S = min D + max D over the doubled bond
// midpoints D. A face's distance is measured from its own midpoint, which
// makes the window symmetric under the reflections fixing a single bond.
std::array<int, 2> window_centre(const std::vector<Bond>& bonds) {
  std::array<int, 2> lo{INT32_MAX, INT32_MAX}, hi{INT32_MIN, INT32_MIN};
  for (const auto& b : bonds) {
    int d[2] = {2 * b.x.x1 + (b.j == 1), 2 * b.x.x2 + (b.j == 2)};
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], d[i]);
      hi[i] = std::max(hi[i], d[i]);
    }
  }
  return {lo[0] + hi[0], lo[1] + hi[1]};
}

int face_distance(Face p, const std::array<int, 2>& s) {
  int a = (std::abs(4 * p.a1 + 2 - s[0]) + 1) / 4;
  int b = (std::abs(4 * p.a2 + 2 - s[1]) + 1) / 4;
  return std::max(a, b);
}

// All faces with lo <= distance <= hi, in a fixed order.
std::vector<Face> window(const std::array<int, 2>& s, int lo, int hi) {
  std::vector<Face> out;
  const int c1 = s[0] / 4, c2 = s[1] / 4;
  for (int a2 = c2 - hi - 2; a2 <= c2 + hi + 2; ++a2)
    for (int a1 = c1 - hi - 2; a1 <= c1 + hi + 2; ++a1) {
      int d = face_distance({a1, a2}, s);
      if (d >= lo && d <= hi) out.push_back({a1, a2});
    }
  return out;
}

double face_sum(const std::vector<Bond>& bonds, const DimerCorrelator& c, const std::vector<Face>& faces) {
  CompensatedSum s;
  for (Face f : faces) s.add(plaquette_insertion_cumulant(bonds, f, c));
  return s.value();
}

}  // namespace

FirstOrderResult first_order_cumulant(const std::vector<Bond>& bonds, const DimerCorrelator& c, int R,
                                      const TorusLattice* lattice, double tol) {
  if (bonds.empty()) throw Error("Unsupported", "need at least one bond");
  if (R < 0) throw Error("InvalidArgument", "negative plaquette radius");
  FirstOrderResult r;
  const auto centre = window_centre(bonds);
  if (lattice) {
    std::set<int> seen;
    std::vector<Face> faces;
    for (Face f : window(centre, 0, R)) {
      Face w{lattice->wrap(f.a1), lattice->wrap(f.a2)};
      if (seen.insert(lattice->face_index(w)).second) faces.push_back(w);
    }
    r.value = face_sum(bonds, c, faces);
    r.plaquettes = static_cast<long>(faces.size());
    return r;
  }
  if (R < 2) throw Error("InvalidArgument", "infinite volume needs R >= 2");
  // Ring sums alternate in sign (the staggered part of the kernel), so the
  // partial sums are averaged over the windows R - 1 and R.
  std::vector<double> partial(R + 1);
  double acc = 0.0;
  for (int d = 0; d <= R; ++d) {
    auto ring = window(centre, d, d);
    acc += face_sum(bonds, c, ring);
    partial[d] = acc;
    r.plaquettes += static_cast<long>(ring.size());
  }
  auto averaged = [&](int d) { return 0.5 * (partial[d] + partial[d - 1]); };
  r.value = averaged(R);
  // S(inf) - S(R) = C / R^2 and S(R) - S(R/2) = 3 C / R^2.
  r.tail_estimate = (averaged(R) - averaged(std::max(1, R / 2))) / 3.0;
  r.flagged = std::abs(r.tail_estimate) > tol;
  return r;
}

}  // namespace dimerlab
