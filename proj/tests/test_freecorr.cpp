#include <cmath>
#include <random>

#include "dimerlab/cumulants.hpp"
#include "dimerlab/enumerate.hpp"
#include "dimerlab/freecorr.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = std::log(x[i]), b = std::log(std::abs(y[i]));
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<Bond> bonds_of(const TorusLattice& lat, const std::vector<int>& idx) {
  std::vector<Bond> out;
  for (int i : idx) out.push_back(lat.bond(i));
  return out;
}

}  // namespace

TEST_CASE("set partitions have Bell-number sizes") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int k = 0; k <= kMaxCumulantOrder; ++k) CHECK(set_partitions(k).size() == bell[k]);
  for (const auto& p : set_partitions(5)) {
    unsigned all = 0;
    for (unsigned b : p) {
      CHECK((all & b) == 0u);
      all |= b;
    }
    CHECK(all == 31u);
  }
  CHECK_THROWS_AS(set_partitions(7), Error);
}

TEST_CASE("single-bond values at m = 0") {
  TorusLattice lat(4);
  FourFlavorCorrelator c(lat, 0.0);
  Bond b{{0, 0}, 1};
  CHECK(std::abs(c.moment({b}) - 0.25) < 1e-12);
  CHECK(std::abs(c.cumulant({b, b}) - 3.0 / 16.0) < 1e-12);
  // Bonds sharing the site (1, 0).
  CHECK(std::abs(c.moment({b, Bond{{1, 0}, 2}})) < 1e-12);
  CHECK(std::abs(c.moment({b, Bond{{1, 0}, 1}})) < 1e-12);
  CHECK_THROWS_AS(c.cumulant(std::vector<Bond>(7, b)), Error);
}

TEST_CASE("Wick moments equal enumeration") {
  for (int L : {4, 6})
    for (double m : {0.0, 0.2}) {
      TorusLattice lat(L);
      FourFlavorCorrelator c(lat, m);
      Ensemble e;
      e.m = m;
      BondMoments ref(lat, e);
      const int nb = lat.num_bonds();
      double worst = 0.0;
      for (int a = 0; a < nb; ++a) {
        worst = std::max(worst, std::abs(c.moment(bonds_of(lat, {a})) - ref.moment({a})));
        for (int b = a + 1; b < nb; ++b)
          worst = std::max(worst, std::abs(c.moment(bonds_of(lat, {a, b})) - ref.moment({a, b})));
      }
      // All triples on L = 4; a random sample on L = 6.
      std::mt19937_64 rng(17 + L);
      std::uniform_int_distribution<int> pick(0, nb - 1);
      auto triple = [&](int a, int b, int d) {
        double w = c.moment(bonds_of(lat, {a, b, d}));
        worst = std::max(worst, std::abs(w - ref.moment({a, b, d})));
        double k = c.cumulant(bonds_of(lat, {a, b, d}));
        double kr = ref.moment({a, b, d}) - ref.moment({a, b}) * ref.moment({d}) -
                    ref.moment({a, d}) * ref.moment({b}) - ref.moment({b, d}) * ref.moment({a}) +
                    2 * ref.moment({a}) * ref.moment({b}) * ref.moment({d});
        worst = std::max(worst, std::abs(k - kr));
      };
      if (L == 4) {
        for (int a = 0; a < nb; ++a)
          for (int b = a + 1; b < nb; ++b)
            for (int d = b + 1; d < nb; ++d) triple(a, b, d);
      } else {
        for (int s = 0; s < 3000; ++s) triple(pick(rng), pick(rng), pick(rng));
      }
      CHECK(worst < 1e-9);
    }
}

TEST_CASE("fixed-pair expansion agrees with the sector Pfaffians") {
  TorusLattice lat(4);
  FourFlavorCorrelator c(lat, 0.0);
  CHECK(c.sector_singular(0));
  std::vector<Bond> bs{{{0, 0}, 1}, {{-1, 1}, 2}, {{1, 2}, 1}};
  CHECK(std::abs(c.moment(bs) - c.moment_by_expansion(bs)) < 1e-12);
}

TEST_CASE("two-point asymptotics") {
  auto ip = std::make_shared<InfinitePropagator>(0.0, 56);
  InfiniteCorrelator c(ip);
  // Axis-swap symmetry.
  for (int r = 2; r < 10; ++r) {
    CHECK(std::abs(two_point_asymptotic(r, 0, 1, 1) - two_point_asymptotic(0, r, 2, 2)) < 1e-15);
    CHECK(std::abs(two_point_asymptotic(r, 0, 2, 2) - two_point_asymptotic(0, r, 1, 1)) < 1e-15);
  }
  struct Geometry {
    int u1, u2, j, jp;
  };
  for (Geometry g : {Geometry{1, 0, 1, 1}, Geometry{1, 0, 2, 2}, Geometry{0, 1, 1, 1},
                     Geometry{1, 1, 1, 1}, Geometry{1, 1, 1, 2}}) {
    std::vector<double> r, res;
    for (int n = 6; n <= 48; n += 2) {
      int d1 = g.u1 * n, d2 = g.u2 * n;
      Bond a{{d1, d2}, g.j}, b{{0, 0}, g.jp};
      double exact = c.cumulant({a, b});
      r.push_back(std::hypot(d1, d2));
      res.push_back(exact - two_point_asymptotic(d1, d2, g.j, g.jp));
    }
    CAPTURE(g.u1);
    CAPTURE(g.u2);
    CAPTURE(g.j);
    CAPTURE(g.jp);
    CHECK(-loglog_slope(r, res) >= 2.8);
  }
}

TEST_CASE("cyclic loops of the continuum kernel cancel") {
  auto kernel = [](cplx z) { return 1.0 / (4.0 * kPi * z); };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int n : {3, 4})
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<cplx> pts;
      for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
      double scale = 1.0;
      for (int i = 1; i < n; ++i) scale *= std::abs(kernel(pts[i] - pts[0]));
      CHECK(std::abs(n_point_fermion_loop(pts, kernel)) < 1e-10 * std::max(1.0, scale));
    }
  std::vector<cplx> two{{0.0, 0.0}, {3.0, 1.0}};
  cplx z = two[0] - two[1];
  CHECK(std::abs(n_point_fermion_loop(two, kernel) - (-kernel(z) * kernel(-z))) < 1e-15);
}
