#include <cmath>

#include "dimerlab/enumerate.hpp"
#include "dimerlab/kasteleyn.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = std::log(x[i]), b = std::log(std::abs(y[i]));
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("Kasteleyn entries and boundary flips") {
  TorusLattice lat(4);
  auto k = kasteleyn_matrix(lat, 0.0, 0, 0).k;
  int o = lat.site_index({0, 0});
  CHECK(k(o, lat.site_index({1, 0})) == cplx(1.0, 0.0));
  CHECK(k(o, lat.site_index({0, 1})) == cplx(0.0, 1.0));
  CHECK(k(lat.site_index({1, 0}), o) == cplx(-1.0, 0.0));
  auto km = kasteleyn_matrix(lat, 0.1, 0, 0).k;
  CHECK(std::abs(km(o, lat.site_index({1, 0})) - 1.1) < 1e-15);
  auto k10 = kasteleyn_matrix(lat, 0.0, 1, 0).k;
  int right = lat.site_index({2, 0}), left = lat.site_index({-1, 0});
  CHECK(k(right, left) == cplx(1.0, 0.0));
  CHECK(k10(right, left) == cplx(-1.0, 0.0));
  auto k01 = kasteleyn_matrix(lat, 0.0, 0, 1).k;
  int top = lat.site_index({0, 2}), bottom = lat.site_index({0, -1});
  CHECK(k01(top, bottom) == cplx(0.0, -1.0));
  CHECK((k + k.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free partition function equals weighted matching sum") {
  for (int L : {4, 6}) {
    TorusLattice lat(L);
    double z0 = partition_function_free(lat, 0.0);
    CHECK(std::llround(z0) == count_matchings(lat));
    CHECK(std::abs(z0 - std::llround(z0)) < 1e-9 * z0);
    Ensemble e;
    e.m = 0.2;
    double zw = exact_partition_function(lat, e);
    CHECK(std::abs(partition_function_free(lat, 0.2) - zw) < 1e-9 * zw);
  }
  FreePartition fp = partition_sectors(TorusLattice(4), 0.0);
  CHECK(fp.sectors[0].singular);
}

TEST_CASE("Pf^2 = det for every flavor") {
  for (int L : {4, 6, 8, 10})
    for (const auto& f : kFlavors) {
      auto k = kasteleyn_matrix(TorusLattice(L), 0.2, f.theta, f.tau).k;
      cplx pf = pfaffian(k);
      cplx det = k.determinant();
      CHECK(std::abs(pf * pf - det) < 1e-8 * std::abs(det));
    }
}

TEST_CASE("Pfaffian ratios approach one geometrically") {
  std::vector<double> dev;
  for (int L : {8, 12, 16}) {
    TorusLattice lat(L);
    cplx p11 = pfaffian(kasteleyn_matrix(lat, 0.3, 1, 1).k);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
      cplx ps = pfaffian(kasteleyn_matrix(lat, 0.3, kFlavors[s].theta, kFlavors[s].tau).k);
      worst = std::max(worst, std::abs(p11 / ps - 1.0));
    }
    dev.push_back(worst);
  }
  CHECK(dev[1] < dev[0]);
  CHECK(dev[2] < dev[1]);
  CHECK(dev[2] / dev[1] <= dev[1] / dev[0] * 1.5);
}

TEST_CASE("Fourier propagator equals dense inverse") {
  for (int L : {4, 8, 12}) {
    TorusLattice lat(L);
    for (double m : {0.0, 0.3})
      for (int s = 0; s < 4; ++s) {
        if (s == 0 && m == 0.0) continue;
        const Flavor f = kFlavors[s];
        CMatrix inv = kasteleyn_matrix(lat, m, f.theta, f.tau).k.inverse();
        FinitePropagator g(lat, m, f);
        double err = 0.0;
        for (int x = 0; x < lat.num_sites(); ++x)
          for (int y = 0; y < lat.num_sites(); ++y) err = std::max(err, std::abs(inv(x, y) - g(x, y)));
        CHECK(err < 1e-10);
      }
  }
  CHECK_THROWS_AS(FinitePropagator(TorusLattice(8), 0.0, {0, 0}), SingularMatrixError);
  CHECK_NOTHROW(FinitePropagator(TorusLattice(8), 0.0, {0, 0}, true));
}

TEST_CASE("propagator parity and translation structure") {
  TorusLattice lat(8);
  FinitePropagator g(lat, 0.0, {1, 1});
  CHECK(std::abs(g.at({2, 0}, {0, 0})) < 1e-14);
  FinitePropagator gm(lat, 0.3, {1, 1});
  Site x{1, 0}, y{0, 0};
  auto shift = [](Site s, int a) { return Site{s.x1 + a, s.x2}; };
  CHECK(std::abs(gm.at(x, y) - gm.at(shift(x, 1), shift(y, 1))) > 1e-3);
  CHECK(std::abs(gm.at(x, y) - gm.at(shift(x, 2), shift(y, 2))) < 1e-13);
  CHECK(std::abs(gm.at(x, y) - gm.at({1, 3}, {0, 3})) < 1e-13);
}

TEST_CASE("infinite-volume propagator: two routes agree") {
  InfinitePropagator ip(0.0, 16);
  CHECK(std::abs(ip.displacement(1, 0, 1) - 0.25) < 1e-14);
  CHECK(std::abs(ip.displacement(2, 0, 1)) == 0.0);
  GridPropagator grid = GridPropagator::converged(0.0, 16, 1e-8);
  double err = 0.0;
  for (int d1 = -16; d1 <= 16; ++d1)
    for (int d2 = -16; d2 <= 16; ++d2)
      err = std::max(err, std::abs(grid.displacement(d1, d2, 1) - ip.displacement(d1, d2, 1)));
  CHECK(err < 1e-8);
  InfinitePropagator ipm(0.3, 8);
  GridPropagator gm(0.3, 256, 8);
  for (int eps : {1, -1})
    for (int d1 = -8; d1 <= 8; ++d1)
      for (int d2 = -8; d2 <= 8; ++d2)
        CHECK(std::abs(gm.displacement(d1, d2, eps) - ipm.displacement(d1, d2, eps)) < 1e-12);
  // Values outside the table are computed on demand.
  CHECK(std::abs(ip.displacement(17, 2, 1) - InfinitePropagator::evaluate(0.0, 17, 2, 1)) == 0.0);
}

TEST_CASE("massive propagator decays exponentially") {
  InfinitePropagator ip(0.5, 48);
  std::vector<double> r, v;
  for (int d = 9; d <= 41; d += 4) {
    r.push_back(d);
    v.push_back(std::log(std::abs(ip.displacement(d, 0, 1))));
  }
  double slope = (v.back() - v.front()) / (r.back() - r.front());
  CHECK(slope < -0.1);
  CHECK(std::abs(ip.displacement(41, 0, 1)) < std::exp(-0.1 * 40));
}

TEST_CASE("finite-size corrections decay exponentially at m = 0.3") {
  InfinitePropagator ip(0.3, 20);
  std::vector<double> dev;
  for (int L : {8, 12, 16, 20}) {
    TorusLattice lat(L);
    FinitePropagator g(lat, 0.3, {1, 1});
    double worst = 0.0;
    for (Site x : {Site{1, 0}, Site{0, 1}, Site{2, 1}, Site{3, 0}})
      for (Site y : {Site{0, 0}, Site{1, 0}})
        worst = std::max(worst, std::abs(g.at(x, y) - ip(x, y)));
    dev.push_back(worst);
  }
  for (std::size_t i = 1; i < dev.size(); ++i) CHECK(dev[i] < 0.5 * dev[i - 1]);
}

TEST_CASE("Majorana propagator") {
  GevreyCutoff cut(0.4);
  MajoranaPropagator g0(0.0, 8, cut, 512);
  MajoranaPropagator g3(0.3, 8, cut, 512);
  InfinitePropagator i0(0.0, 12), i3(0.3, 12);
  double err = 0.0;
  for (int x1 = -4; x1 <= 4; ++x1)
    for (int x2 = -4; x2 <= 4; ++x2)
      for (Site y : {Site{0, 0}, Site{1, 0}, Site{0, 1}, Site{1, 1}}) {
        Site x{x1 + y.x1, x2 + y.x2};
        err = std::max(err, std::abs(propagator_from_majorana(g0, x, y) - i0(x, y)));
        err = std::max(err, std::abs(propagator_from_majorana(g3, x, y) - i3(x, y)));
      }
  CHECK(err < 1e-7);
  for (int x1 = -8; x1 <= 8; ++x1)
    for (int x2 = -8; x2 <= 8; ++x2) {
      Mat2 a = g3(x1, x2), b = g3(-x1, -x2);
      CHECK(std::abs(a.pp - std::conj(a.mm)) < 1e-12);
      CHECK(std::abs(a.pm - std::conj(a.mp)) < 1e-12);
      CHECK(std::abs(a.pm + a.mp) < 1e-12);
      CHECK(std::abs(a.pp + b.pp) < 1e-12);
      CHECK(std::abs(a.mm + b.mm) < 1e-12);
      CHECK(std::abs(a.pm - b.pm) < 1e-12);
      CHECK(std::abs(g0(x1, x2).pm) < 1e-14);
    }
  auto d = dirac_propagator(g3, {2, 1}, {0, 0});
  Mat2 v = g3(2, 1);
  CHECK(std::abs(d[0][0] - v.pp) == 0.0);
  CHECK(std::abs(d[1][0] - cplx(0, -1) * v.mp) == 0.0);
  CHECK(std::abs(d[0][1] - cplx(0, 1) * v.pm) == 0.0);
  auto d0 = dirac_propagator(g0, {2, 1}, {0, 0});
  CHECK(std::abs(d0[0][1]) < 1e-14);
  CHECK(std::abs(d0[1][0]) < 1e-14);
}

TEST_CASE("Majorana propagator approaches the continuum kernel") {
  GevreyCutoff cut(0.4);
  MajoranaPropagator g(0.0, 64, cut, 1024);
  std::vector<double> r, res;
  for (int n = 4; n <= 64; n += 4)
    for (int dir = 0; dir < 3; ++dir) {
      int x1 = dir == 1 ? 0 : n, x2 = dir == 0 ? 0 : (dir == 1 ? n : n / 2);
      Mat2 v = g(x1, x2);
      double worst = 0.0;
      for (int om : {1, -1}) {
        cplx cont = 1.0 / (4.0 * kPi * cplx(x1, om * x2));
        worst = std::max(worst, std::abs((om > 0 ? v.pp : v.mm) - cont));
      }
      r.push_back(std::hypot(x1, x2));
      res.push_back(worst);
    }
  CHECK(-loglog_slope(r, res) >= 1.9);
}
