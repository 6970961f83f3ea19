#include <cmath>
#include <memory>

#include "dimerlab/analysis.hpp"
#include "dimerlab/freecorr.hpp"
#include "dimerlab/height.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

Series synthetic(const std::vector<double>& r, double (*f)(double)) {
  Series s;
  for (double x : r) {
    s.r.push_back(x);
    s.v.push_back(f(x));
  }
  return s;
}

const std::vector<double> kRadii{8, 12, 16, 24, 32, 48, 64};

// Exact lambda = 0 series, shared between cases.
const InfiniteCorrelator& correlator() {
  static InfiniteCorrelator c(std::make_shared<InfinitePropagator>(0.0, 72));
  return c;
}

Series exact_variance() {
  static Series s = [] {
    Series out;
    for (int r = 8; r <= 64; r += 4) {
      out.r.push_back(r);
      out.v.push_back(exact_height_cumulant(2, {0, 0}, {r, 0}, correlator(), CumulantRoute::SinglePath));
    }
    return out;
  }();
  return s;
}

}  // namespace

TEST_CASE("log-slope fit on exact linear data") {
  Series s = synthetic(kRadii, [](double r) { return std::log(r) / (kPi * kPi) + 0.3; });
  FitResult f = fit_log_slope(s);
  CHECK(std::abs(f.estimate - 1.0) < 1e-10);
  CHECK(std::abs(f.intercept - 0.3) < 1e-10);
  CHECK(f.dof == static_cast<int>(kRadii.size()) - 2);
  CHECK(f.r_min == 8);
  CHECK(f.r_max == 64);
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.chi2_dof < 0.0);

  // Scale equivariance: v -> c v scales the slope, r -> c r shifts the intercept.
  Series scaled = s;
  for (auto& v : scaled.v) v *= 2.5;
  CHECK(fit_log_slope(scaled).slope == doctest::Approx(2.5 * f.slope).epsilon(1e-12));
  Series stretched = s;
  for (auto& r : stretched.r) r *= 3.0;
  FitResult g = fit_log_slope(stretched);
  CHECK(g.slope == doctest::Approx(f.slope).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(f.intercept - f.slope * std::log(3.0)).epsilon(1e-12));

  Series few = s;
  few.r.resize(3);
  few.v.resize(3);
  CHECK_THROWS_AS(fit_log_slope(few), Error);
  Series same = s;
  same.r[1] = same.r[0];
  CHECK_THROWS_AS(fit_log_slope(same), Error);
}

TEST_CASE("weighted fit recovers known errors") {
  // Two-point-per-abscissa data: the slope error is sigma / sqrt(Sxx).
  Series s;
  for (double r : kRadii) {
    s.r.push_back(r);
    s.v.push_back(0.2 * std::log(r));
    s.err.push_back(0.01);
  }
  FitResult f = fit_log_slope(s);
  double mx = 0, sxx = 0;
  for (double r : kRadii) mx += std::log(r) / kRadii.size();
  for (double r : kRadii) sxx += std::pow(std::log(r) - mx, 2);
  CHECK(std::sqrt(f.covariance[1][1]) == doctest::Approx(0.01 / std::sqrt(sxx)).epsilon(1e-12));
  CHECK(f.chi2_dof == doctest::Approx(0.0));
}

TEST_CASE("free height variance gives K = 1") {
  Series s = exact_variance();
  FitResult f = fit_log_slope(s);
  CHECK(f.estimate >= 0.97);
  CHECK(f.estimate <= 1.03);
}

TEST_CASE("window stability of the free variance fit") {
  WindowStability w = window_stability(exact_variance(), 8, 32, 16, 64);
  CHECK(w.first.r_min == 8);
  CHECK(w.second.r_max == 64);
  MESSAGE("K over [8,32] = " << w.first.estimate << " +- " << w.first.estimate_err << ", over [16,64] = "
                             << w.second.estimate << " +- " << w.second.estimate_err);
  // Exact data carry a smooth r^-2 lattice correction that residual-based
  // errors do not cover.
  CHECK(w.stable);
}

TEST_CASE("power exponent") {
  Series s = synthetic({8, 9, 10, 11, 12, 16, 20, 31}, [](double r) {
    return parity_sign(static_cast<long long>(r)) * 0.7 * std::pow(r, -2.2);
  });
  CHECK(std::abs(fit_power_exponent(s).estimate - 1.1) < 1e-6);
  Series scaled = s;
  for (auto& v : scaled.v) v *= 4.0;
  CHECK(fit_power_exponent(scaled).slope == doctest::Approx(fit_power_exponent(s).slope).epsilon(1e-12));

  // lambda = 0: <1_b; 1_b'> for horizontal bonds along the first axis.
  Series exact;
  for (int r = 8; r <= 32; ++r) {
    exact.r.push_back(r);
    exact.v.push_back(dimer_cumulant({Bond{{0, 0}, 1}, Bond{{r, 0}, 1}}, correlator()));
  }
  FitResult f = fit_power_exponent(exact);
  CAPTURE(f.estimate);
  CHECK(f.estimate >= 0.98);
  CHECK(f.estimate <= 1.02);

  Series bad = s;
  bad.v[2] = -bad.v[2];
  CHECK_THROWS_AS(fit_power_exponent(bad), Error);
}

TEST_CASE("electric exponent") {
  const double alpha = kPi / 4;
  // Gaussian identity: exp(-alpha^2 Var / 2) with Var = ln r / pi^2.
  Series g;
  for (double r : kRadii) {
    g.r.push_back(r);
    g.v.push_back(std::exp(-alpha * alpha * std::log(r) / (2 * kPi * kPi)));
  }
  CHECK(electric_exponent(g, alpha).estimate == doctest::Approx(alpha * alpha / (2 * kPi * kPi)).epsilon(1e-12));
  Series one = g;
  for (auto& v : one.v) v = 1.0;
  CHECK(electric_exponent(one, 0.0).estimate == 0.0);

  // Exact free data at alpha = pi/4.
  Series e;
  const auto& ip = correlator().propagator();
  for (int r = 8; r <= 32; r += 4) {
    e.r.push_back(r);
    e.v.push_back(std::abs(electric_correlator(alpha, {0, 0}, {r, 0}, ip)));
  }
  FitResult fe = electric_exponent(e, alpha);
  FitResult fk = fit_log_slope(exact_variance());
  ElectricCheck c = electric_consistency(fe, fk, alpha);
  CAPTURE(fe.estimate);
  CAPTURE(c.predicted);
  CHECK(std::abs(fe.estimate - alpha * alpha / (2 * kPi * kPi)) < 0.03 * alpha * alpha / (2 * kPi * kPi));

  Series noisy = g;
  noisy.err.assign(g.r.size(), 1.0);
  CHECK_THROWS_AS(electric_exponent(noisy, alpha), Error);
}
