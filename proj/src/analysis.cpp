#include "dimerlab/analysis.hpp"

#include <cmath>
#include <string>

namespace dimerlab {

Series restrict_window(const Series& s, double lo, double hi) {
  Series out;
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    if (s.r[i] < lo || s.r[i] > hi) continue;
    out.r.push_back(s.r[i]);
    out.v.push_back(s.v[i]);
    if (!s.err.empty()) out.err.push_back(s.err[i]);
  }
  return out;
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  if (y.size() != n || (!sigma.empty() && sigma.size() != n))
    throw Error("InvalidArgument", "series columns differ in length");
  if (n < 3) throw Error("TooFewPoints", "a linear fit needs at least 3 points");
  const bool weighted = !sigma.empty();
  double sw = 0, sx = 0, sy = 0;
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (weighted) {
      if (!(sigma[i] > 0.0)) throw Error("InvalidArgument", "errors must be positive");
      w[i] = 1.0 / (sigma[i] * sigma[i]);
    }
    sw += w[i], sx += w[i] * x[i], sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 1e-300 * sw)) throw Error("DegenerateAbscissa", "all abscissas coincide");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = static_cast<int>(n);
  f.dof = f.points - 2;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) chi2 += w[i] * std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.r2 = syy > 0.0 ? 1.0 - chi2 / syy : 1.0;
  // Without input errors the scale comes from the residuals.
  const double s2 = weighted ? 1.0 : chi2 / f.dof;
  if (weighted) f.chi2_dof = chi2 / f.dof;
  f.covariance[1][1] = s2 / sxx;
  f.covariance[0][0] = s2 * (1.0 / sw + mx * mx / sxx);
  f.covariance[0][1] = f.covariance[1][0] = -s2 * mx / sxx;
  return f;
}

namespace {

void check_abscissas(const Series& s, std::size_t min_points) {
  if (s.r.size() != s.v.size() || (!s.err.empty() && s.err.size() != s.r.size()))
    throw Error("InvalidArgument", "series columns differ in length");
  if (s.r.size() < min_points)
    throw Error("TooFewPoints", "need at least " + std::to_string(min_points) + " points");
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    if (!(s.r[i] > 0.0)) throw Error("InvalidArgument", "r must be positive");
    if (i > 0 && !(s.r[i] > s.r[i - 1])) throw Error("DegenerateAbscissa", "r must be strictly increasing");
  }
}

void set_window(FitResult& f, const Series& s) {
  f.r_min = s.r.front();
  f.r_max = s.r.back();
}

// ln |v| against ln r; sigma_ln = err / |v|.
FitResult log_log(const Series& s, const std::vector<double>& v) {
  std::vector<double> x, y, sig;
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    x.push_back(std::log(s.r[i]));
    y.push_back(std::log(v[i]));
    if (!s.err.empty()) sig.push_back(s.err[i] / v[i]);
  }
  return linear_fit(x, y, sig);
}

}  // namespace

FitResult fit_log_slope(const Series& s) {
  check_abscissas(s, 4);
  std::vector<double> x;
  for (double r : s.r) x.push_back(std::log(r));
  FitResult f = linear_fit(x, s.v, s.err);
  f.kind = "slope";
  f.estimate = kPi * kPi * f.slope;
  f.estimate_err = kPi * kPi * std::sqrt(f.covariance[1][1]);
  set_window(f, s);
  return f;
}

FitResult fit_power_exponent(const Series& s) {
  check_abscissas(s, 3);
  std::vector<double> stripped;
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    const double r = s.r[i];
    if (r != std::round(r)) throw Error("InvalidArgument", "power fits need integer separations");
    const double v = s.v[i] * parity_sign(static_cast<long long>(r));
    if (!(v > 0.0))
      throw Error("NonPositive", "stripped correlation is not positive at r = " + std::to_string(r));
    stripped.push_back(v);
  }
  FitResult f = log_log(s, stripped);
  f.kind = "power";
  f.estimate = -0.5 * f.slope;
  f.estimate_err = 0.5 * std::sqrt(f.covariance[1][1]);
  set_window(f, s);
  return f;
}

FitResult electric_exponent(const Series& s, double alpha) {
  if (!(std::abs(alpha) <= kPi)) throw Error("InvalidArgument", "alpha must lie in [-pi, pi]");
  check_abscissas(s, 3);
  std::vector<double> mag;
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    const double a = std::abs(s.v[i]);
    const double noise = s.err.empty() ? 0.0 : 2.0 * s.err[i];
    if (!(a > noise) || a == 0.0)
      throw Error("BelowNoise", "electric correlator below the noise floor at r = " + std::to_string(s.r[i]));
    mag.push_back(a);
  }
  FitResult f = log_log(s, mag);
  f.kind = "electric";
  f.estimate = -f.slope;
  f.estimate_err = std::sqrt(f.covariance[1][1]);
  set_window(f, s);
  return f;
}

ElectricCheck electric_consistency(const FitResult& electric, const FitResult& log_slope, double alpha) {
  ElectricCheck c;
  const double factor = alpha * alpha / (2.0 * kPi * kPi);
  c.predicted = factor * log_slope.estimate;
  c.predicted_err = factor * log_slope.estimate_err;
  const double combined = std::hypot(electric.estimate_err, c.predicted_err);
  const double diff = electric.estimate - c.predicted;
  c.z = combined > 0.0 ? diff / combined : (diff == 0.0 ? 0.0 : INFINITY);
  return c;
}

WindowStability window_stability(const Series& s, double lo1, double hi1, double lo2, double hi2) {
  WindowStability w;
  w.first = fit_log_slope(restrict_window(s, lo1, hi1));
  w.second = fit_log_slope(restrict_window(s, lo2, hi2));
  w.difference = std::abs(w.first.estimate - w.second.estimate);
  w.combined_err = std::hypot(w.first.estimate_err, w.second.estimate_err);
  w.stable = w.difference < w.combined_err;
  return w;
}

}  // namespace dimerlab
