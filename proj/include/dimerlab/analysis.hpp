#pragma once

#include <array>
#include <string>
#include <vector>

#include "dimerlab/common.hpp"

namespace dimerlab {

// (r, v, err); err may be empty (unweighted fit, errors from the residuals).
struct Series {
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> err;
};

// Points with lo <= r <= hi.
Series restrict_window(const Series& s, double lo, double hi);

struct FitResult {
  std::string kind;              // "slope", "power", "electric"
  double intercept = 0.0;
  double slope = 0.0;
  std::array<std::array<double, 2>, 2> covariance{};  // (intercept, slope)
  double estimate = 0.0;         // K-hat, kappa-hat or e-hat
  double estimate_err = 0.0;
  double r_min = 0.0, r_max = 0.0;
  int points = 0;
  int dof = 0;
  double r2 = 0.0;
  double chi2_dof = -1.0;        // -1 without input errors
};

// Weighted least squares y = a + b x.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& sigma);

// v against ln r; K-hat = pi^2 slope. At least 4 points, r strictly increasing.
FitResult fit_log_slope(const Series& s);

// v(r) ~ A (-1)^r r^{-2 kappa}: the sign (-1)^r is stripped first, then
// ln |v| against ln r with slope -2 kappa. r must be integers.
FitResult fit_power_exponent(const Series& s);

// |<e^{i alpha dh}>(r)| ~ A r^{-e}. Values must exceed twice their errors.
FitResult electric_exponent(const Series& s, double alpha);

// e-hat against K-hat alpha^2 / (2 pi^2): predicted value and the difference
// in units of the combined error.
struct ElectricCheck {
  double predicted = 0.0;
  double predicted_err = 0.0;
  double z = 0.0;
};
ElectricCheck electric_consistency(const FitResult& electric, const FitResult& log_slope, double alpha);

// K-hat over two windows; stable when the difference is below the combined
// fit errors.
struct WindowStability {
  FitResult first, second;
  double difference = 0.0;
  double combined_err = 0.0;
  bool stable = false;
};
WindowStability window_stability(const Series& s, double lo1, double hi1, double lo2, double hi2);

}  // namespace dimerlab
