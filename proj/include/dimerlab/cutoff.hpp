#pragma once

#include <vector>

#include "dimerlab/common.hpp"

namespace dimerlab {

// Gevrey-class smoothed indicators on the Brillouin zone [-pi, pi)^2.
//   f(k)      = exp(-1 / (1 - k^2/eps^2)) on |k| < eps
//   F(k)      = normalised primitive of f, F(k) + F(-k) = 1
//   theta(k)  = F(k + pi/2) F(-k + pi/2)
//   chi_t(k)  = 2 pi periodisation of theta
//   chi_bar   = chi_t(k1) chi_t(k2)         (separable)
//   chi_rot   = sum_n theta(|k + 2 pi n|)   (rotational)
//   chi_h     = chi_rot(2^-h k) for h < 0, chi_bar for h = 0
//   f_h       = chi_h - chi_{h-1}
class GevreyCutoff {
 public:
  explicit GevreyCutoff(double eps = 0.4);

  double eps() const { return eps_; }
  double bump(double k) const;
  double primitive(double k) const;  // F
  double theta(double k) const;
  double chi_tilde(double k) const;
  double chi_bar(double k1, double k2) const;
  double chi_rot(double k1, double k2) const;
  double chi_h(int h, double k1, double k2) const;
  double f_h(int h, double k1, double k2) const;
  // Radial profiles for h <= -1 (k inside the fundamental domain).
  double chi_h_radial(int h, double rho) const;
  double f_h_radial(int h, double rho) const;

 private:
  double raw_integral(double a, double b) const;
  double eps_;
  double norm_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

// Maps k to [-pi, pi).
double reduce_momentum(double k);

}  // namespace dimerlab
