#include "dimerlab/cutoff.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <string>

namespace dimerlab {

namespace {
constexpr int kTablePoints = 2048;
}

double reduce_momentum(double k) {
  double r = std::fmod(k + kPi, 2.0 * kPi);
  if (r < 0) r += 2.0 * kPi;
  return r - kPi;
}

GevreyCutoff::GevreyCutoff(double eps) : eps_(eps) {
  if (!(eps > 0.0 && eps < kPi / 4.0))
    throw Error("EpsilonOutOfRange", "need 0 < eps < pi/4, got " + std::to_string(eps));
  nodes_.resize(kTablePoints + 1);
  cumulative_.resize(kTablePoints + 1);
  double acc = 0.0;
  for (int i = 0; i <= kTablePoints; ++i) {
    nodes_[i] = -eps_ + eps_ * static_cast<double>(i) / kTablePoints;
    if (i > 0) acc += raw_integral(nodes_[i - 1], nodes_[i]);
    cumulative_[i] = acc;
  }
  // Integral over [-eps, eps] is twice the half-integral.
  norm_ = 2.0 * acc;
}

double GevreyCutoff::bump(double k) const {
  double s = k / eps_;
  double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double GevreyCutoff::raw_integral(double a, double b) const {
  return boost::math::quadrature::gauss<double, 20>::integrate(
      [this](double k) { return bump(k); }, a, b);
}

double GevreyCutoff::primitive(double k) const {
  if (k <= -eps_) return 0.0;
  if (k >= eps_) return 1.0;
  if (k > 0.0) return 1.0 - primitive(-k);
  double pos = (k + eps_) / eps_ * kTablePoints;
  int i = static_cast<int>(pos);
  if (i >= kTablePoints) i = kTablePoints - 1;
  double value = cumulative_[i] + raw_integral(nodes_[i], k);
  return value / norm_;
}

double GevreyCutoff::theta(double k) const {
  return primitive(k + kPi / 2.0) * primitive(-k + kPi / 2.0);
}

double GevreyCutoff::chi_tilde(double k) const { return theta(reduce_momentum(k)); }

double GevreyCutoff::chi_bar(double k1, double k2) const {
  double a = chi_tilde(k1);
  if (a == 0.0) return 0.0;
  return a * chi_tilde(k2);
}

double GevreyCutoff::chi_rot(double k1, double k2) const {
  double r1 = reduce_momentum(k1), r2 = reduce_momentum(k2);
  return theta(std::hypot(r1, r2));
}

double GevreyCutoff::chi_h_radial(int h, double rho) const {
  return theta(std::ldexp(rho, -h));
}

double GevreyCutoff::f_h_radial(int h, double rho) const {
  return chi_h_radial(h, rho) - chi_h_radial(h - 1, rho);
}

double GevreyCutoff::chi_h(int h, double k1, double k2) const {
  if (h > 0) throw Error("ScaleOutOfRange", "scale index must be <= 0");
  if (h == 0) return chi_bar(k1, k2);
  return chi_h_radial(h, std::hypot(reduce_momentum(k1), reduce_momentum(k2)));
}

double GevreyCutoff::f_h(int h, double k1, double k2) const {
  return chi_h(h, k1, k2) - chi_h(h - 1, k1, k2);
}

}  // namespace dimerlab
