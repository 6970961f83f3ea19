#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dimerlab/cutoff.hpp"
#include "dimerlab/kasteleyn.hpp"

namespace dimerlab {

// Scale labels: h* < h <= 0 are single scales, the bundle chi_{h*} collects
// everything below. At m = 0 the decomposition stops at h* = -h_max.
int deepest_scale(double m, int h_max = 20);

// Support of f_h in |k|: [2^{h-1}(pi/2 - eps), 2^h(pi/2 + eps)] for h < 0.
// f_0 = chi_bar - chi_{-1} reaches the corners of the separable cutoff.
double scale_outer_radius(int h, const GevreyCutoff& cutoff);

// Square table of 2x2 matrices over |x1|, |x2| <= range.
struct ScaleTable {
  int h = 0;
  bool bundle = false;
  int range = 0;
  std::vector<Mat2> values;  // row x1, column x2
  Mat2 operator()(int x1, int x2) const;
};

enum class SymbolKind {
  Lattice,    // majorana_symbol
  Continuum,  // leading small-k part at m = 0: diag(i k1 + k2, i k1 - k2) / (2|k|^2)
};

// G^(h)(x): the Majorana propagator with chi_bar replaced by f_h.
// Sums a midpoint rule on [-K, K]^2 with K = 2^h (pi/2 + eps); f_h vanishes
// near k = 0 and at the box edge, so the rule is spectrally accurate.
ScaleTable single_scale_propagator(int h, double m, const GevreyCutoff& cutoff, int range,
                                   SymbolKind symbol = SymbolKind::Lattice, int grid = 512);

// G^(<= h*)(x) with weight chi_{h*}(k); polar quadrature around the origin.
ScaleTable infrared_bundle(int h_star, double m, const GevreyCutoff& cutoff, int range);

// R^(h) = G^(h) - g^(h) (m = 0 only).
ScaleTable scale_remainder(int h, const GevreyCutoff& cutoff, int range, int grid = 512);

class ScaleDecomposition {
 public:
  ScaleDecomposition(double m, const GevreyCutoff& cutoff, int range, int h_max = 20, int grid = 512);
  double m() const { return m_; }
  int h_star() const { return h_star_; }
  int range() const { return range_; }
  const ScaleTable& scale(int h) const;
  const ScaleTable& bundle() const { return bundle_; }
  // sum_h G^(h)(x) + G^(<=h*)(x)
  Mat2 reassembled(int x1, int x2) const;

 private:
  double m_;
  int h_star_;
  int range_;
  std::map<int, ScaleTable> scales_;
  ScaleTable bundle_;
};

// G^(h)(x, 0) for x = 0..x_max along the first axis.
struct ScaleRay {
  int h = 0;
  std::vector<Mat2> values;
};
ScaleRay single_scale_ray(int h, double m, const GevreyCutoff& cutoff, int x_max, int grid = 512);

// Max-entry norm.
double entry_norm(const Mat2& g);
// Discrete right derivative along the first axis on a ray.
std::vector<Mat2> ray_derivative(const ScaleRay& ray);
// sup over the ray of |component| (the diagonal part of G^(h)(0) vanishes by
// parity, so amplitudes are taken as sup norms).
double sup_norm(const std::vector<Mat2>& values);
double sup_offdiagonal(const std::vector<Mat2>& values);

struct DecayFit {
  double c = 0.0;       // rate in exp(-c sqrt(2^h |x|))
  double C = 0.0;       // prefactor
  double r2 = 0.0;
  double residual = 0.0;  // rms of log residuals
  int points = 0;
};

// Least squares fit of log env(|x|) = log C - c sqrt(2^h |x|), where env is the
// running maximum of the norm from the far end inward (the bound is an
// envelope; the propagator itself oscillates). Points with env below
// rel_floor * max are dropped.
DecayFit verify_decay(int h, const ScaleRay& ray, double rel_floor = 1e-12);
DecayFit verify_decay(int h, const ScaleTable& table, double rel_floor = 1e-12);
DecayFit fit_stretched_decay(int h, const std::vector<double>& distance, const std::vector<double>& norm,
                             double rel_floor = 1e-12);

// Checks on the cutoffs, evaluated on an n x n grid of the Brillouin zone.
struct CutoffCheck {
  double partition_of_unity = 0.0;   // max |sum_gamma chi_bar(k - p_gamma) - 1|
  double scale_sum = 0.0;            // max |sum_h f_h + chi_{h*} - chi_bar|
  double disjoint_support = 0.0;     // max |f_{h1} f_{h2}|, |h1 - h2| > 1
  double rotation = 0.0;             // max |chi(Rk) - chi(k)| over random rotations
};
CutoffCheck check_cutoffs(const GevreyCutoff& cutoff, int h_star, int n = 4096, std::uint64_t seed = 1);

}  // namespace dimerlab
