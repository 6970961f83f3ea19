#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dimerlab/common.hpp"

namespace dimerlab {

using CMatrix = Eigen::MatrixXcd;

// Complex antisymmetric matrix; construction rejects A != -A^T beyond 1e-12.
class AntisymMatrix {
 public:
  explicit AntisymMatrix(CMatrix a, double tol = 1e-12);
  const CMatrix& matrix() const { return a_; }
  int n() const { return static_cast<int>(a_.rows()); }

 private:
  CMatrix a_;
};

struct PfaffianResult {
  cplx value;
  bool singular = false;
  double min_pivot_ratio = 0.0;  // smallest |pivot| / max|A_ij|
};

inline constexpr double kSingularPivot = 1e-13;

// Parlett-Reid tridiagonalisation with partial pivoting. Reports singularity
// when a pivot falls below kSingularPivot relative to the largest entry.
PfaffianResult pfaffian_checked(const CMatrix& a);
// Throws SingularMatrixError on a singular input, Error("OddDimension") for odd n.
cplx pfaffian(const CMatrix& a);
cplx pfaffian(const AntisymMatrix& a);
// No singularity threshold; exact zero pivots give 0. Meant for small minors
// whose zeros are structural.
cplx pfaffian_unchecked(CMatrix a);

// Pf of the submatrix of m on the given indices, in the given order.
cplx pfaffian_submatrix(const CMatrix& m, const std::vector<int>& idx);
// Pf of (A^{-1}) restricted to idx in order; odd idx size gives 0.
cplx pfaffian_minor(const AntisymMatrix& a, const std::vector<int>& idx);

// Sum of the terms of Pf A that contain every entry A_{x_i y_i}:
// (prod A_{x_i y_i}) * sgn * Pf(A on the remaining indices). Works for singular
// A. Pairs must be disjoint.
cplx pfaffian_fixed_pairs(const CMatrix& a, const std::vector<std::pair<int, int>>& pairs);

}  // namespace dimerlab
