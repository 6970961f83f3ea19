#include "dimerlab/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dimerlab {

AntisymMatrix::AntisymMatrix(CMatrix a, double tol) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw Error("NotSquare", "antisymmetric matrix must be square");
  double dev = (a_ + a_.transpose()).cwiseAbs().maxCoeff();
  if (a_.size() > 0 && dev > tol)
    throw Error("NotAntisymmetric", "max |A + A^T| = " + std::to_string(dev));
}

namespace {

// In-place elimination; returns value and the smallest pivot modulus seen.
cplx parlett_reid(CMatrix& a, double& min_pivot, bool stop_on_zero) {
  const int n = static_cast<int>(a.rows());
  cplx pf = 1.0;
  min_pivot = n > 0 ? INFINITY : 0.0;
  for (int k = 0; k + 1 < n; k += 2) {
    int kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (int i = k + 2; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    min_pivot = std::min(min_pivot, best);
    if (best == 0.0) {
      if (stop_on_zero) return 0.0;
      continue;
    }
    cplx piv = a(k, k + 1);
    pf *= piv;
    if (k + 2 < n) {
      const int m = n - k - 2;
      Eigen::VectorXcd tau = a.row(k).segment(k + 2, m).transpose() / piv;
      Eigen::VectorXcd col = a.col(k + 1).segment(k + 2, m);
      a.block(k + 2, k + 2, m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace

PfaffianResult pfaffian_checked(const CMatrix& a) {
  if (a.rows() % 2 != 0)
    throw Error("OddDimension", "Pfaffian of odd dimension " + std::to_string(a.rows()));
  PfaffianResult r;
  if (a.rows() == 0) {
    r.value = 1.0;
    r.min_pivot_ratio = 1.0;
    return r;
  }
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    r.value = 0.0;
    r.singular = true;
    return r;
  }
  CMatrix w = a;
  double min_pivot = 0.0;
  r.value = parlett_reid(w, min_pivot, true);
  r.min_pivot_ratio = min_pivot / scale;
  if (r.min_pivot_ratio < kSingularPivot) {
    r.singular = true;
    r.value = 0.0;
  }
  return r;
}

cplx pfaffian(const CMatrix& a) {
  PfaffianResult r = pfaffian_checked(a);
  if (r.singular)
    throw SingularMatrixError("pivot ratio " + std::to_string(r.min_pivot_ratio));
  return r.value;
}

cplx pfaffian(const AntisymMatrix& a) { return pfaffian(a.matrix()); }

cplx pfaffian_unchecked(CMatrix a) {
  if (a.rows() % 2 != 0) return 0.0;
  double min_pivot = 0.0;
  return parlett_reid(a, min_pivot, true);
}

cplx pfaffian_submatrix(const CMatrix& m, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  if (k % 2 != 0) return 0.0;
  if (k == 0) return 1.0;
  if (k == 2) return m(idx[0], idx[1]);
  if (k == 4) {
    auto g = [&](int i, int j) { return m(idx[i], idx[j]); };
    return g(0, 1) * g(2, 3) - g(0, 2) * g(1, 3) + g(0, 3) * g(1, 2);
  }
  CMatrix sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
  return pfaffian_unchecked(std::move(sub));
}

cplx pfaffian_minor(const AntisymMatrix& a, const std::vector<int>& idx) {
  if (idx.size() % 2 != 0) return 0.0;
  if (idx.empty()) return 1.0;
  Eigen::PartialPivLU<CMatrix> lu(a.matrix());
  // Reject exactly singular input before trusting the inverse.
  if (pfaffian_checked(a.matrix()).singular) throw SingularMatrixError("pfaffian_minor");
  CMatrix inv = lu.inverse();
  return pfaffian_submatrix(inv, idx);
}

cplx pfaffian_fixed_pairs(const CMatrix& a, const std::vector<std::pair<int, int>>& pairs) {
  const int n = static_cast<int>(a.rows());
  std::vector<char> used(n, 0);
  std::vector<int> order;
  cplx prod = 1.0;
  for (auto [x, y] : pairs) {
    if (used[x] || used[y] || x == y) return 0.0;
    used[x] = used[y] = 1;
    order.push_back(x);
    order.push_back(y);
    prod *= a(x, y);
  }
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!used[i]) rest.push_back(i);
  order.insert(order.end(), rest.begin(), rest.end());
  // Sign of the permutation `order` by counting inversions.
  long long inversions = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (order[i] > order[j]) ++inversions;
  CMatrix sub(rest.size(), rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (std::size_t j = 0; j < rest.size(); ++j) sub(i, j) = a(rest[i], rest[j]);
  return prod * static_cast<double>(parity_sign(inversions)) * pfaffian_unchecked(std::move(sub));
}

}  // namespace dimerlab
