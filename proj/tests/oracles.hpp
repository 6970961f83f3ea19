#pragma once

// Independent reference evaluations used only by the tests.

#include <random>
#include <vector>

#include "dimerlab/pfaffian.hpp"

namespace oracle {

// Pf by recursive expansion along the first row (sum over all pairings).
inline dimerlab::cplx pfaffian_by_pairings(const dimerlab::CMatrix& a, std::vector<int> idx) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  dimerlab::cplx total = 0.0;
  int first = idx[0];
  for (std::size_t j = 1; j < idx.size(); ++j) {
    std::vector<int> rest;
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * a(first, idx[j]) * pfaffian_by_pairings(a, rest);
  }
  return total;
}

inline dimerlab::CMatrix random_antisymmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  dimerlab::CMatrix a = dimerlab::CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = {g(rng), g(rng)};
      a(j, i) = -a(i, j);
    }
  return a;
}

}  // namespace oracle
