#include <random>

#include "dimerlab/pfaffian.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dimerlab;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }
}  // namespace

TEST_CASE("small pfaffians") {
  CMatrix a(2, 2);
  a << 0.0, cplx(1.5, -2.0), cplx(-1.5, 2.0), 0.0;
  CHECK(std::abs(pfaffian(a) - cplx(1.5, -2.0)) < 1e-15);
  CMatrix b = CMatrix::Zero(4, 4);
  b(0, 1) = 2;
  b(1, 0) = -2;
  b(2, 3) = 3;
  b(3, 2) = -3;
  CHECK(std::abs(pfaffian(b) - 6.0) < 1e-14);
  CHECK(std::abs(pfaffian(CMatrix(0, 0)) - 1.0) == 0.0);
  try {
    pfaffian(CMatrix::Zero(3, 3));
    FAIL("odd dimension accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "OddDimension");
  }
}

TEST_CASE("antisymmetry enforced") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0 + 1e-9;
  CHECK_THROWS_AS(AntisymMatrix{a}, Error);
  a(1, 0) = -1.0;
  CHECK_NOTHROW(AntisymMatrix{a});
}

TEST_CASE("random 6x6 against the pairing sum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix a = oracle::random_antisymmetric(6, rng);
    std::vector<int> all{0, 1, 2, 3, 4, 5};
    CHECK(rel(pfaffian(a), oracle::pfaffian_by_pairings(a, all)) < 1e-12);
  }
  for (int n : {8, 10}) {
    CMatrix a = oracle::random_antisymmetric(n, rng);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    CHECK(rel(pfaffian(a), oracle::pfaffian_by_pairings(a, all)) < 1e-11);
  }
}

TEST_CASE("Pf^2 = det up to n = 64") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 64; n += 6) {
    CMatrix a = oracle::random_antisymmetric(n, rng);
    cplx pf = pfaffian(a);
    cplx det = a.determinant();
    CHECK(rel(pf * pf, det) < 1e-8);
  }
}

TEST_CASE("Pf(B^T A B) = det(B) Pf(A)") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 12; n += 2) {
    CMatrix a = oracle::random_antisymmetric(n, rng);
    CMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = {g(rng), g(rng)};
    CMatrix c = b.transpose() * a * b;
    c = 0.5 * (c - c.transpose()).eval();
    CHECK(rel(pfaffian(c), b.determinant() * pfaffian(a)) < 1e-8);
  }
}

TEST_CASE("minors") {
  std::mt19937_64 rng(17);
  CMatrix m = oracle::random_antisymmetric(8, rng);
  AntisymMatrix a(m);
  CMatrix inv = m.inverse();
  CHECK(std::abs(pfaffian_minor(a, {}) - 1.0) == 0.0);
  CHECK(std::abs(pfaffian_minor(a, {1, 5}) - inv(1, 5)) < 1e-12);
  CHECK(std::abs(pfaffian_minor(a, {1, 2, 5})) == 0.0);
  cplx four = inv(0, 3) * inv(5, 6) - inv(0, 5) * inv(3, 6) + inv(0, 6) * inv(3, 5);
  CHECK(std::abs(pfaffian_minor(a, {0, 3, 5, 6}) - four) < 1e-12);
  cplx six = pfaffian_minor(a, {0, 1, 2, 3, 4, 7});
  CHECK(std::abs(six + pfaffian_minor(a, {1, 0, 2, 3, 4, 7})) < 1e-12);
  CHECK(std::abs(six - oracle::pfaffian_by_pairings(inv, {0, 1, 2, 3, 4, 7})) < 1e-11);
  CMatrix sing = CMatrix::Zero(4, 4);
  sing(0, 1) = 1.0;
  sing(1, 0) = -1.0;
  CHECK_THROWS_AS(pfaffian_minor(AntisymMatrix(sing), {0, 1}), SingularMatrixError);
}

TEST_CASE("singular detection and fixed pairs") {
  CMatrix sing = CMatrix::Zero(4, 4);
  sing(0, 1) = 2.0;
  sing(1, 0) = -2.0;
  sing(0, 2) = 1.0;
  sing(2, 0) = -1.0;
  CHECK(pfaffian_checked(sing).singular);
  CHECK_THROWS_AS(pfaffian(sing), SingularMatrixError);
  std::mt19937_64 rng(19);
  CMatrix a = oracle::random_antisymmetric(8, rng);
  // Terms containing a_{2,5} and a_{0,7}: brute force over pairings.
  cplx brute = 0.0;
  {
    CMatrix b = a;
    // Remove all other entries from rows 2,5,0,7: keep only the fixed pair.
    for (int r : {0, 2, 5, 7})
      for (int c = 0; c < 8; ++c) {
        bool keep = (r == 2 && c == 5) || (r == 5 && c == 2) || (r == 0 && c == 7) || (r == 7 && c == 0);
        if (!keep) b(r, c) = b(c, r) = 0.0;
      }
    b(2, 5) = a(2, 5);
    b(5, 2) = -a(2, 5);
    b(0, 7) = a(0, 7);
    b(7, 0) = -a(0, 7);
    brute = oracle::pfaffian_by_pairings(b, {0, 1, 2, 3, 4, 5, 6, 7});
  }
  CHECK(std::abs(pfaffian_fixed_pairs(a, {{2, 5}, {0, 7}}) - brute) < 1e-12);
  CHECK(std::abs(pfaffian_fixed_pairs(a, {{5, 2}, {0, 7}}) - brute) < 1e-12);
}
