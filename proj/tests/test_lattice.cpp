#include <set>

#include "dimerlab/lattice.hpp"
#include "doctest.h"

using namespace dimerlab;

TEST_CASE("torus counts and validation") {
  TorusLattice l4(4);
  CHECK(l4.num_sites() == 16);
  CHECK(l4.num_bonds() == 32);
  CHECK(l4.num_faces() == 16);
  TorusLattice l6(6);
  CHECK(l6.num_sites() == 36);
  CHECK(l6.num_bonds() == 72);
  try {
    TorusLattice bad(3);
    FAIL("odd side accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "OddSide");
  }
  CHECK_THROWS(TorusLattice(2));
}

TEST_CASE("incidence and canonical bonds") {
  TorusLattice lat(6);
  std::vector<int> degree(lat.num_sites(), 0);
  for (int b = 0; b < lat.num_bonds(); ++b) {
    CHECK(lat.bond_index(lat.bond(b)) == b);
    ++degree[lat.tail_index(b)];
    ++degree[lat.head_index(b)];
  }
  for (int d : degree) CHECK(d == 4);
  for (int f = 0; f < lat.num_faces(); ++f) {
    auto fb = lat.face_bonds(lat.face(f));
    CHECK(std::set<int>(fb.begin(), fb.end()).size() == 4);
  }
  for (int s = 0; s < lat.num_sites(); ++s) CHECK(lat.site_index(lat.site(s)) == s);
  // Wrapped and unwrapped descriptions of an edge share one canonical index.
  CHECK(lat.bond_index({{3, 0}, 1}) == lat.bond_index({{-3, 0}, 1}));
  CHECK(lat.is_white({0, 0}));
  CHECK(lat.is_white({1, 1}));
  CHECK_FALSE(lat.is_white({1, 0}));
}

TEST_CASE("bond weights") {
  CHECK(bond_weight({{0, 0}, 1}, 0.0) == 1.0);
  CHECK(bond_weight({{0, 0}, 1}, 0.1) == doctest::Approx(1.1));
  CHECK(bond_weight({{1, 0}, 1}, 0.1) == doctest::Approx(0.9));
  CHECK(bond_weight({{0, 0}, 2}, 0.1) == 1.0);
}

TEST_CASE("crossing sign equals white-on-right rule on every bond") {
  for (int L : {4, 6, 8}) {
    TorusLattice lat(L);
    for (int f = 0; f < lat.num_faces(); ++f)
      for (int dir = 0; dir < 4; ++dir) {
        Face face = lat.face(f);
        CHECK(dual_step(face, dir).sigma == white_on_right_sign(face, dir));
      }
  }
}

TEST_CASE("path reversal negates signs and displacements") {
  DualPath p = path_from_moves({0, 0}, {0, 0, 1, 1, 2, 1});
  DualPath r = reversed(p);
  REQUIRE(r.steps.size() == p.steps.size());
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& a = p.steps[i];
    const auto& b = r.steps[p.steps.size() - 1 - i];
    CHECK(a.bond == b.bond);
    CHECK(a.sigma == -b.sigma);
    CHECK(a.dz == -b.dz);
  }
  CHECK(r.start == p.end);
}

TEST_CASE("single step path") {
  auto ps = build_paths({0, 0}, {1, 0}, 1, PathStyle::WellSeparated);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].steps.size() == 1);
}

TEST_CASE("well separated paths are disjoint and end correctly") {
  TorusLattice lat(64);
  for (int n : {2, 3, 4}) {
    auto ps = build_paths({0, 0}, {16, 0}, n, PathStyle::WellSeparated, &lat);
    REQUIRE(ps.size() == static_cast<std::size_t>(n));
    std::set<std::tuple<int, int, int>> bonds;
    std::set<int> first_dirs;
    for (const auto& p : ps) {
      CHECK(p.start == Face{0, 0});
      CHECK(p.end == Face{16, 0});
      for (std::size_t i = 1; i < p.steps.size(); ++i) CHECK(p.steps[i].from == p.steps[i - 1].to);
      for (const auto& s : p.steps)
        CHECK(bonds.insert({s.bond.x.x1, s.bond.x.x2, s.bond.j}).second);
      for (int run : straight_run_lengths(p)) CHECK(run % 2 == 0);
      first_dirs.insert(p.steps.front().bond.j * 3 + p.steps.front().alpha);
    }
    CHECK(first_dirs.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("three paths leave near 120 degrees") {
  TorusLattice lat(128);
  auto ps = build_paths({0, 0}, {32, 0}, 3, PathStyle::WellSeparated, &lat);
  // Direction of the chord from xi to the first corner at distance ~ H.
  std::vector<double> angles;
  for (const auto& p : ps) {
    std::size_t k = std::min<std::size_t>(p.steps.size() - 1, 20);
    Face f = p.steps[k].to;
    angles.push_back(std::atan2(f.a2, f.a1));
  }
  std::sort(angles.begin(), angles.end());
  double gap1 = angles[1] - angles[0], gap2 = angles[2] - angles[1];
  double gap3 = 2 * kPi - gap1 - gap2;
  for (double g : {gap1, gap2, gap3}) {
    CHECK(g > 2 * kPi / 3 - 0.7);
    CHECK(g < 2 * kPi / 3 + 0.7);
  }
}

TEST_CASE("too many paths rejected") {
  TorusLattice lat(8);
  CHECK_THROWS(build_paths({0, 0}, {2, 0}, 9, PathStyle::WellSeparated, &lat));
  CHECK_THROWS(build_paths({0, 0}, {0, 0}, 2, PathStyle::WellSeparated, &lat));
  CHECK_THROWS(build_paths({0, 0}, {3, 0}, 4, PathStyle::WellSeparated, &lat));
}
