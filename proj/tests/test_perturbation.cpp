#include <cmath>

#include "dimerlab/enumerate.hpp"
#include "dimerlab/perturbation.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

// Central difference in alpha or lambda of the exact interacting cumulant.
double derivative(const TorusLattice& lat, const std::vector<int>& idx, bool in_alpha) {
  const double h = 1e-4;
  Ensemble p, m;
  p.lambda = in_alpha ? std::log1p(h) : h;
  m.lambda = in_alpha ? std::log1p(-h) : -h;
  return (exact_interacting_cumulant(lat, p, idx) - exact_interacting_cumulant(lat, m, idx)) / (2 * h);
}

}  // namespace

TEST_CASE("first order matches enumeration derivatives") {
  const std::vector<std::vector<Bond>> sets{{{{0, 0}, 1}},
                                            {{{0, 0}, 2}},
                                            {{{0, 0}, 1}, {{1, 1}, 2}},
                                            {{{0, 0}, 1}, {{0, 2}, 1}},
                                            {{{0, 0}, 2}, {{1, 0}, 1}, {{-1, 1}, 2}}};
  for (int L : {4, 6}) {
    TorusLattice lat(L);
    FourFlavorCorrelator c(lat, 0.0);
    for (const auto& bs : sets) {
      std::vector<int> idx;
      for (const auto& b : bs) idx.push_back(lat.bond_index(lat.wrap(b)));
      FirstOrderResult r = first_order_cumulant(bs, c, L, &lat);
      CHECK(r.plaquettes == L * L);
      CAPTURE(L);
      CAPTURE(bs.size());
      CHECK(std::abs(r.value - derivative(lat, idx, true)) < 1e-6);
      CHECK(std::abs(r.value - derivative(lat, idx, false)) < 1e-6);
      // The window already covers the torus at R = L / 2.
      CHECK(std::abs(first_order_cumulant(bs, c, L / 2, &lat).value - r.value) < 1e-14);
    }
  }
}

TEST_CASE("plaquette insertions are mutually exclusive") {
  TorusLattice lat(6);
  FourFlavorCorrelator c(lat, 0.2);
  auto ip = std::make_shared<InfinitePropagator>(0.0, 8);
  InfiniteCorrelator ic(ip);
  for (Face f : {Face{0, 0}, Face{1, 2}, Face{-2, 3}}) {
    CHECK(std::abs(plaquette_exclusion_moment(f, c)) < 1e-14);
    CHECK(std::abs(plaquette_exclusion_moment(f, ic)) < 1e-14);
    PlaquetteVertex v = plaquette_vertex(f);
    CHECK(v.horizontal[1].x.x2 == f.a2 + 1);
    CHECK(v.vertical[1].x.x1 == f.a1 + 1);
  }
}

TEST_CASE("first-order occupancy correction vanishes in infinite volume") {
  auto ip = std::make_shared<InfinitePropagator>(0.0, 40);
  InfiniteCorrelator c(ip);
  for (int j : {1, 2}) {
    FirstOrderResult a = first_order_cumulant({{{0, 0}, j}}, c, 16);
    FirstOrderResult b = first_order_cumulant({{{0, 0}, j}}, c, 32);
    CHECK(std::abs(b.value) < 0.3 * std::abs(a.value));
    CHECK(std::abs(b.value + b.tail_estimate) < 1e-5);
    CHECK(b.flagged);
    CHECK_FALSE(first_order_cumulant({{{0, 0}, j}}, c, 32, nullptr, 1e-3).flagged);
  }
}
