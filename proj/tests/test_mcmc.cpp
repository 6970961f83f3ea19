#include <cmath>
#include <cstdlib>
#include <random>

#include "dimerlab/enumerate.hpp"
#include "dimerlab/mcmc.hpp"
#include "doctest.h"

using namespace dimerlab;

TEST_CASE("initial state and config validation") {
  TorusLattice lat(8);
  Matching m = init_state(lat);
  CHECK(is_valid_matching(lat, m));
  CHECK(occupied_bonds(m) == occupied_bonds(brick_wall(lat)));
  CHECK_THROWS_AS(init_state(lat, WindingPeriods{1, 0}), Error);
  ChainConfig c;
  c.burn_in = c.sweeps;
  CHECK_THROWS_AS(validate(c), Error);
  c = ChainConfig{};
  c.thinning = 0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("local moves on every L = 4 matching") {
  TorusLattice lat(4);
  const double lambda = 0.37, m = 0.2;
  int lo = 100, hi = -100;
  long moves = 0;
  enumerate_matchings(lat, [&](const Matching& mm) {
    DimerChain free(lat, 0.0, 0.0, 1, mm);
    DimerChain chain(lat, lambda, m, 1, mm);
    for (int f = 0; f < lat.num_faces(); ++f) {
      if (!chain.flippable(f)) continue;
      CHECK(free.weight_ratio(f) == 1.0);
      const int w0 = plaquette_count(lat, chain.occupied());
      CHECK(chain.plaquettes() == w0);
      const int dw = chain.delta_w(f);
      const double r = chain.weight_ratio(f);
      const double logw0 = matching_weight_log(lat, Matching{{}, chain.occupied()}, lambda, m);
      chain.flip(f);
      const double logw1 = matching_weight_log(lat, Matching{{}, chain.occupied()}, lambda, m);
      CHECK(plaquette_count(lat, chain.occupied()) - w0 == dw);
      CHECK(chain.plaquettes() == w0 + dw);
      CHECK(std::abs(std::log(r) - (logw1 - logw0)) < 1e-12);
      // pi(M) P(M -> M') = pi(M') P(M' -> M).
      const double back = chain.weight_ratio(f);
      CHECK(std::abs(r * back - 1.0) < 1e-14);
      CHECK(std::abs(std::min(1.0, r) - r * std::min(1.0, back)) < 1e-14);
      chain.flip(f);
      lo = std::min(lo, dw);
      hi = std::max(hi, dw);
      ++moves;
    }
  });
  CHECK(moves > 0);
  CHECK(lo >= -4);
  CHECK(hi <= 4);
  MESSAGE("observed plaquette change range on L=4: [" << lo << ", " << hi << "]");
}

TEST_CASE("mass modulation ratio") {
  TorusLattice lat(4);
  DimerChain chain(lat, 0.0, 0.2, 1, brick_wall(lat));
  // Brick wall: faces with even a1 hold two horizontal dimers.
  int even = lat.face_index({0, 0});
  REQUIRE(chain.flippable(even));
  CHECK(std::abs(chain.weight_ratio(even) - 1.0 / (1.2 * 1.2)) < 1e-15);
  chain.flip(even);
  CHECK(std::abs(chain.weight_ratio(even) - 1.2 * 1.2) < 1e-15);
  Matching shifted = brick_wall(lat);
  // Translating by one column puts the horizontal pairs on odd a1.
  std::vector<int> bonds;
  for (int b : occupied_bonds(shifted)) {
    Bond bb = lat.bond(b);
    bonds.push_back(lat.bond_index(lat.wrap(Bond{{bb.x.x1 + 1, bb.x.x2}, bb.j})));
  }
  DimerChain odd(lat, 0.0, 0.2, 1, matching_from_bonds(lat, bonds));
  int f = lat.face_index({1, 0});
  REQUIRE(odd.flippable(f));
  CHECK(std::abs(odd.weight_ratio(f) - 1.0 / (0.8 * 0.8)) < 1e-15);
}

TEST_CASE("blocking analysis") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> white(1 << 16);
  for (auto& v : white) v = g(rng);
  BlockingResult w = blocking_analysis(white);
  CHECK(w.resolved);
  CHECK(w.tau_int < 0.7);
  CHECK(std::abs(w.stderr_ * std::sqrt(white.size()) - 1.0) < 0.15);

  const double phi = 0.9;
  std::vector<double> ar(1 << 18);
  double x = 0.0;
  for (auto& v : ar) v = x = phi * x + g(rng);
  BlockingResult a = blocking_analysis(ar);
  const double tau = 0.5 * (1 + phi) / (1 - phi);
  CHECK(a.resolved);
  CHECK(std::abs(a.tau_int / tau - 1.0) < 0.25);

  std::vector<double> constant(100, 2.5);
  BlockingResult c = blocking_analysis(constant);
  CHECK(c.mean == 2.5);
  CHECK(c.stderr_ == 0.0);
}

TEST_CASE("observable parsing") {
  Observable o = parse_observable("cum:j=2,jp=1,d=3,-1");
  CHECK(o.kind == ObservableKind::DimerCumulant);
  CHECK(o.j == 2);
  CHECK(o.jp == 1);
  CHECK(o.d1 == 3);
  CHECK(o.d2 == -1);
  Observable e = parse_observable("ere:xi=1,1,eta=9,1,alpha=0.5");
  CHECK(e.xi == Face{1, 1});
  CHECK(e.eta == Face{9, 1});
  CHECK(e.alpha == 0.5);
  CHECK(parse_observable("plaq").kind == ObservableKind::PlaquetteDensity);
  CHECK_THROWS_AS(parse_observable("bogus:j=1"), Error);
  CHECK_THROWS_AS(parse_observable("hmom:eta=2,0,n=7"), Error);
}

TEST_CASE("runs are reproducible and thread-count independent") {
  ChainConfig c;
  c.L = 8;
  c.lambda = 0.2;
  c.sweeps = 2000;
  c.burn_in = 200;
  c.chains = 3;
  c.seed = 42;
  c.check_interval = 100;
  std::vector<Observable> obs{parse_observable("occ:j=1"), parse_observable("cum:j=1,jp=1,d=0,1"),
                              parse_observable("hvar:eta=2,1"), parse_observable("ere:eta=2,1,alpha=0.7")};
  setenv("DIMERLAB_THREADS", "1", 1);
  McmcResult a = run_mcmc(c, obs);
  setenv("DIMERLAB_THREADS", "3", 1);
  McmcResult b = run_mcmc(c, obs);
  unsetenv("DIMERLAB_THREADS");
  REQUIRE(a.observables.size() == obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    CHECK(a.observables[i].mean == b.observables[i].mean);
    CHECK(a.observables[i].stderr_ == b.observables[i].stderr_);
  }
  CHECK(a.acceptance_rate == b.acceptance_rate);
  c.seed = 43;
  McmcResult d = run_mcmc(c, obs);
  CHECK(d.observables[0].mean != a.observables[0].mean);
}

TEST_CASE("free occupancy is one quarter") {
  ChainConfig c;
  c.L = 32;
  c.sweeps = 6000;
  c.burn_in = 1000;
  c.thinning = 2;
  c.seed = 5;
  McmcResult r = run_mcmc(c, {parse_observable("occ:j=1"), parse_observable("occ:j=2")});
  for (const auto& e : r.observables) {
    CAPTURE(e.name);
    CHECK(std::abs(e.mean - 0.25) < 3.0 * e.stderr_);
    CHECK(e.stderr_ > 0.0);
    CHECK(e.tau_int >= 0.5);
  }
  CHECK(r.acceptance_rate > 0.0);
}

TEST_CASE("interacting two-point cumulant on L = 6") {
  TorusLattice lat(6);
  Ensemble e;
  e.lambda = 0.2;
  e.filter = [&](const Matching& m) { return winding(lat, m) == WindingPeriods{}; };
  int b0 = lat.bond_index({{0, 0}, 1});
  int b1 = lat.bond_index({{0, 1}, 1});
  double exact = exact_interacting_cumulant(lat, e, {b0, b1});
  ChainConfig c;
  c.L = 6;
  c.lambda = 0.2;
  c.sweeps = 100000;
  c.burn_in = 1000;
  c.seed = 8;
  McmcResult r = run_mcmc(c, {parse_observable("cum:j=1,jp=1,d=0,1")});
  const auto& est = r.observables[0];
  CAPTURE(exact);
  CAPTURE(est.mean);
  CAPTURE(est.stderr_);
  CHECK(std::abs(est.mean - exact) < 3.0 * est.stderr_);
}
