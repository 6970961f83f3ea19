#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dimerlab/height.hpp"
#include "dimerlab/matching.hpp"

namespace dimerlab {

struct ChainConfig {
  int L = 16;
  double lambda = 0.0;
  double m = 0.0;
  std::uint64_t seed = 1;
  long sweeps = 10000;
  long burn_in = 1000;
  int thinning = 1;
  WindingPeriods sector{};
  int chains = 1;
  // Validate the matching and its winding every this many sweeps (0: never).
  long check_interval = 0;
};
void validate(const ChainConfig& c);

struct EstimateWithError {
  std::string name;
  double mean = 0.0;
  double stderr_ = 0.0;
  double tau_int = 0.5;  // in units of recorded samples
  long n_samples = 0;
  bool resolved = true;  // false: no blocking plateau, the error is a lower bound
};

// Flyvbjerg-Petersen blocking of a time series.
struct BlockingResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  double tau_int = 0.5;
  long n = 0;
  bool resolved = true;
  int plateau_level = 0;
  std::vector<double> level_errors;
};
BlockingResult blocking_analysis(const std::vector<double>& series);

// The brick wall; other sectors are rejected.
Matching init_state(const TorusLattice& lat, WindingPeriods sector = {});

// SplitMix64 step; chain c of a run is seeded with splitmix64(seed + c).
std::uint64_t splitmix64(std::uint64_t x);

struct SweepStats {
  long proposed = 0;
  long flippable = 0;
  long accepted = 0;
};

// Single-plaquette rotation Metropolis chain for
//   mu(M) ~ prod_b t_b^(m) exp(lambda W(M)).
class DimerChain {
 public:
  DimerChain(const TorusLattice& lat, double lambda, double m, std::uint64_t seed,
             Matching start);

  // L^2 proposals at uniformly random faces. A fixed visiting order would
  // make the lambda = m = 0 chain deterministic, since every flip is accepted.
  SweepStats sweep();

  bool flippable(int face) const;
  // Change of W and the weight ratio mu(M')/mu(M) for rotating the face.
  int delta_w(int face);
  double weight_ratio(int face);
  void flip(int face);  // unconditional; face must be flippable

  const std::vector<char>& occupied() const { return occ_; }
  int plaquettes() const { return w_; }
  Matching matching() const;
  const TorusLattice& lattice() const { return lat_; }

 private:
  double uniform();
  bool face_occupied(int face) const;

  TorusLattice lat_;
  double lambda_, m_;
  std::mt19937_64 rng_;
  std::vector<char> occ_;
  std::vector<std::array<int, 4>> fb_;  // bottom, top, left, right bonds
  std::vector<std::array<int, 4>> fn_;  // faces below, above, left, right
  std::vector<char> np_;
  int w_ = 0;
  double exp_lambda_[9];
};

enum class ObservableKind {
  Occupancy,        // <1_b>, b = ((0,0), j), averaged over translations
  DimerCumulant,    // <1_b; 1_b'>, b' = ((d1,d2), jp)
  HeightMoment,     // <(h_eta - h_xi)^order> along the staircase path
  HeightVariance,   // Var(h_eta - h_xi)
  ElectricRe,       // Re <exp(i alpha (h_eta - h_xi))>
  ElectricIm,
  PlaquetteDensity  // W / L^2
};

struct Observable {
  ObservableKind kind = ObservableKind::Occupancy;
  std::string name;
  int j = 1, jp = 1;
  int d1 = 0, d2 = 0;
  Face xi{}, eta{};
  int order = 2;
  double alpha = 0.0;
};

// Parses "occ:j=1", "cum:j=1,jp=1,d=3,0", "hmom:eta=8,0,n=2", "hvar:eta=8,0",
// "ere:eta=8,0,alpha=0.785", "eim:...", "plaq". xi defaults to (0,0).
Observable parse_observable(const std::string& spec);

struct McmcResult {
  ChainConfig config;
  std::vector<EstimateWithError> observables;
  double acceptance_rate = 0.0;  // accepted / proposed
  double flippable_rate = 0.0;
  long samples_per_chain = 0;
};

// Translations keep the measure invariant: all of them at m = 0, even a1
// shifts otherwise. Chains run on up to worker_count() threads; results do not
// depend on the thread count.
McmcResult run_mcmc(const ChainConfig& config, const std::vector<Observable>& obs);

}  // namespace dimerlab
