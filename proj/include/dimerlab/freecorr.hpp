#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dimerlab/cumulants.hpp"
#include "dimerlab/kasteleyn.hpp"

namespace dimerlab {

// Exact multi-bond moments <1_{b_1} ... 1_{b_k}> of the free (lambda = 0)
// measure. Bonds are given by origin and direction; on a torus they are
// wrapped, in infinite volume they live on the plane.
class DimerCorrelator {
 public:
  virtual ~DimerCorrelator() = default;
  // Moment of the given bonds; repeated bonds collapse via 1_b^2 = 1_b.
  double moment(std::vector<Bond> bonds) const;
  // Joint cumulant of k <= 6 bond indicators (repetitions allowed).
  double cumulant(const std::vector<Bond>& bonds) const;
  virtual double occupancy(const Bond& b) const { return moment({b}); }

 protected:
  // Moment of pairwise distinct bonds.
  virtual double distinct_moment(const std::vector<Bond>& bonds) const = 0;
  // Canonical key used to detect repeated bonds.
  virtual Bond canonical(const Bond& b) const { return b; }
};

// Wick rule for a single propagator: prod(-K_{x y}) Pf[g on (x1, y1, ..., xk, yk)].
class WickCorrelator : public DimerCorrelator {
 public:
  using Propagator = std::function<cplx(Site, Site)>;
  using Entry = std::function<cplx(const Bond&)>;
  WickCorrelator(Propagator g, Entry k) : g_(std::move(g)), k_(std::move(k)) {}
  // Signed sector value prod(-K) Pf[g minor]; complex in general.
  cplx sector_value(const std::vector<Bond>& bonds) const;

 protected:
  double distinct_moment(const std::vector<Bond>& bonds) const override;

 private:
  Propagator g_;
  Entry k_;
};

// Thermodynamic limit: the (11) reduction with plane Kasteleyn entries
// K_{x, x+e1} = t, K_{x, x+e2} = i t.
class InfiniteCorrelator : public WickCorrelator {
 public:
  explicit InfiniteCorrelator(std::shared_ptr<const InfinitePropagator> g);
  const InfinitePropagator& propagator() const { return *g_; }

 private:
  std::shared_ptr<const InfinitePropagator> g_;
};

// Single flavor on the torus (the (11)-only reduction by default).
class FlavorCorrelator : public WickCorrelator {
 public:
  FlavorCorrelator(const TorusLattice& lat, double m, Flavor f = {1, 1});

 protected:
  Bond canonical(const Bond& b) const override { return lat_.wrap(b); }

 private:
  FlavorCorrelator(const TorusLattice& lat, double m, Flavor f, std::shared_ptr<FinitePropagator> g);
  TorusLattice lat_;
  std::shared_ptr<FinitePropagator> g_;
};

// Exact torus correlations: sum over the four flavors weighted by
// C_s Pf K^(s) / (2 Z). A numerically singular flavor is evaluated through the
// fixed-pair Pfaffian expansion instead of its (nonexistent) inverse.
class FourFlavorCorrelator : public DimerCorrelator {
 public:
  FourFlavorCorrelator(const TorusLattice& lat, double m);
  double z() const { return z_; }
  bool sector_singular(int s) const { return singular_[s]; }
  // The same moment evaluated only by fixed-pair expansions of all four
  // Pfaffians; an independent route used as a cross-check.
  double moment_by_expansion(const std::vector<Bond>& bonds) const;

 protected:
  double distinct_moment(const std::vector<Bond>& bonds) const override;
  Bond canonical(const Bond& b) const override { return lat_.wrap(b); }

 private:
  cplx fixed_pairs(int s, const std::vector<Bond>& bonds) const;
  TorusLattice lat_;
  double m_;
  double z_;
  std::array<CMatrix, 4> k_;
  std::array<cplx, 4> pf_;
  std::array<bool, 4> singular_{};
  std::array<std::unique_ptr<FlavorCorrelator>, 4> flavors_;
};

double dimer_moment(const std::vector<Bond>& bonds, const DimerCorrelator& c);
double dimer_cumulant(const std::vector<Bond>& bonds, const DimerCorrelator& c);

// Leading large-distance form of <1_b; 1_b'> for b = (x, x+e_j), b' = (y, y+e_j'):
//   -(K / 2 pi^2) (-1)^{d1+d2} Re[i^{j+j'} / (d1 + i d2)^2]
//   + delta_{j j'} (Kt / 2 pi^2) (-1)^{d_j} |d|^{-2 kappa},   d = x - y.
double two_point_asymptotic(int d1, int d2, int j, int jp, double K = 1.0, double Kt = 1.0,
                            double kappa = 1.0);

// Truncated n-point function of a chiral fermion as a sum of cyclic loops:
//   -sum over orderings pi of {2..n} of G(z1 - z_pi2) G(z_pi2 - z_pi3) ... G(z_pin - z1).
cplx n_point_fermion_loop(const std::vector<cplx>& points,
                          const std::function<cplx(cplx)>& kernel);

}  // namespace dimerlab
