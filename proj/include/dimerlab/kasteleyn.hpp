#pragma once

#include <array>
#include <vector>

#include "dimerlab/cutoff.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/pfaffian.hpp"

namespace dimerlab {

struct Flavor {
  int theta = 1;
  int tau = 1;
};

// Sector order (00), (01), (10), (11) with Z = 1/2 sum_s C_s Pf K^(s).
inline constexpr std::array<Flavor, 4> kFlavors{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
inline constexpr std::array<int, 4> kFlavorCoefficients{-1, 1, 1, 1};

struct KasteleynMatrix {
  Flavor flavor;
  double m = 0.0;
  CMatrix k;
};

// K_{x,x+e1} = t, K_{x,x+e2} = i t, antisymmetric; horizontal entries leaving
// the rightmost column get (-1)^theta, vertical entries leaving the top row
// get (-1)^tau.
KasteleynMatrix kasteleyn_matrix(const TorusLattice& lat, double m, int theta, int tau);
// The oriented entry K_{x, x+e_j} for bond b.
cplx kasteleyn_entry(const TorusLattice& lat, double m, Flavor f, const Bond& b);

struct FreePartition {
  double z = 0.0;
  std::array<PfaffianResult, 4> sectors;
};
FreePartition partition_sectors(const TorusLattice& lat, double m);
double partition_function_free(const TorusLattice& lat, double m);

// g(x,y) = [K^(theta tau)]^{-1}_{xy} from the momentum sum over
// k in (2 pi / L)(n + (theta, tau)/2).
class FinitePropagator {
 public:
  // allow_zero_mode drops momenta where the denominator vanishes; without it
  // the singular flavor (00) at m = 0 is rejected.
  FinitePropagator(const TorusLattice& lat, double m, Flavor f, bool allow_zero_mode = false);

  cplx operator()(int x_site, int y_site) const;
  cplx at(Site x, Site y) const;
  const TorusLattice& lattice() const { return lat_; }
  Flavor flavor() const { return flavor_; }
  double m() const { return m_; }

 private:
  TorusLattice lat_;
  double m_;
  Flavor flavor_;
  int span_;
  std::vector<cplx> table_;  // [(eps index) * span^2 + (d1 + L - 1) * span + (d2 + L - 1)]
};

// Thermodynamic-limit propagator g(x, y), depending on x - y and the parity of
// y1. Values are reduced to one-dimensional integrals: the k2 integral is done
// in closed form and the k1 integral by adaptive Gauss-Kronrod quadrature.
class InfinitePropagator {
 public:
  InfinitePropagator(double m, int range);

  cplx operator()(Site x, Site y) const;
  cplx displacement(int d1, int d2, int y1_parity_sign) const;
  double m() const { return m_; }
  int range() const { return range_; }

  static cplx evaluate(double m, int d1, int d2, int y1_parity_sign);

 private:
  double m_;
  int range_;
  int span_;
  std::vector<cplx> table_;
};

// (11)-flavor momentum sum on an N x N grid, for |d|_inf <= range. Used as an
// independent route to the thermodynamic limit.
class GridPropagator {
 public:
  GridPropagator(double m, int n, int range);
  cplx displacement(int d1, int d2, int y1_parity_sign) const;
  int grid() const { return n_; }
  // Doubles the grid from n_start until successive grids agree to tol over
  // the whole table; throws Error("NotConverged") with the residual otherwise.
  static GridPropagator converged(double m, int range, double tol = 1e-8, int n_start = 1024,
                                  int n_max = 8192);

 private:
  int n_;
  int range_;
  int span_;
  std::vector<cplx> table_;
};

// 2x2 matrix G_{omega omega'}(x), omega in {+, -}, index 0 = +.
struct Mat2 {
  cplx pp, pm, mp, mm;
};

// G(x) = int dk/(2pi)^2 chi_bar(k) e^{-ikx} / (2D) [[i s1 + s2, i m c1], [-i m c1, i s1 - s2]].
class MajoranaPropagator {
 public:
  MajoranaPropagator(double m, int range, const GevreyCutoff& cutoff, int grid = 1024);
  Mat2 operator()(int x1, int x2) const;
  double m() const { return m_; }
  int range() const { return range_; }

 private:
  double m_;
  int range_;
  int span_;
  std::vector<Mat2> table_;
};

// Symbol of the Majorana propagator at momentum k (without cutoff).
Mat2 majorana_symbol(double m, double k1, double k2);

// [[G++, i G+-], [-i G-+, G--]] evaluated at x - y.
std::array<std::array<cplx, 2>, 2> dirac_propagator(const MajoranaPropagator& g, Site x, Site y);

// g(x, y) rebuilt from G through the four-component field decomposition.
cplx propagator_from_majorana(const MajoranaPropagator& g, Site x, Site y);

}  // namespace dimerlab
