#pragma once

#include <vector>

#include "dimerlab/freecorr.hpp"

namespace dimerlab {

// N_P for the face P with lower-left corner x is the sum of two mutually
// exclusive parallel-pair insertions:
//   1_{(x, x+e1)} 1_{(x+e2, x+e1+e2)}  +  1_{(x, x+e2)} 1_{(x+e1, x+e1+e2)}.
struct PlaquetteVertex {
  Face p;
  std::array<Bond, 2> horizontal;
  std::array<Bond, 2> vertical;
};
PlaquetteVertex plaquette_vertex(Face p);

// Joint cumulant <1_{b1}; ...; 1_{bk}; N_P> at lambda = 0, k <= 5.
double plaquette_insertion_cumulant(const std::vector<Bond>& bonds, Face p, const DimerCorrelator& c);

// <both insertions of P at once>: zero on matchings; its Wick value is the
// Pfaffian of a degenerate minor.
double plaquette_exclusion_moment(Face p, const DimerCorrelator& c);

struct FirstOrderResult {
  double value = 0.0;
  double tail_estimate = 0.0;  // infinite volume only
  long plaquettes = 0;
  bool flagged = false;        // |tail_estimate| above tolerance
};

// d/d alpha of <1_{b1}; ...; 1_{bk}> at alpha = e^lambda - 1 = 0, as
// sum_P <1_{b1}; ...; 1_{bk}; N_P> over faces whose midpoint lies within
// sup-distance R (rounded per axis) of the midpoint of the bonds' bounding box.
// With a lattice the faces are wrapped and deduplicated (R >= L/2 covers the
// torus). Without one the plane is used, the reported value is the average of
// the partial sums for R - 1 and R (ring sums alternate in sign), and the tail
// is estimated from S(R) - S(R/2) assuming an R^-2 tail.
FirstOrderResult first_order_cumulant(const std::vector<Bond>& bonds, const DimerCorrelator& c, int R,
                                      const TorusLattice* lattice = nullptr, double tol = 1e-6);

}  // namespace dimerlab
