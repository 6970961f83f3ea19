#pragma once

#include <cstdint>
#include <vector>

#include "dimerlab/freecorr.hpp"
#include "dimerlab/matching.hpp"

namespace dimerlab {

// Heights are kept as integers in units of 1/4.
int height_difference_quarters(const TorusLattice& lat, const Matching& m, const DualPath& path);
double height_difference(const TorusLattice& lat, const Matching& m, const DualPath& path);
// Same from a bond occupancy array.
int height_difference_quarters(const TorusLattice& lat, const std::vector<char>& occ,
                               const DualPath& path);

// Face heights with h = 0 on the central face (lower-left corner (0,0)),
// accumulated one dual step at a time without leaving the fundamental domain.
struct HeightField {
  int L = 0;
  std::vector<int> quarters;  // by face index
  double at(const TorusLattice& lat, Face f) const { return quarters[lat.face_index(f)] / 4.0; }
};
// traversal_seed = 0 is breadth-first in a fixed neighbour order; other seeds
// randomise the neighbour order, which must not change the result.
HeightField height_field(const TorusLattice& lat, const Matching& m, std::uint64_t traversal_seed = 0);

// Height increments along dual loops winding once in the +e1 and +e2
// directions; integers.
struct WindingPeriods {
  int t1 = 0;
  int t2 = 0;
  friend bool operator==(const WindingPeriods&, const WindingPeriods&) = default;
};
WindingPeriods winding(const TorusLattice& lat, const Matching& m);
WindingPeriods winding(const TorusLattice& lat, const std::vector<char>& occ);

// How the exact free height cumulant is evaluated.
enum class CumulantRoute {
  // Direct n-fold sum over bonds of n bond-disjoint paths of sigma-signed
  // joint bond cumulants from the correlator.
  PathSum,
  // Same n paths, but the connected Wick loops are summed as traces of
  // products of propagator blocks (single propagator only).
  LoopTrace,
  // One path; n-th derivative of (1/2) tr log(I + G dK(s)) (single propagator only).
  SinglePath,
  // One staircase path taken n times; joint cumulants with repeated bonds.
  // Works for any correlator, including small tori where n paths do not fit.
  RepeatedPath,
};

// n-th cumulant of h_eta - h_xi at lambda = 0, n <= 4.
double exact_height_cumulant(int n, Face xi, Face eta, const DimerCorrelator& corr,
                             CumulantRoute route = CumulantRoute::PathSum,
                             const TorusLattice* lattice = nullptr);
// Trace routes need the propagator (plane sites) and Kasteleyn entries.
double exact_height_cumulant_trace(int n, Face xi, Face eta, const WickCorrelator::Propagator& g,
                                   const WickCorrelator::Entry& k, CumulantRoute route);
double exact_height_cumulant(int n, Face xi, Face eta, const InfiniteCorrelator& corr,
                             CumulantRoute route);

// <exp(i alpha (h_eta - h_xi))> in the free infinite-volume model along the
// staircase path, from sqrt(det(I + G dK)) continued in alpha from 0.
cplx electric_correlator(double alpha, Face xi, Face eta, const InfinitePropagator& g,
                         int continuation_steps = 16);

}  // namespace dimerlab
