#pragma once

#include <vector>

#include "dimerlab/lattice.hpp"

namespace dimerlab {

// Perfect matching stored both as a partner map and as bond occupancies.
struct Matching {
  std::vector<int> partner;     // site -> site
  std::vector<char> occupied;   // bond index -> 0/1
};

Matching matching_from_bonds(const TorusLattice& lat, const std::vector<int>& bonds);
std::vector<int> occupied_bonds(const Matching& m);
// Every site covered exactly once by an occupied nearest-neighbour bond.
bool is_valid_matching(const TorusLattice& lat, const Matching& m);

// Horizontal dimers (x, x + e1) on even x1.
Matching brick_wall(const TorusLattice& lat);
// Vertical dimers (x, x + e2) with x2 = x1 mod 2: neighbouring columns are
// offset by one row.
Matching column_shifted_brick_wall(const TorusLattice& lat);

// N_P for the face with lower-left corner f: both horizontal or both vertical
// boundary bonds occupied.
bool plaquette_occupied(const TorusLattice& lat, const std::vector<char>& occ, Face f);
int plaquette_count(const TorusLattice& lat, const std::vector<char>& occ);
double matching_weight_log(const TorusLattice& lat, const Matching& m, double lambda, double mass);

}  // namespace dimerlab
