#include "dimerlab/matching.hpp"

#include <cmath>

namespace dimerlab {

Matching matching_from_bonds(const TorusLattice& lat, const std::vector<int>& bonds) {
  Matching m;
  m.partner.assign(lat.num_sites(), -1);
  m.occupied.assign(lat.num_bonds(), 0);
  for (int b : bonds) {
    int x = lat.tail_index(b), y = lat.head_index(b);
    if (m.partner[x] != -1 || m.partner[y] != -1)
      throw Error("InvalidMatching", "site covered twice");
    m.partner[x] = y;
    m.partner[y] = x;
    m.occupied[b] = 1;
  }
  return m;
}

std::vector<int> occupied_bonds(const Matching& m) {
  std::vector<int> out;
  for (std::size_t b = 0; b < m.occupied.size(); ++b)
    if (m.occupied[b]) out.push_back(static_cast<int>(b));
  return out;
}

bool is_valid_matching(const TorusLattice& lat, const Matching& m) {
  if (static_cast<int>(m.occupied.size()) != lat.num_bonds()) return false;
  if (static_cast<int>(m.partner.size()) != lat.num_sites()) return false;
  for (int s = 0; s < lat.num_sites(); ++s) {
    int covered = 0;
    for (int b : lat.site_bonds(s)) covered += m.occupied[b];
    if (covered != 1) return false;
    int p = m.partner[s];
    if (p < 0 || m.partner[p] != s) return false;
    bool adjacent = false;
    for (int d = 0; d < 4; ++d) adjacent = adjacent || lat.neighbor(s, d) == p;
    if (!adjacent) return false;
  }
  return true;
}

Matching brick_wall(const TorusLattice& lat) {
  std::vector<int> bonds;
  for (int s = 0; s < lat.num_sites(); ++s) {
    Site x = lat.site(s);
    if (parity_sign(x.x1) > 0) bonds.push_back(lat.bond_index({x, 1}));
  }
  return matching_from_bonds(lat, bonds);
}

Matching column_shifted_brick_wall(const TorusLattice& lat) {
  std::vector<int> bonds;
  for (int s = 0; s < lat.num_sites(); ++s) {
    Site x = lat.site(s);
    if (parity_sign(x.x2 - x.x1) > 0) bonds.push_back(lat.bond_index({x, 2}));
  }
  return matching_from_bonds(lat, bonds);
}

bool plaquette_occupied(const TorusLattice& lat, const std::vector<char>& occ, Face f) {
  auto fb = lat.face_bonds(f);
  return (occ[fb[0]] && occ[fb[1]]) || (occ[fb[2]] && occ[fb[3]]);
}

int plaquette_count(const TorusLattice& lat, const std::vector<char>& occ) {
  int w = 0;
  for (int f = 0; f < lat.num_faces(); ++f) w += plaquette_occupied(lat, occ, lat.face(f));
  return w;
}

double matching_weight_log(const TorusLattice& lat, const Matching& m, double lambda,
                           double mass) {
  double lw = lambda * plaquette_count(lat, m.occupied);
  if (mass != 0.0)
    for (int b : occupied_bonds(m)) lw += std::log(bond_weight(lat.bond(b), mass));
  return lw;
}

}  // namespace dimerlab
