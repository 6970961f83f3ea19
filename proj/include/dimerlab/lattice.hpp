#pragma once

#include <array>
#include <vector>

#include "dimerlab/common.hpp"

namespace dimerlab {

struct Site {
  int x1 = 0;
  int x2 = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

// Undirected edge (x, x + e_j) with j in {1, 2}.
struct Bond {
  Site x;
  int j = 1;
  friend bool operator==(const Bond&, const Bond&) = default;
};

// A face is named by its lower-left corner.
struct Face {
  int a1 = 0;
  int a2 = 0;
  friend bool operator==(const Face&, const Face&) = default;
};

// Periodic L x L box with coordinates x_i in {-L/2+1, ..., L/2}. Sites are
// indexed row by row from the bottom row, left to right inside a row.
class TorusLattice {
 public:
  explicit TorusLattice(int L);

  int L() const { return L_; }
  int num_sites() const { return L_ * L_; }
  int num_bonds() const { return 2 * L_ * L_; }
  int num_faces() const { return L_ * L_; }

  int wrap(int c) const;
  Site wrap(Site s) const { return {wrap(s.x1), wrap(s.x2)}; }
  Bond wrap(const Bond& b) const { return {wrap(b.x), b.j}; }

  int site_index(Site s) const;
  Site site(int index) const;
  // Canonical index 2 * site_index(origin) + (j - 1).
  int bond_index(const Bond& b) const;
  Bond bond(int index) const;
  Site head(const Bond& b) const;
  int head_index(int bond_index) const;
  int tail_index(int bond_index) const { return bond_index / 2; }

  int face_index(Face f) const { return site_index({f.a1, f.a2}); }
  Face face(int index) const;
  // Bottom, top, left, right boundary bonds.
  std::array<int, 4> face_bonds(Face f) const;
  // Bonds at a site: east, north, west, south.
  std::array<int, 4> site_bonds(int site) const;
  int neighbor(int site, int dir) const;  // dir 0:+e1 1:+e2 2:-e1 3:-e2

  bool is_white(Site s) const { return ((s.x1 + s.x2) % 2 + 2) % 2 == 0; }
  bool in_rightmost_column(Site s) const { return wrap(s.x1) == L_ / 2; }
  bool in_top_row(Site s) const { return wrap(s.x2) == L_ / 2; }

 private:
  int L_;
  int half_;
};

double bond_weight(const Bond& b, double m);

// One dual-lattice step across a bond. Coordinates are those of the plane
// lift; a torus wraps them on use.
struct DualStep {
  Face from;
  Face to;
  Bond bond;
  int alpha = 1;  // +1: upward across horizontal or rightward across vertical
  int sigma = 1;
  cplx dz;
};

struct DualPath {
  Face start;
  Face end;
  std::vector<DualStep> steps;
};

// dir 0:+e1 1:+e2 2:-e1 3:-e2
DualStep dual_step(Face from, int dir);
DualPath path_from_moves(Face start, const std::vector<int>& dirs);
DualPath reversed(const DualPath& p);
DualPath concatenate(const DualPath& a, const DualPath& b);

// alpha (-1)^{x1+x2} (-1)^j for b = (x, x + e_j).
int crossing_sign(const Bond& b, int alpha);
// Geometric rule: +1 when the white endpoint of the crossed bond lies on the
// right of the direction of motion.
int white_on_right_sign(Face from, int dir);

// Dual path from `from` to `to` built out of 2-step straight runs, always
// advancing along the axis with the larger remaining offset (ties go to x1).
// A single 1-step run is used only when an offset component is odd.
std::vector<int> staircase_moves(Face from, Face to);

enum class PathStyle { WellSeparated, Straight };

// n paths from xi to eta. WellSeparated paths are pairwise bond-disjoint and
// leave xi in n distinct directions; Straight returns n copies of a single
// staircase. With a lattice, the paths must fit in one fundamental domain.
std::vector<DualPath> build_paths(Face xi, Face eta, int n, PathStyle style,
                                  const TorusLattice* lattice = nullptr);

// Maximal straight runs of a path, in steps.
std::vector<int> straight_run_lengths(const DualPath& p);

}  // namespace dimerlab
