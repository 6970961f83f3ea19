#include "dimerlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>
#include <tuple>

namespace dimerlab {

TorusLattice::TorusLattice(int L) : L_(L), half_(L / 2) {
  if (L % 2 != 0) throw Error("OddSide", "L=" + std::to_string(L) + " must be even");
  if (L < 4) throw Error("SideTooSmall", "L=" + std::to_string(L) + " must be at least 4");
}

int TorusLattice::wrap(int c) const {
  int r = (c + half_ - 1) % L_;
  if (r < 0) r += L_;
  return r - half_ + 1;
}

int TorusLattice::site_index(Site s) const {
  int c1 = wrap(s.x1) + half_ - 1;
  int c2 = wrap(s.x2) + half_ - 1;
  return c2 * L_ + c1;
}

Site TorusLattice::site(int index) const {
  return {index % L_ - half_ + 1, index / L_ - half_ + 1};
}

int TorusLattice::bond_index(const Bond& b) const { return 2 * site_index(b.x) + (b.j - 1); }

Bond TorusLattice::bond(int index) const { return {site(index / 2), index % 2 + 1}; }

Site TorusLattice::head(const Bond& b) const {
  return wrap(b.j == 1 ? Site{b.x.x1 + 1, b.x.x2} : Site{b.x.x1, b.x.x2 + 1});
}

int TorusLattice::head_index(int bi) const { return site_index(head(bond(bi))); }

Face TorusLattice::face(int index) const {
  Site s = site(index);
  return {s.x1, s.x2};
}

std::array<int, 4> TorusLattice::face_bonds(Face f) const {
  return {bond_index({{f.a1, f.a2}, 1}), bond_index({{f.a1, f.a2 + 1}, 1}),
          bond_index({{f.a1, f.a2}, 2}), bond_index({{f.a1 + 1, f.a2}, 2})};
}

std::array<int, 4> TorusLattice::site_bonds(int s) const {
  Site x = site(s);
  return {bond_index({x, 1}), bond_index({x, 2}), bond_index({{x.x1 - 1, x.x2}, 1}),
          bond_index({{x.x1, x.x2 - 1}, 2})};
}

int TorusLattice::neighbor(int s, int dir) const {
  static const int d1[4] = {1, 0, -1, 0};
  static const int d2[4] = {0, 1, 0, -1};
  Site x = site(s);
  return site_index({x.x1 + d1[dir], x.x2 + d2[dir]});
}

double bond_weight(const Bond& b, double m) {
  return b.j == 1 ? 1.0 + m * parity_sign(b.x.x1) : 1.0;
}

int crossing_sign(const Bond& b, int alpha) {
  return alpha * parity_sign(b.x.x1 + b.x.x2) * parity_sign(b.j);
}

DualStep dual_step(Face f, int dir) {
  DualStep s;
  s.from = f;
  switch (dir) {
    case 0:
      s.to = {f.a1 + 1, f.a2};
      s.bond = {{f.a1 + 1, f.a2}, 2};
      s.alpha = 1;
      break;
    case 1:
      s.to = {f.a1, f.a2 + 1};
      s.bond = {{f.a1, f.a2 + 1}, 1};
      s.alpha = 1;
      break;
    case 2:
      s.to = {f.a1 - 1, f.a2};
      s.bond = {{f.a1, f.a2}, 2};
      s.alpha = -1;
      break;
    case 3:
      s.to = {f.a1, f.a2 - 1};
      s.bond = {{f.a1, f.a2}, 1};
      s.alpha = -1;
      break;
    default:
      throw Error("BadDirection", "dual step direction must be 0..3");
  }
  s.sigma = crossing_sign(s.bond, s.alpha);
  s.dz = s.bond.j == 1 ? cplx(0.0, s.alpha) : cplx(s.alpha, 0.0);
  return s;
}

int white_on_right_sign(Face f, int dir) {
  DualStep s = dual_step(f, dir);
  // Twice the coordinates, so that face centres and bond midpoints are integral.
  int ux = (s.to.a1 - s.from.a1), uy = (s.to.a2 - s.from.a2);
  int rx = uy, ry = -ux;  // right-hand normal
  Site p = s.bond.x;
  Site q = s.bond.j == 1 ? Site{p.x1 + 1, p.x2} : Site{p.x1, p.x2 + 1};
  int mx = p.x1 + q.x1, my = p.x2 + q.x2;
  int side_p = (2 * p.x1 - mx) * rx + (2 * p.x2 - my) * ry;
  Site right = side_p > 0 ? p : q;
  bool white = ((right.x1 + right.x2) % 2 + 2) % 2 == 0;
  return white ? 1 : -1;
}

DualPath path_from_moves(Face start, const std::vector<int>& dirs) {
  DualPath p;
  p.start = start;
  Face cur = start;
  p.steps.reserve(dirs.size());
  for (int d : dirs) {
    DualStep s = dual_step(cur, d);
    p.steps.push_back(s);
    cur = s.to;
  }
  p.end = cur;
  return p;
}

DualPath reversed(const DualPath& p) {
  DualPath r;
  r.start = p.end;
  r.end = p.start;
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) {
    DualStep s = *it;
    std::swap(s.from, s.to);
    s.alpha = -s.alpha;
    s.sigma = -s.sigma;
    s.dz = -s.dz;
    r.steps.push_back(s);
  }
  return r;
}

DualPath concatenate(const DualPath& a, const DualPath& b) {
  if (!(a.end == b.start)) throw Error("PathMismatch", "paths do not share an endpoint");
  DualPath c = a;
  c.end = b.end;
  c.steps.insert(c.steps.end(), b.steps.begin(), b.steps.end());
  return c;
}

std::vector<int> staircase_moves(Face from, Face to) {
  std::vector<int> moves;
  int r1 = to.a1 - from.a1, r2 = to.a2 - from.a2;
  while (r1 != 0 || r2 != 0) {
    bool along1 = std::abs(r1) >= std::abs(r2);
    int& r = along1 ? r1 : r2;
    int dir = along1 ? (r > 0 ? 0 : 2) : (r > 0 ? 1 : 3);
    int run = std::min(2, std::abs(r));
    for (int k = 0; k < run; ++k) moves.push_back(dir);
    r += (r > 0 ? -run : run);
  }
  return moves;
}

std::vector<int> straight_run_lengths(const DualPath& p) {
  std::vector<int> runs;
  int prev = -1;
  for (const auto& s : p.steps) {
    int dir = s.bond.j == 2 ? (s.alpha > 0 ? 0 : 2) : (s.alpha > 0 ? 1 : 3);
    if (dir == prev)
      ++runs.back();
    else
      runs.push_back(1);
    prev = dir;
  }
  return runs;
}

namespace {

struct Frame {
  Face origin;
  int u1, u2, v1, v2;
  Face at(int s, int t) const {
    return {origin.a1 + s * u1 + t * v1, origin.a2 + s * u2 + t * v2};
  }
};

int even_ceil(double x) {
  int n = static_cast<int>(std::ceil(x));
  return n % 2 == 0 ? n : n + 1;
}

DualPath through(const Frame& fr, const std::vector<std::pair<int, int>>& pts) {
  std::vector<int> moves;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto m = staircase_moves(fr.at(pts[i].first, pts[i].second),
                             fr.at(pts[i + 1].first, pts[i + 1].second));
    moves.insert(moves.end(), m.begin(), m.end());
  }
  return path_from_moves(fr.at(pts.front().first, pts.front().second), moves);
}

std::tuple<int, int, int> plane_key(const Bond& b) { return {b.x.x1, b.x.x2, b.j}; }

}  // namespace

std::vector<DualPath> build_paths(Face xi, Face eta, int n, PathStyle style,
                                  const TorusLattice* lattice) {
  if (n < 1) throw Error("BadPathCount", "n must be positive");
  int d1 = eta.a1 - xi.a1, d2 = eta.a2 - xi.a2;
  if (d1 == 0 && d2 == 0) throw Error("CoincidentFaces", "xi and eta must differ");
  if (lattice) {
    if (std::abs(d1) >= lattice->L() / 2 || std::abs(d2) >= lattice->L() / 2)
      throw Error("FacesTooFar", "endpoints must satisfy |eta - xi|_inf < L/2");
  }

  Frame fr;
  fr.origin = xi;
  int D, delta;
  if (std::abs(d1) >= std::abs(d2)) {
    fr.u1 = d1 >= 0 ? 1 : -1;
    fr.u2 = 0;
    fr.v1 = 0;
    fr.v2 = 1;
    D = std::abs(d1);
    delta = d2;
  } else {
    fr.u1 = 0;
    fr.u2 = d2 >= 0 ? 1 : -1;
    fr.v1 = 1;
    fr.v2 = 0;
    D = std::abs(d2);
    delta = d1;
  }

  std::vector<DualPath> paths;
  if (style == PathStyle::Straight || n == 1) {
    DualPath p = path_from_moves(xi, staircase_moves(xi, eta));
    for (int i = 0; i < n; ++i) paths.push_back(p);
    return paths;
  }
  if (n > 4)
    throw Error("PathsNotSeparable", "at most 4 bond-disjoint paths leave a face");

  int H = std::max(2, even_ceil(D / 2.0));
  H = std::max(H, even_ceil(std::abs(delta) + 2.0));
  auto direct = [&]() {
    std::vector<std::pair<int, int>> pts{{0, 0}};
    // Leave xi and enter eta horizontally; the arcs use the vertical sides.
    if (D >= 4) {
      pts.push_back({2, 0});
      pts.push_back({D - 2, delta});
    } else if (D >= 2) {
      pts.push_back({1, 0});
      pts.push_back({D - 1, delta});
    } else if (delta != 0) {
      throw Error("PathsNotSeparable", "endpoints too close for a direct path");
    }
    pts.push_back({D, delta});
    return through(fr, pts);
  };
  // Arcs are built from both endpoints towards a meeting point on the top
  // (s = 1) or bottom (s = -1) run, so that no staircase doubles back.
  const int mid = 2 * (D / 4);
  auto arc = [&](int s, int b, int rise) {
    const int level = s > 0 ? std::max(0, delta) + H : std::min(0, delta) - H;
    // With b > 0 the last two steps before the run are vertical.
    const int corner = b > 0 ? level - 2 * s : level;
    DualPath a = through(fr, {{0, 0}, {0, s * rise}, {-b, corner}, {-b, level}, {mid, level}});
    DualPath c = through(
        fr, {{D, delta}, {D, delta + s * rise}, {D + b, corner}, {D + b, level}, {mid, level}});
    return concatenate(a, reversed(c));
  };
  if (n == 2) {
    paths.push_back(arc(1, 0, H));
    paths.push_back(arc(-1, 0, H));
  } else if (n == 3) {
    H = std::max(H, 4);
    int b = even_ceil(std::tan(kPi / 6.0) * H);
    paths.push_back(direct());
    paths.push_back(arc(1, b, 2));
    paths.push_back(arc(-1, b, 2));
  } else {
    paths.push_back(direct());
    paths.push_back(arc(1, 0, H));
    paths.push_back(arc(-1, 0, H));
    paths.push_back(through(fr, {{0, 0},
                                 {-H, 0},
                                 {-H, delta + 2 * H},
                                 {D + H, delta + 2 * H},
                                 {D + H, delta},
                                 {D, delta}}));
  }

  std::set<std::tuple<int, int, int>> seen;
  int lo1 = xi.a1, hi1 = xi.a1, lo2 = xi.a2, hi2 = xi.a2;
  for (const auto& p : paths) {
    for (const auto& s : p.steps) {
      if (!seen.insert(plane_key(s.bond)).second)
        throw Error("PathsNotSeparable", "generated paths share a bond");
      lo1 = std::min({lo1, s.to.a1}), hi1 = std::max({hi1, s.to.a1});
      lo2 = std::min({lo2, s.to.a2}), hi2 = std::max({hi2, s.to.a2});
    }
  }
  if (lattice && (hi1 - lo1 + 1 >= lattice->L() || hi2 - lo2 + 1 >= lattice->L()))
    throw Error("PathsNotSeparable", "paths do not fit in one fundamental domain");
  return paths;
}

}  // namespace dimerlab
