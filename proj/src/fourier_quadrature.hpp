#pragma once

#include <functional>
#include <vector>

#include "dimerlab/kasteleyn.hpp"

// Quadrature helpers shared by the Majorana and single-scale propagator tables.
// Tables are (2 range + 1)^2, row x1, column x2, and are accumulated into.
namespace dimerlab {

// Polar rule over the disk: Gauss-Legendre panels between `edges` in rho,
// midpoint rule with n_phi points in the angle, weight radial(rho).
void add_polar_disk(double m, int range, const std::function<double(double)>& radial,
                    const std::vector<double>& edges, int n_phi, std::vector<Mat2>& out);

std::vector<double> radial_edges(double m, double flat_end, double outer, int transition_panels);
int angular_points(double rho_max, int range);

}  // namespace dimerlab
