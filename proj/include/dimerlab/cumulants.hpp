#pragma once

#include <functional>
#include <vector>

namespace dimerlab {

inline constexpr int kMaxCumulantOrder = 6;

// All set partitions of {0, ..., k-1}, each a list of block bitmasks.
const std::vector<std::vector<unsigned>>& set_partitions(int k);

// Joint cumulant from moments by Moebius inversion over set partitions:
// kappa = sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_{B in pi} mu(B).
// moment(mask) must return the moment of the variables in mask; k <= 6.
double cumulant_from_moments(int k, const std::function<double(unsigned)>& moment);

}  // namespace dimerlab
