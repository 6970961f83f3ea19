#include "dimerlab/cumulants.hpp"

#include <array>
#include <mutex>
#include <string>

#include "dimerlab/common.hpp"

namespace dimerlab {

namespace {

void grow(int i, int k, std::vector<unsigned>& blocks, std::vector<std::vector<unsigned>>& out) {
  if (i == k) {
    out.push_back(blocks);
    return;
  }
  // Index loop: the recursion appends to blocks and may reallocate it.
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    blocks[j] |= 1u << i;
    grow(i + 1, k, blocks, out);
    blocks[j] &= ~(1u << i);
  }
  blocks.push_back(1u << i);
  grow(i + 1, k, blocks, out);
  blocks.pop_back();
}

}  // namespace

const std::vector<std::vector<unsigned>>& set_partitions(int k) {
  static std::array<std::vector<std::vector<unsigned>>, kMaxCumulantOrder + 1> cache;
  static std::once_flag once;
  if (k < 0 || k > kMaxCumulantOrder)
    throw Error("Unsupported", "cumulant order " + std::to_string(k) + " exceeds 6");
  std::call_once(once, [] {
    for (int n = 0; n <= kMaxCumulantOrder; ++n) {
      std::vector<unsigned> blocks;
      grow(0, n, blocks, cache[n]);
    }
  });
  return cache[k];
}

double cumulant_from_moments(int k, const std::function<double(unsigned)>& moment) {
  if (k == 0) return 0.0;
  static const double fact[] = {1, 1, 2, 6, 24, 120, 720};
  double total = 0.0;
  for (const auto& p : set_partitions(k)) {
    int nblocks = static_cast<int>(p.size());
    double term = (nblocks % 2 == 1 ? 1.0 : -1.0) * fact[nblocks - 1];
    for (unsigned b : p) term *= moment(b);
    total += term;
  }
  return total;
}

}  // namespace dimerlab
