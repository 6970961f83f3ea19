#pragma once

#include <functional>
#include <vector>

#include "dimerlab/matching.hpp"

namespace dimerlab {

struct EnumerationOptions {
  double budget = 5e7;  // abort when the estimated or actual count exceeds this
  int split_depth = 4;  // dimers placed before the search splits into tasks
  int groups = 16;      // fixed task grouping, independent of the thread count
};

// e^{G L^2 / pi} with Catalan's constant G: the leading growth of the torus count.
double estimated_matching_count(int L);

// Calls visit(group, m) for every perfect matching exactly once. Groups are
// processed in parallel, each group sequentially by one thread. Returns the
// number of groups actually used; on_groups(n) is called before any visit.
int enumerate_matchings_grouped(const TorusLattice& lat,
                                const std::function<void(int)>& on_groups,
                                const std::function<void(int, const Matching&)>& visit,
                                const EnumerationOptions& opts = {});

// Sequential stream in a fixed order.
void enumerate_matchings(const TorusLattice& lat, const std::function<void(const Matching&)>& visit,
                         const EnumerationOptions& opts = {});

long long count_matchings(const TorusLattice& lat, const EnumerationOptions& opts = {});

// Weighted fold: acc[g] gets visit(acc[g], m) per matching; accumulators are
// merged in group order.
template <class Acc, class Visit, class Merge>
Acc fold_matchings(const TorusLattice& lat, const Acc& init, Visit visit, Merge merge,
                   const EnumerationOptions& opts = {}) {
  std::vector<Acc> accs;
  enumerate_matchings_grouped(
      lat, [&](int n) { accs.assign(n, init); },
      [&](int g, const Matching& m) { visit(accs[g], m); }, opts);
  Acc total = init;
  for (const auto& a : accs) merge(total, a);
  return total;
}

using MatchingFilter = std::function<bool(const Matching&)>;
using MatchingObservable = std::function<cplx(const Matching&)>;

// Ensemble weight prod t_b^(m) e^{lambda W}, optionally restricted by a filter.
struct Ensemble {
  double lambda = 0.0;
  double m = 0.0;
  MatchingFilter filter;
};

double matching_weight(const TorusLattice& lat, const Matching& mt, const Ensemble& e);

// Z and <O_i> for several observables in one pass.
struct ExactExpectations {
  double z = 0.0;
  long long count = 0;
  std::vector<cplx> values;
};
ExactExpectations exact_expectations(const TorusLattice& lat, const Ensemble& e,
                                     const std::vector<MatchingObservable>& obs,
                                     const EnumerationOptions& opts = {});

double exact_partition_function(const TorusLattice& lat, const Ensemble& e,
                                const EnumerationOptions& opts = {});
double exact_interacting_expectation(const TorusLattice& lat, const Ensemble& e,
                                     const std::function<double(const Matching&)>& obs,
                                     const EnumerationOptions& opts = {});

// Exact moments E[prod_{i in S} 1_{b_i}] for every subset S of the list,
// indexed by bitmask. Repeated bonds are allowed.
std::vector<double> exact_subset_moments(const TorusLattice& lat, const Ensemble& e,
                                         const std::vector<int>& bonds,
                                         const EnumerationOptions& opts = {});
// Joint cumulant <1_{b_1}; ...; 1_{b_k}> for k <= 6.
double exact_interacting_cumulant(const TorusLattice& lat, const Ensemble& e,
                                  const std::vector<int>& bonds,
                                  const EnumerationOptions& opts = {});

// All moments of order <= 3 of the bond indicators, from one enumeration.
class BondMoments {
 public:
  BondMoments(const TorusLattice& lat, const Ensemble& e, const EnumerationOptions& opts = {});
  double z() const { return z_; }
  long long count() const { return count_; }
  // Moment of the listed bonds; duplicates reduce through 1_b^2 = 1_b.
  double moment(std::vector<int> bonds) const;

 private:
  int nb_;
  double z_ = 0.0;
  long long count_ = 0;
  std::vector<double> m1_, m2_, m3_;
};

}  // namespace dimerlab
