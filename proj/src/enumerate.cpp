#include "dimerlab/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "dimerlab/cumulants.hpp"

namespace dimerlab {

double estimated_matching_count(int L) {
  constexpr double kCatalan = 0.915965594177219015;
  return std::exp(kCatalan / kPi * L * L);
}

namespace {

class Search {
 public:
  explicit Search(const TorusLattice& lat) : lat_(lat) {
    m_.partner.assign(lat.num_sites(), -1);
    m_.occupied.assign(lat.num_bonds(), 0);
  }

  void place(int b) {
    int x = lat_.tail_index(b), y = lat_.head_index(b);
    m_.partner[x] = y;
    m_.partner[y] = x;
    m_.occupied[b] = 1;
  }
  void remove(int b) {
    m_.partner[lat_.tail_index(b)] = -1;
    m_.partner[lat_.head_index(b)] = -1;
    m_.occupied[b] = 0;
  }

  // Candidate bonds at the first uncovered site at or after `from`.
  int first_free(int from) const {
    int n = lat_.num_sites();
    while (from < n && m_.partner[from] != -1) ++from;
    return from;
  }

  template <class F>
  void run(int from, int depth_left, std::vector<int>& prefix, const F& leaf) {
    int s = first_free(from);
    if (s == lat_.num_sites() || depth_left == 0) {
      leaf(s, prefix);
      return;
    }
    for (int b : lat_.site_bonds(s)) {
      int other = lat_.tail_index(b) == s ? lat_.head_index(b) : lat_.tail_index(b);
      if (m_.partner[other] != -1) continue;
      place(b);
      prefix.push_back(b);
      run(s + 1, depth_left - 1, prefix, leaf);
      prefix.pop_back();
      remove(b);
    }
  }

  const Matching& matching() const { return m_; }

 private:
  const TorusLattice& lat_;
  Matching m_;
};

struct Task {
  std::vector<int> prefix;
  int next;
};

}  // namespace

int enumerate_matchings_grouped(const TorusLattice& lat, const std::function<void(int)>& on_groups,
                                const std::function<void(int, const Matching&)>& visit,
                                const EnumerationOptions& opts) {
  if (estimated_matching_count(lat.L()) > opts.budget)
    throw Error("BudgetExceeded", "estimated " + std::to_string(estimated_matching_count(lat.L())) +
                                      " matchings for L=" + std::to_string(lat.L()));
  std::vector<Task> tasks;
  {
    Search s(lat);
    std::vector<int> prefix;
    s.run(0, opts.split_depth, prefix,
          [&](int next, const std::vector<int>& p) { tasks.push_back({p, next}); });
  }
  const int groups = std::max(1, std::min<int>(opts.groups, static_cast<int>(tasks.size())));
  on_groups(groups);
  std::atomic<long long> total{0};
  const long long budget = static_cast<long long>(opts.budget);
  parallel_for(groups, [&](std::size_t g) {
    std::size_t lo = tasks.size() * g / groups, hi = tasks.size() * (g + 1) / groups;
    for (std::size_t t = lo; t < hi; ++t) {
      Search s(lat);
      for (int b : tasks[t].prefix) s.place(b);
      std::vector<int> scratch;
      long long local = 0;
      s.run(tasks[t].next, -1, scratch, [&](int, const std::vector<int>&) {
        visit(static_cast<int>(g), s.matching());
        if ((++local & 0xFFFF) == 0 && total.load() + local > budget)
          throw Error("BudgetExceeded", "matching count exceeds budget");
      });
      total += local;
      if (total.load() > budget) throw Error("BudgetExceeded", "matching count exceeds budget");
    }
  });
  return groups;
}

void enumerate_matchings(const TorusLattice& lat, const std::function<void(const Matching&)>& visit,
                         const EnumerationOptions& opts) {
  EnumerationOptions seq = opts;
  seq.groups = 1;
  enumerate_matchings_grouped(
      lat, [](int) {}, [&](int, const Matching& m) { visit(m); }, seq);
}

long long count_matchings(const TorusLattice& lat, const EnumerationOptions& opts) {
  return fold_matchings(
      lat, 0LL, [](long long& c, const Matching&) { ++c; },
      [](long long& a, long long b) { a += b; }, opts);
}

double matching_weight(const TorusLattice& lat, const Matching& mt, const Ensemble& e) {
  double w = 1.0;
  if (e.m != 0.0)
    for (std::size_t b = 0; b < mt.occupied.size(); ++b)
      if (mt.occupied[b]) w *= bond_weight(lat.bond(static_cast<int>(b)), e.m);
  if (e.lambda != 0.0) w *= std::exp(e.lambda * plaquette_count(lat, mt.occupied));
  return w;
}

namespace {

struct WeightedAcc {
  CompensatedSum z;
  long long count = 0;
  std::vector<CompensatedSum> re, im;
};

}  // namespace

ExactExpectations exact_expectations(const TorusLattice& lat, const Ensemble& e,
                                     const std::vector<MatchingObservable>& obs,
                                     const EnumerationOptions& opts) {
  WeightedAcc init;
  init.re.resize(obs.size());
  init.im.resize(obs.size());
  WeightedAcc acc = fold_matchings(
      lat, init,
      [&](WeightedAcc& a, const Matching& mt) {
        if (e.filter && !e.filter(mt)) return;
        double w = matching_weight(lat, mt, e);
        a.z.add(w);
        ++a.count;
        for (std::size_t i = 0; i < obs.size(); ++i) {
          cplx v = obs[i](mt);
          a.re[i].add(w * v.real());
          a.im[i].add(w * v.imag());
        }
      },
      [](WeightedAcc& t, const WeightedAcc& a) {
        t.z.add(a.z.value());
        t.count += a.count;
        for (std::size_t i = 0; i < t.re.size(); ++i) {
          t.re[i].add(a.re[i].value());
          t.im[i].add(a.im[i].value());
        }
      },
      opts);
  ExactExpectations r;
  r.z = acc.z.value();
  r.count = acc.count;
  if (r.z == 0.0) throw Error("EmptyEnsemble", "no matching passes the filter");
  for (std::size_t i = 0; i < obs.size(); ++i)
    r.values.push_back(cplx(acc.re[i].value(), acc.im[i].value()) / r.z);
  return r;
}

double exact_partition_function(const TorusLattice& lat, const Ensemble& e,
                                const EnumerationOptions& opts) {
  return exact_expectations(lat, e, {}, opts).z;
}

double exact_interacting_expectation(const TorusLattice& lat, const Ensemble& e,
                                     const std::function<double(const Matching&)>& obs,
                                     const EnumerationOptions& opts) {
  auto r = exact_expectations(lat, e, {[&](const Matching& m) { return cplx(obs(m), 0.0); }}, opts);
  return r.values[0].real();
}

std::vector<double> exact_subset_moments(const TorusLattice& lat, const Ensemble& e,
                                         const std::vector<int>& bonds,
                                         const EnumerationOptions& opts) {
  const int k = static_cast<int>(bonds.size());
  if (k > 16) throw Error("Unsupported", "too many bonds for subset moments");
  const unsigned full = 1u << k;
  struct Acc {
    CompensatedSum z;
    std::vector<CompensatedSum> pattern;
  };
  Acc init;
  init.pattern.resize(full);
  Acc acc = fold_matchings(
      lat, init,
      [&](Acc& a, const Matching& mt) {
        if (e.filter && !e.filter(mt)) return;
        double w = matching_weight(lat, mt, e);
        unsigned mask = 0;
        for (int i = 0; i < k; ++i)
          if (mt.occupied[bonds[i]]) mask |= 1u << i;
        a.z.add(w);
        a.pattern[mask].add(w);
      },
      [](Acc& t, const Acc& a) {
        t.z.add(a.z.value());
        for (std::size_t i = 0; i < t.pattern.size(); ++i) t.pattern[i].add(a.pattern[i].value());
      },
      opts);
  std::vector<double> mom(full, 0.0);
  for (unsigned s = 0; s < full; ++s) {
    CompensatedSum sum;
    for (unsigned p = 0; p < full; ++p)
      if ((p & s) == s) sum.add(acc.pattern[p].value());
    mom[s] = sum.value() / acc.z.value();
  }
  return mom;
}

double exact_interacting_cumulant(const TorusLattice& lat, const Ensemble& e,
                                  const std::vector<int>& bonds, const EnumerationOptions& opts) {
  if (bonds.size() > static_cast<std::size_t>(kMaxCumulantOrder))
    throw Error("Unsupported", "cumulant order exceeds 6");
  auto mom = exact_subset_moments(lat, e, bonds, opts);
  return cumulant_from_moments(static_cast<int>(bonds.size()),
                               [&](unsigned mask) { return mom[mask]; });
}

BondMoments::BondMoments(const TorusLattice& lat, const Ensemble& e,
                         const EnumerationOptions& opts)
    : nb_(lat.num_bonds()) {
  const std::size_t nb = nb_;
  struct Acc {
    long double z = 0.0L;
    long long count = 0;
    std::vector<long double> m1, m2, m3;
  };
  Acc init;
  init.m1.assign(nb, 0.0L);
  init.m2.assign(nb * nb, 0.0L);
  init.m3.assign(nb * nb * nb, 0.0L);
  Acc acc = fold_matchings(
      lat, init,
      [&](Acc& a, const Matching& mt) {
        if (e.filter && !e.filter(mt)) return;
        long double w = matching_weight(lat, mt, e);
        a.z += w;
        ++a.count;
        std::vector<int> occ = occupied_bonds(mt);
        const std::size_t n = occ.size();
        for (std::size_t i = 0; i < n; ++i) {
          a.m1[occ[i]] += w;
          for (std::size_t j = i + 1; j < n; ++j) {
            a.m2[occ[i] * nb + occ[j]] += w;
            for (std::size_t l = j + 1; l < n; ++l) a.m3[(occ[i] * nb + occ[j]) * nb + occ[l]] += w;
          }
        }
      },
      [](Acc& t, const Acc& a) {
        t.z += a.z;
        t.count += a.count;
        for (std::size_t i = 0; i < t.m1.size(); ++i) t.m1[i] += a.m1[i];
        for (std::size_t i = 0; i < t.m2.size(); ++i) t.m2[i] += a.m2[i];
        for (std::size_t i = 0; i < t.m3.size(); ++i) t.m3[i] += a.m3[i];
      },
      opts);
  z_ = static_cast<double>(acc.z);
  count_ = acc.count;
  auto conv = [&](const std::vector<long double>& src, std::vector<double>& dst) {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<double>(src[i] / acc.z);
  };
  conv(acc.m1, m1_);
  conv(acc.m2, m2_);
  conv(acc.m3, m3_);
}

double BondMoments::moment(std::vector<int> bonds) const {
  std::sort(bonds.begin(), bonds.end());
  bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
  const std::size_t nb = nb_;
  switch (bonds.size()) {
    case 0:
      return 1.0;
    case 1:
      return m1_[bonds[0]];
    case 2:
      return m2_[bonds[0] * nb + bonds[1]];
    case 3:
      return m3_[(bonds[0] * nb + bonds[1]) * nb + bonds[2]];
    default:
      throw Error("Unsupported", "BondMoments stores orders up to 3");
  }
}

}  // namespace dimerlab
