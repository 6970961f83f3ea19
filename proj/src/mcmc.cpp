#include "dimerlab/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace dimerlab {

void validate(const ChainConfig& c) {
  if (c.L < 4 || c.L % 2 != 0) throw Error("InvalidConfig", "L must be even and >= 4");
  if (c.sweeps <= 0) throw Error("InvalidConfig", "sweeps must be positive");
  if (c.burn_in < 0 || c.burn_in >= c.sweeps) throw Error("InvalidConfig", "need 0 <= burn-in < sweeps");
  if (c.thinning < 1) throw Error("InvalidConfig", "thinning must be >= 1");
  if (c.chains < 1) throw Error("InvalidConfig", "chains must be >= 1");
  if (std::abs(c.m) >= 1.0) throw Error("InvalidConfig", "|m| must be < 1");
}

BlockingResult blocking_analysis(const std::vector<double>& series) {
  BlockingResult r;
  r.n = static_cast<long>(series.size());
  if (series.empty()) {
    r.resolved = false;
    return r;
  }
  CompensatedSum total;
  for (double x : series) total.add(x);
  r.mean = total.value() / static_cast<double>(series.size());
  if (series.size() < 2) {
    r.resolved = false;
    return r;
  }
  constexpr std::size_t kMinBlocks = 16;
  std::vector<double> x = series;
  std::vector<double> err, derr;
  while (x.size() >= 2) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    c0 /= n;
    double e = std::sqrt(c0 / (n - 1.0));
    if (x.size() >= kMinBlocks || err.empty()) {
      err.push_back(e);
      derr.push_back(e / std::sqrt(2.0 * (n - 1.0)));
    }
    if (x.size() < 2 * kMinBlocks) break;
    std::vector<double> y(x.size() / 2);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * (x[2 * i] + x[2 * i + 1]);
    x.swap(y);
  }
  r.level_errors = err;
  if (err[0] == 0.0) {
    r.stderr_ = 0.0;
    r.tau_int = 0.5;
    return r;
  }
  // First level whose two successors do not rise by more than two of their
  // own error bars.
  int plateau = -1;
  for (std::size_t k = 0; k + 2 < err.size(); ++k) {
    if (err[k + 1] < err[k] + 2.0 * derr[k + 1] && err[k + 2] < err[k] + 2.0 * derr[k + 2]) {
      plateau = static_cast<int>(k);
      break;
    }
  }
  if (plateau < 0) {
    r.resolved = false;
    r.plateau_level = static_cast<int>(err.size()) - 1;
    r.stderr_ = *std::max_element(err.begin(), err.end());
  } else {
    r.plateau_level = plateau;
    r.stderr_ = std::max({err[plateau], err[plateau + 1], err[plateau + 2]});
  }
  r.tau_int = std::max(0.5, 0.5 * (r.stderr_ / err[0]) * (r.stderr_ / err[0]));
  return r;
}

Matching init_state(const TorusLattice& lat, WindingPeriods sector) {
  if (!(sector == WindingPeriods{}))
    throw Error("Unsupported", "only the (0,0) winding sector has a reference state");
  return brick_wall(lat);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

DimerChain::DimerChain(const TorusLattice& lat, double lambda, double m, std::uint64_t seed,
                       Matching start)
    : lat_(lat), lambda_(lambda), m_(m), rng_(seed), occ_(std::move(start.occupied)) {
  const int nf = lat_.num_faces();
  if (static_cast<int>(occ_.size()) != lat_.num_bonds())
    throw Error("InvalidState", "occupancy array has the wrong size");
  fb_.resize(nf);
  fn_.resize(nf);
  np_.assign(nf, 0);
  for (int f = 0; f < nf; ++f) {
    Face a = lat_.face(f);
    fb_[f] = lat_.face_bonds(a);
    fn_[f] = {lat_.face_index(Face{lat_.wrap(a.a1), lat_.wrap(a.a2 - 1)}),
              lat_.face_index(Face{lat_.wrap(a.a1), lat_.wrap(a.a2 + 1)}),
              lat_.face_index(Face{lat_.wrap(a.a1 - 1), lat_.wrap(a.a2)}),
              lat_.face_index(Face{lat_.wrap(a.a1 + 1), lat_.wrap(a.a2)})};
  }
  for (int f = 0; f < nf; ++f) {
    np_[f] = face_occupied(f);
    w_ += np_[f];
  }
  for (int d = -4; d <= 4; ++d) exp_lambda_[d + 4] = std::exp(lambda_ * d);
}

double DimerChain::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

bool DimerChain::face_occupied(int f) const {
  const auto& b = fb_[f];
  return (occ_[b[0]] && occ_[b[1]]) || (occ_[b[2]] && occ_[b[3]]);
}

bool DimerChain::flippable(int f) const { return face_occupied(f); }

void DimerChain::flip(int f) {
  const auto& b = fb_[f];
  for (int i = 0; i < 4; ++i) occ_[b[i]] ^= 1;
  for (int nb : fn_[f]) {
    char now = face_occupied(nb);
    w_ += now - np_[nb];
    np_[nb] = now;
  }
}

int DimerChain::delta_w(int f) {
  const int before = w_;
  flip(f);
  const int d = w_ - before;
  flip(f);
  return d;
}

double DimerChain::weight_ratio(int f) {
  const auto& b = fb_[f];
  // Both horizontal bonds of the face share x1, hence the same t.
  const double t = 1.0 + m_ * parity_sign(lat_.face(f).a1);
  const double t_ratio = occ_[b[0]] ? 1.0 / (t * t) : t * t;
  return exp_lambda_[delta_w(f) + 4] * t_ratio;
}

SweepStats DimerChain::sweep() {
  SweepStats s;
  const bool trivial = lambda_ == 0.0 && m_ == 0.0;
  const int nf = lat_.num_faces();
  std::uniform_int_distribution<int> pick(0, nf - 1);
  for (int i = 0; i < nf; ++i) {
    const int f = pick(rng_);
    ++s.proposed;
    if (!face_occupied(f)) continue;
    ++s.flippable;
    if (trivial) {
      flip(f);
      ++s.accepted;
      continue;
    }
    const auto& b = fb_[f];
    const double t = 1.0 + m_ * parity_sign(lat_.face(f).a1);
    const double t_ratio = occ_[b[0]] ? 1.0 / (t * t) : t * t;
    const int before = w_;
    flip(f);
    const double ratio = exp_lambda_[w_ - before + 4] * t_ratio;
    if (ratio >= 1.0 || uniform() < ratio) {
      ++s.accepted;
    } else {
      flip(f);
    }
  }
  return s;
}

Matching DimerChain::matching() const {
  std::vector<int> bonds;
  for (int b = 0; b < lat_.num_bonds(); ++b)
    if (occ_[b]) bonds.push_back(b);
  return matching_from_bonds(lat_, bonds);
}

namespace {

std::map<std::string, std::string> parse_fields(const std::string& body) {
  // key=value pairs separated by commas; a value may continue with ",int".
  std::map<std::string, std::string> out;
  std::stringstream ss(body);
  std::string tok, key;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (key.empty()) throw Error("BadObservable", "stray token '" + tok + "'");
      out[key] += "," + tok;
      continue;
    }
    key = tok.substr(0, eq);
    out[key] = tok.substr(eq + 1);
  }
  return out;
}

std::pair<int, int> parse_pair(const std::string& v) {
  auto c = v.find(',');
  if (c == std::string::npos) throw Error("BadObservable", "expected a,b in '" + v + "'");
  return {std::stoi(v.substr(0, c)), std::stoi(v.substr(c + 1))};
}

}  // namespace

Observable parse_observable(const std::string& spec) {
  Observable o;
  o.name = spec;
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto f = colon == std::string::npos ? std::map<std::string, std::string>{}
                                      : parse_fields(spec.substr(colon + 1));
  try {
    if (f.count("j")) o.j = std::stoi(f["j"]);
    if (f.count("jp")) o.jp = std::stoi(f["jp"]);
    if (f.count("d")) std::tie(o.d1, o.d2) = parse_pair(f["d"]);
    if (f.count("xi")) {
      auto [a, b] = parse_pair(f["xi"]);
      o.xi = {a, b};
    }
    if (f.count("eta")) {
      auto [a, b] = parse_pair(f["eta"]);
      o.eta = {a, b};
    }
    if (f.count("n")) o.order = std::stoi(f["n"]);
    if (f.count("alpha")) o.alpha = std::stod(f["alpha"]);
  } catch (const std::logic_error&) {
    throw Error("BadObservable", "cannot parse '" + spec + "'");
  }
  static const std::map<std::string, ObservableKind> kinds{
      {"occ", ObservableKind::Occupancy},       {"cum", ObservableKind::DimerCumulant},
      {"hmom", ObservableKind::HeightMoment},   {"hvar", ObservableKind::HeightVariance},
      {"ere", ObservableKind::ElectricRe},      {"eim", ObservableKind::ElectricIm},
      {"plaq", ObservableKind::PlaquetteDensity}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw Error("BadObservable", "unknown observable '" + kind + "'");
  o.kind = it->second;
  if (o.j < 1 || o.j > 2 || o.jp < 1 || o.jp > 2) throw Error("BadObservable", "j must be 1 or 2");
  if (o.kind == ObservableKind::HeightMoment && (o.order < 1 || o.order > 4))
    throw Error("BadObservable", "height moments of order 1..4");
  return o;
}

namespace {

// Per-sample primitive series shared between observables.
struct Recorder {
  const TorusLattice& lat;
  std::vector<Site> shifts;
  // Series index plus the bond indices visited by the translation average.
  struct BondSlot {
    int slot = -1;
    std::vector<int> a, b;
  };
  std::map<int, BondSlot> occ_slot;                              // j
  std::map<std::tuple<int, int, int, int>, BondSlot> pair_slot;  // (j, jp, d1, d2)
  struct PathSlots {
    std::vector<std::vector<std::pair<int, int>>> steps;  // per shift: (bond, sigma)
    int first = -1;  // series for powers 1..4
    std::map<double, int> electric;  // alpha -> series of re, im at +0, +1
  };
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, PathSlots> paths;
  int plaq_slot = -1;
  int n_series = 0;

  int new_series(int count = 1) {
    int s = n_series;
    n_series += count;
    return s;
  }

  int bond_at(Site s, int j) const { return lat.bond_index(lat.wrap(Bond{s, j})); }

  void record(const DimerChain& c, std::vector<std::vector<double>>& out) const {
    const auto& occ = c.occupied();
    const double inv = 1.0 / static_cast<double>(shifts.size());
    for (const auto& [j, bs] : occ_slot) {
      long n = 0;
      for (int b : bs.a) n += occ[b];
      out[bs.slot].push_back(n * inv);
    }
    for (const auto& [key, bs] : pair_slot) {
      long n = 0;
      for (std::size_t i = 0; i < bs.a.size(); ++i) n += occ[bs.a[i]] & occ[bs.b[i]];
      out[bs.slot].push_back(n * inv);
    }
    for (const auto& [key, ps] : paths) {
      double pw[4] = {0, 0, 0, 0};
      std::vector<std::pair<double, double>> el(ps.electric.size(), {0.0, 0.0});
      for (const auto& steps : ps.steps) {
        int q = 0;
        for (auto [b, sg] : steps) q += sg * (4 * occ[b] - 1);
        const double h = q / 4.0;
        pw[0] += h;
        pw[1] += h * h;
        pw[2] += h * h * h;
        pw[3] += h * h * h * h;
        int e = 0;
        for (const auto& [alpha, slot] : ps.electric) {
          el[e].first += std::cos(alpha * h);
          el[e].second += std::sin(alpha * h);
          ++e;
        }
      }
      if (ps.first >= 0)
        for (int k = 0; k < 4; ++k) out[ps.first + k].push_back(pw[k] * inv);
      int e = 0;
      for (const auto& [alpha, slot] : ps.electric) {
        out[slot].push_back(el[e].first * inv);
        out[slot + 1].push_back(el[e].second * inv);
        ++e;
      }
    }
    if (plaq_slot >= 0) out[plaq_slot].push_back(c.plaquettes() / static_cast<double>(lat.num_faces()));
  }
};

struct ChainOutput {
  std::vector<std::vector<double>> series;
  SweepStats stats;
};

}  // namespace

McmcResult run_mcmc(const ChainConfig& config, const std::vector<Observable>& obs) {
  validate(config);
  TorusLattice lat(config.L);
  Recorder rec{lat, {}, {}, {}, {}, -1, 0};
  for (int a2 = -config.L / 2 + 1; a2 <= config.L / 2; ++a2)
    for (int a1 = -config.L / 2 + 1; a1 <= config.L / 2; ++a1)
      if (config.m == 0.0 || a1 % 2 == 0) rec.shifts.push_back({a1, a2});

  auto path_slots = [&](Face xi, Face eta) -> Recorder::PathSlots& {
    auto key = std::make_pair(std::make_pair(xi.a1, xi.a2), std::make_pair(eta.a1, eta.a2));
    auto [it, fresh] = rec.paths.try_emplace(key);
    if (fresh) {
      if (std::max(std::abs(eta.a1 - xi.a1), std::abs(eta.a2 - xi.a2)) >= config.L / 2)
        throw Error("BadObservable", "path endpoints must be closer than L/2");
      auto moves = staircase_moves(xi, eta);
      for (Site s : rec.shifts) {
        DualPath p = path_from_moves({xi.a1 + s.x1, xi.a2 + s.x2}, moves);
        std::vector<std::pair<int, int>> steps;
        for (const auto& st : p.steps) steps.emplace_back(lat.bond_index(lat.wrap(st.bond)), st.sigma);
        it->second.steps.push_back(std::move(steps));
      }
    }
    return it->second;
  };
  auto occ_series = [&](int j) {
    auto [it, fresh] = rec.occ_slot.try_emplace(j);
    if (fresh) {
      it->second.slot = rec.new_series();
      for (Site s : rec.shifts) it->second.a.push_back(rec.bond_at(s, j));
    }
    return it->second.slot;
  };
  for (const auto& o : obs) {
    switch (o.kind) {
      case ObservableKind::Occupancy:
        occ_series(o.j);
        break;
      case ObservableKind::DimerCumulant: {
        occ_series(o.j);
        occ_series(o.jp);
        auto [it, fresh] = rec.pair_slot.try_emplace({o.j, o.jp, o.d1, o.d2});
        if (fresh) {
          it->second.slot = rec.new_series();
          for (Site s : rec.shifts) {
            it->second.a.push_back(rec.bond_at(s, o.j));
            it->second.b.push_back(rec.bond_at({s.x1 + o.d1, s.x2 + o.d2}, o.jp));
          }
        }
        break;
      }
      case ObservableKind::HeightMoment:
      case ObservableKind::HeightVariance: {
        auto& ps = path_slots(o.xi, o.eta);
        if (ps.first < 0) ps.first = rec.new_series(4);
        break;
      }
      case ObservableKind::ElectricRe:
      case ObservableKind::ElectricIm: {
        auto& ps = path_slots(o.xi, o.eta);
        auto [it, fresh] = ps.electric.try_emplace(o.alpha, 0);
        if (fresh) it->second = rec.new_series(2);
        break;
      }
      case ObservableKind::PlaquetteDensity:
        if (rec.plaq_slot < 0) rec.plaq_slot = rec.new_series();
        break;
    }
  }

  const long samples = (config.sweeps - config.burn_in) / config.thinning;
  std::vector<ChainOutput> outs(config.chains);
  parallel_for(config.chains, [&](std::size_t c) {
    DimerChain chain(lat, config.lambda, config.m, splitmix64(config.seed + c),
                     init_state(lat, config.sector));
    ChainOutput& out = outs[c];
    out.series.assign(rec.n_series, {});
    for (auto& s : out.series) s.reserve(samples);
    for (long t = 1; t <= config.sweeps; ++t) {
      SweepStats s = chain.sweep();
      if (t > config.burn_in) {
        out.stats.proposed += s.proposed;
        out.stats.flippable += s.flippable;
        out.stats.accepted += s.accepted;
        if ((t - config.burn_in) % config.thinning == 0) rec.record(chain, out.series);
      }
      if (config.check_interval > 0 && t % config.check_interval == 0) {
        Matching mm = chain.matching();
        if (!is_valid_matching(lat, mm)) throw Error("InvariantViolated", "invalid matching");
        if (!(winding(lat, chain.occupied()) == config.sector))
          throw Error("InvariantViolated", "winding sector changed");
      }
    }
  });

  McmcResult res;
  res.config = config;
  res.samples_per_chain = samples;
  SweepStats tot;
  for (const auto& o : outs) {
    tot.proposed += o.stats.proposed;
    tot.flippable += o.stats.flippable;
    tot.accepted += o.stats.accepted;
  }
  res.acceptance_rate = tot.proposed ? static_cast<double>(tot.accepted) / tot.proposed : 0.0;
  res.flippable_rate = tot.proposed ? static_cast<double>(tot.flippable) / tot.proposed : 0.0;

  auto pooled_mean = [&](int slot) {
    CompensatedSum s;
    long n = 0;
    for (const auto& o : outs) {
      for (double v : o.series[slot]) s.add(v);
      n += static_cast<long>(o.series[slot].size());
    }
    return n ? s.value() / n : 0.0;
  };
  // Linearised (delta-method) series y = f(x_t) for each chain, then blocking
  // per chain; chains are merged with equal weights.
  auto estimate = [&](const std::string& name,
                      const std::function<double(const ChainOutput&, long)>& y) {
    EstimateWithError e;
    e.name = name;
    double var = 0.0, tau = 0.0;
    for (const auto& o : outs) {
      std::vector<double> s(samples);
      for (long t = 0; t < samples; ++t) s[t] = y(o, t);
      BlockingResult b = blocking_analysis(s);
      e.mean += b.mean / config.chains;
      var += b.stderr_ * b.stderr_;
      tau += b.tau_int / config.chains;
      e.resolved = e.resolved && b.resolved;
      e.n_samples += b.n;
    }
    e.stderr_ = std::sqrt(var) / config.chains;
    e.tau_int = tau;
    return e;
  };

  for (const auto& o : obs) {
    switch (o.kind) {
      case ObservableKind::Occupancy: {
        int s = rec.occ_slot.at(o.j).slot;
        res.observables.push_back(estimate(o.name, [s](const ChainOutput& c, long t) { return c.series[s][t]; }));
        break;
      }
      case ObservableKind::DimerCumulant: {
        int sa = rec.occ_slot.at(o.j).slot, sb = rec.occ_slot.at(o.jp).slot;
        int sp = rec.pair_slot.at({o.j, o.jp, o.d1, o.d2}).slot;
        double ma = pooled_mean(sa), mb = pooled_mean(sb);
        res.observables.push_back(estimate(o.name, [=](const ChainOutput& c, long t) {
          return c.series[sp][t] - mb * c.series[sa][t] - ma * c.series[sb][t] + ma * mb;
        }));
        break;
      }
      case ObservableKind::HeightMoment: {
        int s = path_slots(o.xi, o.eta).first + o.order - 1;
        res.observables.push_back(estimate(o.name, [s](const ChainOutput& c, long t) { return c.series[s][t]; }));
        break;
      }
      case ObservableKind::HeightVariance: {
        int s = path_slots(o.xi, o.eta).first;
        double m1 = pooled_mean(s);
        res.observables.push_back(estimate(o.name, [=](const ChainOutput& c, long t) {
          return c.series[s + 1][t] - 2.0 * m1 * c.series[s][t] + m1 * m1;
        }));
        break;
      }
      case ObservableKind::ElectricRe:
      case ObservableKind::ElectricIm: {
        int s = path_slots(o.xi, o.eta).electric.at(o.alpha) +
                (o.kind == ObservableKind::ElectricIm ? 1 : 0);
        res.observables.push_back(estimate(o.name, [s](const ChainOutput& c, long t) { return c.series[s][t]; }));
        break;
      }
      case ObservableKind::PlaquetteDensity: {
        int s = rec.plaq_slot;
        res.observables.push_back(estimate(o.name, [s](const ChainOutput& c, long t) { return c.series[s][t]; }));
        break;
      }
    }
  }
  return res;
}

}  // namespace dimerlab
