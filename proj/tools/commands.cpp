#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

#include "cli.hpp"
#include "dimerlab/analysis.hpp"
#include "dimerlab/enumerate.hpp"
#include "dimerlab/freecorr.hpp"
#include "dimerlab/height.hpp"
#include "dimerlab/kasteleyn.hpp"
#include "dimerlab/mcmc.hpp"
#include "dimerlab/multiscale.hpp"
#include "dimerlab/perturbation.hpp"
#include "dimerlab/reproduce.hpp"

namespace dimerlab::cli {

namespace {

std::string fmt(double v) { return format_number(v); }

std::string json_doc(const Json& j) { return j.dump(2) + "\n"; }

// Output format from the "format" key, else from the file extension.
std::string output_format(const Config& c, const std::string& fallback) {
  if (c.has("format") && !c.get("format").empty()) return c.get("format");
  const std::string& out = c.get("out");
  const auto dot = out.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = out.substr(dot + 1);
    if (ext == "csv" || ext == "json") return ext;
  }
  return fallback;
}

Json fit_json(const FitResult& f) {
  Json j;
  j["kind"] = f.kind;
  j["estimate"] = f.estimate;
  j["estimate_err"] = f.estimate_err;
  j["intercept"] = f.intercept;
  j["slope"] = f.slope;
  j["covariance"] = {{f.covariance[0][0], f.covariance[0][1]}, {f.covariance[1][0], f.covariance[1][1]}};
  j["r_min"] = f.r_min;
  j["r_max"] = f.r_max;
  j["points"] = f.points;
  j["dof"] = f.dof;
  j["r2"] = f.r2;
  j["chi2_dof"] = f.chi2_dof;
  return j;
}

Json report_json(const CriterionReport& r) {
  Json j;
  j["id"] = r.id;
  j["name"] = r.name;
  for (const auto& c : criteria())
    if (c.id == r.id) j["title"] = c.title;
  j["pass"] = r.pass;
  j["summary"] = r.summary;
  Json m = Json::object();
  for (const auto& x : r.metrics) m[x.key] = std::isfinite(x.value) ? Json(x.value) : Json(fmt(x.value));
  j["metrics"] = m;
  j["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(std::isfinite(v) ? Json(v) : Json(fmt(v)));
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j;
}

// "x1,x2,j;x1,x2,j"
std::vector<Bond> parse_bonds(const std::vector<std::string>& items) {
  std::vector<Bond> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::vector<int> v;
    try {
      for (std::string t; std::getline(ss, t, ',');) v.push_back(std::stoi(t));
    } catch (const std::logic_error&) {
      throw Error("InvalidConfig", "bad bond '" + item + "'");
    }
    if (v.size() != 3 || (v[2] != 1 && v[2] != 2)) throw Error("InvalidConfig", "bond must be x1,x2,j with j in {1,2}: '" + item + "'");
    out.push_back({{v[0], v[1]}, v[2]});
  }
  if (out.empty()) throw Error("InvalidConfig", "no bonds given");
  return out;
}

// ---- selftest --------------------------------------------------------------

int run_selftest(const Config& c) {
  ReproduceOptions o;
  o.seed = c.seed();
  struct Check {
    const char* label;
    const char* criterion;
    int L;
  };
  const Check checks[] = {{"pfaffian-vs-enumeration", "kasteleyn", 0},
                          {"propagator-vs-dense-inverse", "propagator", 0},
                          {"wick-vs-enumeration (L=4)", "wick", 4},
                          {"first-order-vs-finite-difference", "perturbation", 0}};
  int failed = 0;
  for (const auto& ch : checks) {
    ReproduceOptions oo = o;
    oo.L = ch.L;
    const CriterionReport r = reproduce(ch.criterion, oo);
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << ch.label << ": " << r.summary << "\n";
    failed += r.pass ? 0 : 1;
  }
  std::cout.flush();
  if (failed) throw Error("OracleMismatch", std::to_string(failed) + " self-test check(s) failed");
  return 0;
}

// ---- exact-z ---------------------------------------------------------------

int run_exact_z(const Config& c) {
  const int L = static_cast<int>(c.integer("L"));
  const double m = c.number("m"), lambda = c.number("lambda");
  const std::string mode = c.get("enumerate");
  const TorusLattice lat(L);
  Json j;
  j["meta"] = meta(c);
  j["L"] = L;
  j["m"] = m;
  j["lambda"] = lambda;
  if (lambda == 0.0) {
    const FreePartition z = partition_sectors(lat, m);
    j["z_pfaffian"] = z.z;
    Json sectors = Json::array();
    for (int s = 0; s < 4; ++s) {
      Json e;
      e["theta"] = kFlavors[s].theta;
      e["tau"] = kFlavors[s].tau;
      e["coefficient"] = kFlavorCoefficients[s];
      e["pf_re"] = z.sectors[s].value.real();
      e["pf_im"] = z.sectors[s].value.imag();
      e["singular"] = z.sectors[s].singular;
      sectors.push_back(e);
    }
    j["sectors"] = sectors;
  }
  const bool enumerate = mode == "yes" || (mode == "auto" && L <= 6);
  if (!enumerate && lambda != 0.0) throw Error("NotExact", "lambda != 0 needs enumeration (L <= 6 or enumerate = yes)");
  if (enumerate) {
    Ensemble e;
    e.lambda = lambda;
    e.m = m;
    const ExactExpectations x = exact_expectations(lat, e, {});
    j["z_enumeration"] = x.z;
    j["matchings"] = x.count;
  }
  write_output(c.get("out"), json_doc(j));
  return 0;
}

// ---- propagator ------------------------------------------------------------

int run_propagator(const Config& c) {
  const double m = c.number("m");
  const int range = static_cast<int>(c.integer("range"));
  const int L = static_cast<int>(c.integer("L"));
  const std::string kind = c.get("kind");
  if (range < 1) throw Error("InvalidConfig", "range must be >= 1");
  CsvTable t;
  t.columns = {"dx", "dy", "re", "im", "component"};
  auto add = [&](int dx, int dy, cplx v, const std::string& comp) {
    t.add({std::to_string(dx), std::to_string(dy), fmt(v.real()), fmt(v.imag()), comp});
  };
  if (kind == "majorana") {
    const MajoranaPropagator g(m, range, GevreyCutoff(c.number("eps")));
    for (int dx = -range; dx <= range; ++dx)
      for (int dy = -range; dy <= range; ++dy) {
        const Mat2 v = g(dx, dy);
        add(dx, dy, v.pp, "pp");
        add(dx, dy, v.pm, "pm");
        add(dx, dy, v.mp, "mp");
        add(dx, dy, v.mm, "mm");
      }
  } else if (kind == "lattice") {
    // g depends on x - y and the parity of y1.
    if (L == 0) {
      const InfinitePropagator g(m, range);
      for (int dx = -range; dx <= range; ++dx)
        for (int dy = -range; dy <= range; ++dy) {
          add(dx, dy, g.displacement(dx, dy, 1), "y1_even");
          add(dx, dy, g.displacement(dx, dy, -1), "y1_odd");
        }
    } else {
      const TorusLattice lat(L);
      const Flavor f{static_cast<int>(c.integer("theta")), static_cast<int>(c.integer("tau"))};
      const FinitePropagator g(lat, m, f, c.flag("zero-mode"));
      const int r = std::min(range, L / 2);
      for (int dx = -r; dx <= r; ++dx)
        for (int dy = -r; dy <= r; ++dy) {
          add(dx, dy, g.at({dx, dy}, {0, 0}), "y1_even");
          add(dx, dy, g.at({dx + 1, dy}, {1, 0}), "y1_odd");
        }
    }
  } else {
    throw Error("InvalidConfig", "kind must be lattice or majorana");
  }
  write_output(c.get("out"), csv_document(c, t));
  return 0;
}

// ---- dimer-corr ------------------------------------------------------------

int run_dimer_corr(const Config& c) {
  const double m = c.number("m");
  const int R = static_cast<int>(c.integer("max-r"));
  if (R < 1) throw Error("InvalidConfig", "max-r must be >= 1");
  const InfiniteCorrelator corr(std::make_shared<InfinitePropagator>(m, R + 2));
  CsvTable t;
  t.columns = {"dx", "dy", "j", "jprime", "exact", "asymptotic", "residual"};
  for (int dx = 0; dx <= R; ++dx)
    for (int dy = 0; dy <= R; ++dy) {
      if (dx == 0 && dy == 0) continue;
      for (int j : {1, 2})
        for (int jp : {1, 2}) {
          const double exact = corr.cumulant({Bond{{dx, dy}, j}, Bond{{0, 0}, jp}});
          const double lead = two_point_asymptotic(dx, dy, j, jp);
          t.add({std::to_string(dx), std::to_string(dy), std::to_string(j), std::to_string(jp), fmt(exact), fmt(lead),
                 fmt(exact - lead)});
        }
    }
  write_output(c.get("out"), csv_document(c, t));
  return 0;
}

// ---- height-cumulants ------------------------------------------------------

CumulantRoute parse_route(const std::string& s, int n) {
  if (s == "auto") return n == 2 ? CumulantRoute::PathSum : CumulantRoute::LoopTrace;
  if (s == "path-sum") return CumulantRoute::PathSum;
  if (s == "loop-trace") return CumulantRoute::LoopTrace;
  if (s == "single-path") return CumulantRoute::SinglePath;
  if (s == "repeated-path") return CumulantRoute::RepeatedPath;
  throw Error("InvalidConfig", "route must be auto, path-sum, loop-trace, single-path or repeated-path");
}

int run_height_cumulants(const Config& c) {
  const int n = static_cast<int>(c.integer("n"));
  const int rmin = static_cast<int>(c.integer("rmin")), rmax = static_cast<int>(c.integer("rmax"));
  const int step = static_cast<int>(c.integer("step")), offset = static_cast<int>(c.integer("offset"));
  if (n < 1 || n > 4) throw Error("InvalidConfig", "n must be in 1..4");
  if (rmin < 1 || rmax < rmin || step < 1) throw Error("InvalidConfig", "need 1 <= rmin <= rmax and step >= 1");
  const CumulantRoute route = parse_route(c.get("route"), n);
  const InfiniteCorrelator corr(std::make_shared<InfinitePropagator>(c.number("m"), rmax + std::abs(offset) + 8));
  CsvTable t;
  t.columns = {"r", "value", "fit_slope_running"};
  Series s;
  for (int r = rmin; r <= rmax; r += step) {
    const double v = exact_height_cumulant(n, {0, 0}, {r, offset}, corr, route);
    s.r.push_back(r);
    s.v.push_back(v);
    // Slope against ln r over the points so far (needs four).
    const double slope = s.r.size() >= 4 ? fit_log_slope(s).slope : NAN;
    t.add({std::to_string(r), fmt(v), fmt(slope)});
  }
  write_output(c.get("out"), csv_document(c, t));
  return 0;
}

// ---- enumerate -------------------------------------------------------------

int run_enumerate(const Config& c) {
  const int L = static_cast<int>(c.integer("L"));
  if (L != 4 && L != 6) throw Error("InvalidConfig", "enumeration supports L = 4 or 6");
  const TorusLattice lat(L);
  Ensemble e;
  e.lambda = c.number("lambda");
  e.m = c.number("m");
  const std::string sector = c.get("sector");
  if (sector == "zero") e.filter = [&lat](const Matching& mt) { return winding(lat, mt) == WindingPeriods{}; };
  else if (sector != "all") throw Error("InvalidConfig", "sector must be all or zero");

  // Each observable is reduced to primitive expectations, then combined.
  std::vector<MatchingObservable> prims;
  auto prim = [&](MatchingObservable f) {
    prims.push_back(std::move(f));
    return prims.size() - 1;
  };
  struct Plan {
    Observable o;
    std::vector<std::size_t> idx;
  };
  std::vector<Plan> plans;
  for (const auto& spec : c.list("obs")) {
    Plan p{parse_observable(spec), {}};
    const Observable& o = p.o;
    const int b0 = lat.bond_index(lat.wrap(Bond{{0, 0}, o.j}));
    const DualPath path = path_from_moves(o.xi, staircase_moves(o.xi, o.eta));
    auto dh = [&lat, path](const Matching& mt) { return height_difference(lat, mt, path); };
    switch (o.kind) {
      case ObservableKind::Occupancy:
        p.idx = {prim([b0](const Matching& mt) { return cplx(mt.occupied[b0]); })};
        break;
      case ObservableKind::DimerCumulant: {
        const int b1 = lat.bond_index(lat.wrap(Bond{{o.d1, o.d2}, o.jp}));
        p.idx = {prim([b0, b1](const Matching& mt) { return cplx(mt.occupied[b0] * mt.occupied[b1]); }),
                 prim([b0](const Matching& mt) { return cplx(mt.occupied[b0]); }),
                 prim([b1](const Matching& mt) { return cplx(mt.occupied[b1]); })};
        break;
      }
      case ObservableKind::HeightMoment: {
        const int n = o.order;
        p.idx = {prim([dh, n](const Matching& mt) { return cplx(std::pow(dh(mt), n)); })};
        break;
      }
      case ObservableKind::HeightVariance:
        p.idx = {prim([dh](const Matching& mt) { return cplx(dh(mt) * dh(mt)); }),
                 prim([dh](const Matching& mt) { return cplx(dh(mt)); })};
        break;
      case ObservableKind::ElectricRe:
      case ObservableKind::ElectricIm: {
        const double a = o.alpha;
        p.idx = {prim([dh, a](const Matching& mt) { return std::polar(1.0, a * dh(mt)); })};
        break;
      }
      case ObservableKind::PlaquetteDensity:
        p.idx = {prim([&lat](const Matching& mt) {
          return cplx(plaquette_count(lat, mt.occupied) / double(lat.num_faces()));
        })};
        break;
    }
    plans.push_back(std::move(p));
  }
  const ExactExpectations x = exact_expectations(lat, e, prims);
  Json j;
  j["meta"] = meta(c);
  j["L"] = L;
  j["lambda"] = e.lambda;
  j["m"] = e.m;
  j["sector"] = sector;
  j["z"] = x.z;
  j["matchings"] = x.count;
  Json obs = Json::array();
  for (const auto& p : plans) {
    auto v = [&](int k) { return x.values[p.idx[k]]; };
    double value = 0.0;
    switch (p.o.kind) {
      case ObservableKind::DimerCumulant: value = (v(0) - v(1) * v(2)).real(); break;
      case ObservableKind::HeightVariance: value = (v(0) - v(1) * v(1)).real(); break;
      case ObservableKind::ElectricIm: value = v(0).imag(); break;
      default: value = v(0).real(); break;
    }
    Json r;
    r["name"] = p.o.name;
    r["value"] = value;
    obs.push_back(r);
  }
  j["observables"] = obs;
  write_output(c.get("out"), json_doc(j));
  return 0;
}

// ---- mcmc ------------------------------------------------------------------

int run_mcmc_cmd(const Config& c) {
  ChainConfig cc;
  cc.L = static_cast<int>(c.integer("L"));
  cc.lambda = c.number("lambda");
  cc.m = c.number("m");
  cc.seed = c.seed();
  cc.sweeps = c.integer("sweeps");
  cc.burn_in = c.integer("burnin");
  cc.thinning = static_cast<int>(c.integer("thinning"));
  cc.chains = static_cast<int>(c.integer("chains"));
  cc.check_interval = c.integer("check-interval");
  validate(cc);
  std::vector<Observable> obs;
  for (const auto& s : c.list("obs")) obs.push_back(parse_observable(s));
  if (obs.empty()) throw Error("InvalidConfig", "no observables");
  const McmcResult r = run_mcmc(cc, obs);
  if (output_format(c, "json") == "csv") {
    CsvTable t;
    t.columns = {"name", "mean", "stderr", "tau_int", "n", "resolved"};
    for (const auto& e : r.observables)
      t.add({"\"" + e.name + "\"", fmt(e.mean), fmt(e.stderr_), fmt(e.tau_int), std::to_string(e.n_samples),
             e.resolved ? "1" : "0"});
    write_output(c.get("out"), csv_document(c, t));
    return 0;
  }
  Json j;
  j["meta"] = meta(c);
  Json conf;
  conf["L"] = cc.L;
  conf["lambda"] = cc.lambda;
  conf["m"] = cc.m;
  conf["seed"] = cc.seed;
  conf["sweeps"] = cc.sweeps;
  conf["burnin"] = cc.burn_in;
  conf["thinning"] = cc.thinning;
  conf["chains"] = cc.chains;
  j["config"] = conf;
  Json arr = Json::array();
  for (const auto& e : r.observables) {
    Json o;
    o["name"] = e.name;
    o["mean"] = e.mean;
    o["stderr"] = e.stderr_;
    o["tau_int"] = e.tau_int;
    o["n"] = e.n_samples;
    o["resolved"] = e.resolved;
    arr.push_back(o);
  }
  j["observables"] = arr;
  j["acceptance_rate"] = r.acceptance_rate;
  j["flippable_rate"] = r.flippable_rate;
  write_output(c.get("out"), json_doc(j));
  return 0;
}

// ---- perturb ---------------------------------------------------------------

int run_perturb(const Config& c) {
  const std::vector<Bond> bonds = parse_bonds(c.list("bonds"));
  const double m = c.number("m");
  const std::string Ls = c.get("L");
  FirstOrderResult r;
  int R = static_cast<int>(c.integer("R"));
  Json j;
  j["meta"] = meta(c);
  if (Ls == "inf") {
    if (R <= 0) R = 16;
    int extent = 0;
    for (const auto& b : bonds) extent = std::max({extent, std::abs(b.x.x1), std::abs(b.x.x2)});
    const InfiniteCorrelator corr(std::make_shared<InfinitePropagator>(m, 2 * (R + extent) + 4));
    r = first_order_cumulant(bonds, corr, R, nullptr, c.number("tol"));
    j["L"] = "inf";
  } else {
    const Config probe{c.command, {{"L", Ls}}};
    const int L = static_cast<int>(probe.integer("L"));
    const TorusLattice lat(L);
    if (R <= 0) R = L / 2;
    const FourFlavorCorrelator corr(lat, m);
    r = first_order_cumulant(bonds, corr, R, &lat, c.number("tol"));
    j["L"] = L;
  }
  j["R"] = R;
  j["value"] = r.value;
  j["tail_estimate"] = r.tail_estimate;
  j["plaquettes"] = r.plaquettes;
  j["flagged"] = r.flagged;
  write_output(c.get("out"), json_doc(j));
  return 0;
}

// ---- multiscale ------------------------------------------------------------

int run_multiscale(const Config& c) {
  const double m = c.number("m");
  const GevreyCutoff cut(c.number("eps"));
  const int hstar = deepest_scale(m);
  const int hmin = std::max(static_cast<int>(c.integer("hmin")), hstar + 1);
  const int factor = static_cast<int>(c.integer("xmax"));
  const int grid = static_cast<int>(c.integer("grid"));
  if (hmin > 0) throw Error("InvalidConfig", "hmin must be <= 0");
  CsvTable t;
  t.columns = {"h", "sup_norm", "sup_derivative", "sup_offdiagonal", "log2_ratio", "decay_c", "decay_C", "r2",
               "residual", "points"};
  double prev = NAN;
  for (int h = 0; h >= hmin; --h) {
    const ScaleRay ray = single_scale_ray(h, m, cut, factor << (-h), grid);
    const double s = sup_norm(ray.values);
    const DecayFit f = verify_decay(h, ray);
    t.add({std::to_string(h), fmt(s), fmt(sup_norm(ray_derivative(ray))), fmt(sup_offdiagonal(ray.values)),
           fmt(h <= -2 ? std::log2(prev / s) : NAN), fmt(f.c), fmt(f.C), fmt(f.r2), fmt(f.residual),
           std::to_string(f.points)});
    prev = s;
  }
  write_output(c.get("out"), csv_document(c, t));
  return 0;
}

// ---- fit -------------------------------------------------------------------

int run_fit(const Config& c) {
  const CsvData d = read_csv(c.get("in"));
  const int ir = std::max(0, d.column({"r"}));
  int iv = d.column({"v", "value", "variance", "mean", "abs_electric"});
  if (iv < 0) iv = 1;
  const int ie = d.column({"err", "stderr"});
  if (static_cast<int>(d.columns.size()) <= std::max(ir, iv)) throw Error("InvalidInput", "need r and value columns");
  Series s;
  for (const auto& row : d.rows) {
    s.r.push_back(row[ir]);
    s.v.push_back(row[iv]);
    if (ie >= 0) s.err.push_back(row[ie]);
  }
  const double lo = c.number("rmin"), hi = c.number("rmax");
  s = restrict_window(s, lo, hi > 0 ? hi : INFINITY);
  const std::string kind = c.get("kind");
  FitResult f;
  if (kind == "slope") f = fit_log_slope(s);
  else if (kind == "power") f = fit_power_exponent(s);
  else if (kind == "electric") f = electric_exponent(s, c.number("alpha"));
  else throw Error("InvalidConfig", "kind must be slope, power or electric");
  Json j;
  j["meta"] = meta(c);
  j["fit"] = fit_json(f);
  write_output(c.get("out"), json_doc(j));
  return 0;
}

// ---- reproduce -------------------------------------------------------------

int run_reproduce(const Config& c) {
  ReproduceOptions o;
  o.seed = c.seed();
  o.sweeps = c.integer("sweeps");
  o.L = static_cast<int>(c.integer("L"));
  o.lambda = c.number("lambda");
  o.r_max = static_cast<int>(c.integer("rmax"));
  o.verbose = c.flag("verbose");
  std::vector<std::string> which;
  const std::string w = c.get("criterion");
  if (w.empty()) throw Error("InvalidConfig", "name a criterion (1..12, its name, or all)");
  if (w == "all")
    for (const auto& ci : criteria()) which.push_back(ci.name);
  else
    which.push_back(w);
  Json reports = Json::array();
  std::vector<CriterionReport> done;
  for (const auto& name : which) {
    CriterionReport r = reproduce(name, o);
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.summary << " ("
              << r.seconds << " s)\n";
    reports.push_back(report_json(r));
    done.push_back(std::move(r));
  }
  Json j;
  j["meta"] = meta(c);
  j["criteria"] = reports;
  write_output(c.get("out"), json_doc(j));
  const std::string& table = c.get("table");
  if (!table.empty()) {
    if (done.size() != 1) throw Error("InvalidConfig", "table output needs a single criterion");
    CsvTable t;
    t.columns = done[0].columns;
    for (const auto& row : done[0].rows) {
      std::vector<std::string> cells;
      for (double v : row) cells.push_back(fmt(v));
      t.add(cells);
    }
    write_output(table, csv_document(c, t));
  }
  return 0;
}

// ---- plot ------------------------------------------------------------------

int run_plot(const Config& c) {
  const CsvData d = read_csv(c.get("in"));
  write_output(c.get("out"), plot_svg(c, d, c.get("kind")));
  return 0;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds{
      {"selftest", "oracle suite: Pfaffian, propagator, Wick and first order against independent routes",
       {{"seed", "1", "seed"}}, run_selftest},
      {"exact-z", "partition function from the four Pfaffians and, for small L, enumeration",
       {{"L", "4", "even torus side"},
        {"m", "0", "mass"},
        {"lambda", "0", "plaquette coupling (needs enumeration)"},
        {"enumerate", "auto", "auto (L <= 6), yes or no"},
        {"out", "-", "JSON output"}},
       run_exact_z},
      {"propagator", "propagator table as (dx, dy, re, im, component)",
       {{"m", "0", "mass"},
        {"range", "8", "max |dx|, |dy|"},
        {"L", "0", "torus side; 0 for infinite volume"},
        {"theta", "1", "flavor theta (finite L)"},
        {"tau", "1", "flavor tau (finite L)"},
        {"zero-mode", "false", "allow the singular (00) flavor at m = 0", false, false, true},
        {"kind", "lattice", "lattice (g) or majorana (G)"},
        {"eps", "0.4", "cutoff width (majorana)"},
        {"out", "-", "CSV output"}},
       run_propagator},
      {"dimer-corr", "infinite-volume two-point dimer cumulants against the leading asymptotics",
       {{"m", "0", "mass"}, {"max-r", "16", "max displacement per axis"}, {"out", "-", "CSV output"}},
       run_dimer_corr},
      {"height-cumulants", "exact lambda = 0 height cumulants along (r, offset)",
       {{"n", "2", "order 1..4"},
        {"rmin", "2", "first r"},
        {"rmax", "32", "last r"},
        {"step", "1", "r step"},
        {"offset", "0", "second coordinate of eta"},
        {"route", "auto", "auto, path-sum, loop-trace, single-path or repeated-path"},
        {"m", "0", "mass"},
        {"out", "-", "CSV output"}},
       run_height_cumulants},
      {"enumerate", "exact interacting expectations by enumerating all matchings",
       {{"L", "4", "4 or 6"},
        {"lambda", "0", "plaquette coupling"},
        {"m", "0", "mass"},
        {"obs", "occ:j=1", "observable spec (repeatable)", false, true},
        {"sector", "all", "all or zero (winding (0,0) only)"},
        {"out", "-", "JSON output"}},
       run_enumerate},
      {"mcmc", "plaquette-flip Metropolis estimates with blocking errors",
       {{"L", "16", "even torus side"},
        {"lambda", "0", "plaquette coupling"},
        {"m", "0", "mass"},
        {"sweeps", "10000", "recorded sweeps per chain"},
        {"burnin", "1000", "discarded sweeps"},
        {"thinning", "1", "record every n-th sweep"},
        {"chains", "1", "independent chains"},
        {"check-interval", "0", "validate the state every n sweeps (0: never)"},
        {"seed", "1", "seed"},
        {"obs", "occ:j=1", "observable spec (repeatable)", false, true},
        {"format", "", "json or csv (default from the out extension, else json)"},
        {"out", "-", "output"}},
       run_mcmc_cmd},
      {"perturb", "first-order coefficient of a bond cumulant in alpha = e^lambda - 1",
       {{"L", "inf", "torus side or inf"},
        {"bonds", "0,0,1", "bonds x1,x2,j (repeatable or ';'-separated)", false, true},
        {"R", "0", "plaquette window (0: L/2, or 16 in infinite volume)"},
        {"m", "0", "mass"},
        {"tol", "1e-6", "tail tolerance (infinite volume)"},
        {"out", "-", "JSON output"}},
       run_perturb},
      {"multiscale", "single-scale amplitudes and stretched-exponential decay fits",
       {{"m", "0", "mass"},
        {"hmin", "-8", "lowest scale"},
        {"eps", "0.4", "cutoff width"},
        {"xmax", "200", "ray length in units of 2^-h"},
        {"grid", "512", "momentum grid per axis"},
        {"out", "-", "CSV output"}},
       run_multiscale},
      {"fit", "slope, power or electric fit of a CSV series (columns r, value[, err])",
       {{"kind", "slope", "slope, power or electric"},
        {"in", "", "input CSV"},
        {"alpha", "0.7853981633974483", "alpha for electric fits"},
        {"rmin", "0", "window start"},
        {"rmax", "0", "window end (0: none)"},
        {"out", "-", "JSON output"}},
       run_fit},
      {"reproduce", "run an acceptance pipeline by number or name (or all)",
       {{"criterion", "", "1..12, name, or all", true},
        {"seed", "1", "seed"},
        {"sweeps", "0", "override sweeps (0: default)"},
        {"L", "0", "override L (windows end at L/4)"},
        {"lambda", "-1", "override lambda (< 0: default)"},
        {"rmax", "0", "override the fit window end"},
        {"verbose", "false", "progress on stderr", false, false, true},
        {"table", "", "CSV of the data table"},
        {"out", "-", "JSON report"}},
       run_reproduce},
      {"plot", "SVG plot of a CSV produced by the other commands",
       {{"in", "", "input CSV"}, {"kind", "variance", "variance, decay or scales"}, {"out", "-", "SVG output"}},
       run_plot},
  };
  return cmds;
}

}  // namespace dimerlab::cli
