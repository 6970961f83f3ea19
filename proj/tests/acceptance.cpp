// Runs every acceptance criterion at full parameters and prints one
// [PASS]/[FAIL] line per criterion. `--only 1,6,kappa` restricts the set,
// `--verbose` prints progress and metrics to stderr.
#include <cstdio>
#include <cstring>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "dimerlab/common.hpp"
#include "dimerlab/reproduce.hpp"

using namespace dimerlab;

int main(int argc, char** argv) {
  std::set<std::string> only;
  ReproduceOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');) only.insert(item);
    } else if (!std::strcmp(argv[i], "--verbose")) {
      opts.verbose = true;
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only ids] [--seed n] [--verbose]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && !only.count(c.name) && !only.count(std::to_string(c.id))) continue;
    ++ran;
    CriterionReport r;
    try {
      r = reproduce(c.name, opts);
    } catch (const std::exception& e) {
      r.pass = false;
      r.summary = std::string("error: ") + e.what();
    }
    if (!r.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", c.id, c.title, r.summary.c_str(),
                r.seconds);
    for (const auto& m : r.metrics) std::printf("       %s = %.10g\n", m.key.c_str(), m.value);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
