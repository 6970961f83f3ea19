#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dimerlab {

// One-shot pipelines behind `dimerlab reproduce` and the acceptance binary.
struct ReproduceOptions {
  std::uint64_t seed = 1;
  // Overrides; <= 0 keeps each pipeline's default.
  long sweeps = 0;
  int L = 0;
  double lambda = -1.0;  // < 0 keeps the default
  int r_max = 0;
  bool verbose = false;
};

struct Metric {
  std::string key;
  double value = 0.0;
};

struct CriterionReport {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  std::vector<Metric> metrics;
  // Optional data table (e.g. the series behind a fit).
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  double seconds = 0.0;
};

struct CriterionInfo {
  int id;
  const char* name;
  const char* title;
};
const std::vector<CriterionInfo>& criteria();

// By name ("variance", "kappa", ...) or number ("6").
CriterionReport reproduce(const std::string& which, const ReproduceOptions& opts = {});

}  // namespace dimerlab
