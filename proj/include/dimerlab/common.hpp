#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimerlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr const char* kVersion = "0.3.0";

// All library failures carry a short machine-readable code, e.g. "OddSide".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& what) : Error("SingularMatrix", what) {}
};

// Worker count: DIMERLAB_THREADS if set, otherwise hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers write
// into per-index slots and reduce afterwards in index order, which keeps
// results independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return static_cast<double>(sum_ + comp_); }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

inline int parity_sign(long long n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace dimerlab
