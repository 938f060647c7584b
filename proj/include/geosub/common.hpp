#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace geosub {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexList = std::vector<Index>;

/// Thrown when a solver declines to run (enumeration budget, infeasible instance).
/// The CLI maps this to exit code 2.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ceiling of a count expression such as (delta + gamma) * n.
/// Absorbs floating-point noise so that 1.5 * 0.15 * 200 yields 45, not 46.
inline Index ceil_count(double x) {
  const double guard = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<Index>(std::ceil(x - guard));
}

/// Counters for data access. Sampled evaluations add to points_touched,
/// full scans add n to points_touched and one to full_passes.
struct AccessLog {
  std::uint64_t points_touched = 0;
  std::uint64_t full_passes = 0;

  void sampled(Index m) { points_touched += static_cast<std::uint64_t>(m); }
  void pass(Index n) {
    points_touched += static_cast<std::uint64_t>(n);
    ++full_passes;
  }
  void merge(const AccessLog& other) {
    points_touched += other.points_touched;
    full_passes += other.full_passes;
  }
};

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace geosub
