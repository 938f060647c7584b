#pragma once

#include "geosub/common.hpp"

#include <cstdint>
#include <random>

namespace geosub {

/// Seeded random stream. The engine is mt19937_64 and all derived draws
/// (bounded integers, uniforms) are computed here rather than through
/// <random> distributions, whose output is implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  Index index(Index n);
  /// Standard normal deviate (Box-Muller).
  double normal();
  /// Independent stream derived from this one's seed and a child id.
  RngStream child(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Random unit vector in R^d.
Vector random_direction(Index d, RngStream& rng);
/// Uniform point in the ball of given radius centered at the origin.
Vector random_in_ball(Index d, double radius, RngStream& rng);

}  // namespace geosub
