#include "geosub/rng.hpp"

#include <cmath>
#include <numbers>

namespace geosub {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(seed) ^ splitmix64(stream_id ^ 0x5851f42d4c957f2dULL)) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Index RngStream::index(Index n) {
  if (n <= 0) throw std::invalid_argument("RngStream::index: n must be positive");
  const auto range = static_cast<std::uint64_t>(n);
  // Rejection sampling on the top of the 64-bit range keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<Index>(x % range);
}

double RngStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(seed_, splitmix64(stream_id_ + 0x632be59bd9b4e019ULL) ^ splitmix64(id));
}

Vector random_direction(Index d, RngStream& rng) {
  Vector v(d);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (Index j = 0; j < d; ++j) v(j) = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

Vector random_in_ball(Index d, double radius, RngStream& rng) {
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return r * random_direction(d, rng);
}

}  // namespace geosub
