#pragma once

#include "geosub/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEO_SUBLINEAR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

/// Runs f(0..count-1) on a thread pool; results keep trial order.
template <class R, class F>
std::vector<R> trials(int count, F f) {
  std::vector<R> out(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) out[static_cast<std::size_t>(i)] = f(i);
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

inline int count_true(const std::vector<char>& v) {
  return static_cast<int>(std::count(v.begin(), v.end(), char{1}));
}

std::string fmt(double x, int precision = 4);

}  // namespace acceptance
