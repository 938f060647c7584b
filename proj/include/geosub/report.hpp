#pragma once

#include "geosub/common.hpp"

#include <map>
#include <optional>

namespace geosub {

/// Run record shared by all solvers. Serialization lives in report_json.hpp.
struct SolveReport {
  std::string algorithm;
  std::map<std::string, double> params;
  std::map<std::string, std::int64_t> counts;  // sample sizes, rounds, repetitions, candidates
  AccessLog log;         // the algorithm's own data access
  AccessLog verify_log;  // optional verification scans, outside the complexity accounting
  std::optional<Index> coverage;
  std::vector<std::string> flags;
  double wall_ms = 0.0;

  void flag(const std::string& f) {
    for (const auto& g : flags)
      if (g == f) return;
    flags.push_back(f);
  }
};

}  // namespace geosub
