#include "geosub/report_json.hpp"

namespace geosub {

nlohmann::json to_json(const AccessLog& log) {
  return {{"points_touched", log.points_touched}, {"full_passes", log.full_passes}};
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json j;
  j["algorithm"] = report.algorithm;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : report.params) {
    if (std::isfinite(v))
      params[k] = v;
    else
      params[k] = v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  }
  j["params"] = params;
  j["counts"] = report.counts;
  j["access"] = to_json(report.log);
  j["verify_access"] = to_json(report.verify_log);
  j["coverage"] = report.coverage ? nlohmann::json(*report.coverage) : nlohmann::json(nullptr);
  j["flags"] = report.flags;
  j["wall_ms"] = report.wall_ms;
  return j;
}

}  // namespace geosub
