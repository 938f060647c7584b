#pragma once

#include "geosub/report.hpp"

#include "json.hpp"

namespace geosub {

nlohmann::json to_json(const AccessLog& log);
nlohmann::json to_json(const SolveReport& report);

}  // namespace geosub
