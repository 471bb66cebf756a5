#pragma once

#include <optional>

#include "json.hpp"

namespace pcfi {

inline constexpr int kReportSchemaVersion = 1;

// Report number rounded to 9 significant digits; null when absent or not
// finite.
nlohmann::json json_number(double v);
nlohmann::json json_number(const std::optional<double>& v);

}  // namespace pcfi
