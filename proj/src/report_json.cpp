#include "pcfi/report_json.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "pcfi/io.hpp"

namespace pcfi {

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  const std::string text = io::format_double(v);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

nlohmann::json json_number(const std::optional<double>& v) {
  return v ? json_number(*v) : nlohmann::json(nullptr);
}

}  // namespace pcfi
