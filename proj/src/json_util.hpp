#pragma once

#include <cmath>
#include <string>

#include "braillecam/layout.hpp"
#include "json.hpp"

namespace braillecam::detail {

inline double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

inline nlohmann::ordered_json parse_json(const std::string& text,
                                         const std::string& what) {
  try {
    return nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed " + what + " JSON: " + e.what());
  }
}

nlohmann::ordered_json page_to_json(const PageSpec& page);
PageSpec page_from_json(const nlohmann::ordered_json& j);

}  // namespace braillecam::detail
