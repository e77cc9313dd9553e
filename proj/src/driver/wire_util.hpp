// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "umbrella/driver/driver.hpp"

namespace umbrella::detail {

using nlohmann::json;

[[noreturn]] inline void protocol_error(std::string detail) {
  throw DriverError(DriverErrorKind::ProtocolError, std::move(detail));
}

inline json parse_body(std::string_view body, std::string_view what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    protocol_error(fmt::format("{} is not JSON: {}", what, e.what()));
  }
}

/// obj[key] as an object or array, or throws ProtocolError.
inline const json& member(const json& obj, std::string_view key, std::string_view what) {
  if (!obj.is_object()) protocol_error(fmt::format("{} is not an object", what));
  auto it = obj.find(key);
  if (it == obj.end()) protocol_error(fmt::format("{} lacks '{}'", what, key));
  return *it;
}

inline std::string string_member(const json& obj, std::string_view key, std::string_view what) {
  const auto& v = member(obj, key, what);
  if (!v.is_string()) protocol_error(fmt::format("{}.{} is not a string", what, key));
  return v.get<std::string>();
}

/// Counter that may be encoded as a number or a decimal string.
inline std::uint64_t counter(const json& v, std::string_view what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto n = v.get<std::int64_t>();
    if (n < 0) protocol_error(fmt::format("{} is negative", what));
    return static_cast<std::uint64_t>(n);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
      try {
        return std::stoull(s);
      } catch (const std::out_of_range&) {
      }
    }
  }
  protocol_error(fmt::format("{} is not a non-negative integer", what));
}

inline std::uint64_t counter_member(const json& obj, std::string_view key, std::string_view what, std::uint64_t fallback = 0) {
  if (!obj.is_object()) protocol_error(fmt::format("{} is not an object", what));
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return counter(*it, fmt::format("{}.{}", what, key));
}

/// "{deviceId}"-style placeholder substitution.
inline std::string substitute(std::string pattern, std::string_view placeholder, std::string_view value) {
  for (auto pos = pattern.find(placeholder); pos != std::string::npos; pos = pattern.find(placeholder, pos + value.size())) {
    pattern.replace(pos, placeholder.size(), value);
  }
  return pattern;
}

}  // namespace umbrella::detail
