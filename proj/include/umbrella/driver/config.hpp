// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace umbrella {

struct DriverConfig {
  std::string name;
  std::string endpoint;
  std::string username;
  std::string password;
  std::uint32_t request_timeout_ms{5000};
  std::map<std::string, std::string> extras;

  /// Looks up an extras entry.
  std::optional<std::string> extra(const std::string& key) const;
};

/// scheme://host[:port][/base/path]
struct Endpoint {
  std::string scheme;
  std::string host;
  std::uint16_t port{};
  std::string base_path;  // "" or "/prefix" without trailing slash

  /// Throws ConfigError for anything that is not a well-formed URL.
  static Endpoint parse(std::string_view url);
  std::string scheme_host_port() const;
};

/// Parses the TOML-style file format:
///
///   # comment
///   [controller]
///   name = "onos"
///   endpoint = "http://127.0.0.1:8181"
///   username = "onos"
///   password = "rocks"
///   request_timeout_ms = 5000
///   [extras]
///   "onos.path.flows" = "/onos/v1/flows"
///
/// Keys before any section header belong to [controller]. Throws ConfigError.
DriverConfig parse_driver_config(std::string_view text);
DriverConfig load_driver_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Applies UMBRELLA_CONTROLLER, UMBRELLA_ENDPOINT, UMBRELLA_USER and
/// UMBRELLA_PASS over `config`. The lookup defaults to std::getenv.
void apply_env_overrides(DriverConfig& config, const EnvLookup& lookup = {});

}  // namespace umbrella
