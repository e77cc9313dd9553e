// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "umbrella/driver/config.hpp"
#include "umbrella/driver/driver.hpp"

namespace umbrella {

using DriverFactory = std::function<std::shared_ptr<Driver>(const DriverConfig&)>;

/// Name -> factory map. Adding a controller means writing a Driver and
/// registering its factory here; applications only ever see Driver.
class DriverRegistry {
 public:
  DriverRegistry() = default;
  DriverRegistry(const DriverRegistry&) = delete;
  DriverRegistry& operator=(const DriverRegistry&) = delete;

  /// Throws DuplicateName.
  void register_driver(const std::string& name, DriverFactory factory);

  /// Throws UnknownDriver, ConfigError for a malformed endpoint, and
  /// DriverError(Unsupported) when the driver lacks `required`.
  std::shared_ptr<Driver> create_driver(const DriverConfig& config, const CapabilitySet& required = {}) const;

  std::vector<std::string> names() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, DriverFactory> factories_;
};

/// Adds "mock", "onos" and "odl".
void register_builtin_drivers(DriverRegistry& registry);

/// Process-wide registry with the built-ins.
DriverRegistry& default_registry();

}  // namespace umbrella
