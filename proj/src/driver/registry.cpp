// SPDX-License-Identifier: Apache-2.0
#include "umbrella/driver/registry.hpp"

#include <fmt/format.h>

#include "umbrella/error.hpp"
#include "umbrella/mock/mock_controller.hpp"
#include "umbrella/odl/odl_driver.hpp"
#include "umbrella/onos/onos_driver.hpp"

namespace umbrella {

void DriverRegistry::register_driver(const std::string& name, DriverFactory factory) {
  if (!factory) throw std::invalid_argument("driver factory is empty");
  std::lock_guard lock(mu_);
  if (!factories_.emplace(name, std::move(factory)).second) {
    throw DuplicateName(fmt::format("driver '{}' already registered", name));
  }
}

std::shared_ptr<Driver> DriverRegistry::create_driver(const DriverConfig& config, const CapabilitySet& required) const {
  DriverFactory factory;
  {
    std::lock_guard lock(mu_);
    auto it = factories_.find(config.name);
    if (it == factories_.end()) throw UnknownDriver(fmt::format("no driver named '{}'", config.name));
    factory = it->second;
  }
  auto driver = factory(config);
  if (!driver) throw ConfigError(fmt::format("driver '{}' factory returned nothing", config.name));
  require_capabilities(*driver, required);
  return driver;
}

std::vector<std::string> DriverRegistry::names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

void register_builtin_drivers(DriverRegistry& registry) {
  registry.register_driver("mock", mock::make_mock_driver);
  registry.register_driver("onos", onos::make_onos_driver);
  registry.register_driver("odl", odl::make_odl_driver);
}

DriverRegistry& default_registry() {
  static DriverRegistry* registry = [] {
    auto* r = new DriverRegistry;
    register_builtin_drivers(*r);
    return r;
  }();
  return *registry;
}

}  // namespace umbrella
