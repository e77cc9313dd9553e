// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umbrella/driver/config.hpp"
#include "umbrella/driver/driver.hpp"

namespace umbrella::detail {
class HttpSession;
}

namespace umbrella::onos {

/// REST paths below the endpoint. Each can be overridden through
/// DriverConfig extras "onos.path.<field>"; "{deviceId}" is substituted.
struct OnosEndpoints {
  std::string devices{"/onos/v1/devices"};
  std::string links{"/onos/v1/links"};
  std::string hosts{"/onos/v1/hosts"};
  std::string flows{"/onos/v1/flows"};
  std::string flow_of_device{"/onos/v1/flows/{deviceId}"};
  std::string stats_ports{"/onos/v1/statistics/ports/{deviceId}"};

  static OnosEndpoints from_config(const DriverConfig& config);
};

/// Flow body for POST flows/{deviceId}: compact JSON, keys sorted.
/// Throws InvalidRule for an invalid rule.
std::string onos_render_flow(const FlowRule& rule);

/// One flow object as returned in a "flows" array. Throws
/// DriverError(ProtocolError), or DriverError(Unsupported) for criteria or
/// instructions without a unified equivalent.
FlowEntry onos_parse_flow(std::string_view flow_object);

/// Unavailable devices are left out together with the links and hosts that
/// touch them. Ports are those referenced by links and host locations.
/// Throws DriverError(ProtocolError).
TopologySnapshot onos_parse_topology(std::string_view devices_body, std::string_view links_body,
                                     std::string_view hosts_body, std::int64_t captured_at_ns = 0);

/// {"flows": [...]}. Entries being removed and entries that have no unified
/// form are skipped.
std::vector<FlowEntry> onos_parse_flows(std::string_view body);

FlowStats onos_parse_flow_stats(std::string_view body, const FlowHandle& handle);
std::vector<PortStats> onos_parse_port_stats(std::string_view body);

/// Controller-assigned flow id from a POST response.
std::string onos_flow_id_from_response(const std::optional<std::string>& location, std::string_view body);

class OnosDriver final : public Driver {
 public:
  /// Throws ConfigError.
  explicit OnosDriver(const DriverConfig& config);
  ~OnosDriver() override;

  std::string_view name() const override { return "onos"; }
  CapabilitySet capabilities() const override;

  TopologySnapshot get_topology() override;
  FlowHandle install_flow(const FlowRule& rule) override;
  void remove_flow(const FlowHandle& handle) override;
  std::vector<FlowEntry> list_flows(std::optional<DeviceId> device = std::nullopt) override;
  FlowStats get_flow_stats(const FlowHandle& handle) override;
  std::vector<PortStats> get_port_stats(DeviceId device) override;

  const OnosEndpoints& endpoints() const { return paths_; }

 private:
  std::string device_path(const std::string& pattern, DeviceId device) const;

  std::unique_ptr<detail::HttpSession> http_;
  OnosEndpoints paths_;
  std::optional<std::string> app_id_;
};

std::shared_ptr<Driver> make_onos_driver(const DriverConfig& config);

}  // namespace umbrella::onos
