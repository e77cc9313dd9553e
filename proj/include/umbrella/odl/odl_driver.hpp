// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "umbrella/driver/config.hpp"
#include "umbrella/driver/driver.hpp"

namespace umbrella::detail {
class HttpSession;
}

namespace umbrella::odl {

/// RESTCONF paths below the endpoint; overridable through extras
/// "odl.path.<field>". Placeholders: {nodeId}, {tableId}, {flowId}.
struct OdlEndpoints {
  std::string topology{"/restconf/operational/network-topology:network-topology"};
  std::string nodes{"/restconf/operational/opendaylight-inventory:nodes"};
  std::string node{"/restconf/operational/opendaylight-inventory:nodes/node/{nodeId}"};
  std::string flow_operational{
      "/restconf/operational/opendaylight-inventory:nodes/node/{nodeId}/flow-node-inventory:table/{tableId}/flow/{flowId}"};
  std::string config_nodes{"/restconf/config/opendaylight-inventory:nodes"};
  std::string config_node{"/restconf/config/opendaylight-inventory:nodes/node/{nodeId}"};
  std::string flow_write{
      "/restconf/config/opendaylight-inventory:nodes/node/{nodeId}/flow-node-inventory:table/{tableId}/flow/{flowId}"};

  static OdlEndpoints from_config(const DriverConfig& config);
};

/// "umb-" + 32 hex digits of a SHA-256 over device, table, priority and the
/// canonical match. Equal keys give equal ids, so re-installs overwrite.
std::string odl_flow_id(const FlowRule& rule);

/// PUT body for flow_write: compact JSON, keys sorted. Throws InvalidRule.
std::string odl_render_flow(const FlowRule& rule, const std::string& flow_id);

/// One flow object (the element of "flow-node-inventory:flow" or of a
/// table's "flow" array) on `device`. Throws DriverError(ProtocolError) or
/// DriverError(Unsupported).
FlowEntry odl_parse_flow(std::string_view flow_object, DeviceId device);

/// Switch nodes become devices, host-tracker nodes become hosts, LOCAL
/// termination points are dropped. The inventory adds ports of connectors
/// that carry no link. Throws DriverError(ProtocolError).
TopologySnapshot odl_parse_topology(std::string_view topology_body, std::string_view inventory_body,
                                    std::int64_t captured_at_ns = 0);

/// Every flow under an inventory body ({"nodes":{"node":[...]}} or
/// {"node":[...]}). Flows without a unified form are skipped.
std::vector<FlowEntry> odl_parse_inventory_flows(std::string_view body);

/// Node body ({"node":[...]}) -> statistics of its physical connectors.
std::vector<PortStats> odl_parse_port_stats(std::string_view node_body);

/// Statistics of a single operational flow body.
FlowStats odl_parse_flow_stats(std::string_view flow_body, const FlowHandle& handle);

/// Handle ids are "<table>/<flow-id>".
std::string odl_handle_id(std::uint8_t table_id, const std::string& flow_id);

class OdlDriver final : public Driver {
 public:
  /// Throws ConfigError.
  explicit OdlDriver(const DriverConfig& config);
  ~OdlDriver() override;

  std::string_view name() const override { return "odl"; }
  CapabilitySet capabilities() const override;

  TopologySnapshot get_topology() override;
  FlowHandle install_flow(const FlowRule& rule) override;
  void remove_flow(const FlowHandle& handle) override;
  std::vector<FlowEntry> list_flows(std::optional<DeviceId> device = std::nullopt) override;
  FlowStats get_flow_stats(const FlowHandle& handle) override;
  std::vector<PortStats> get_port_stats(DeviceId device) override;

  const OdlEndpoints& endpoints() const { return paths_; }

 private:
  std::string flow_path(const std::string& pattern, DeviceId device, std::uint8_t table, const std::string& id) const;
  std::string node_path(const std::string& pattern, DeviceId device) const;
  void require_known_device(DeviceId device);

  std::unique_ptr<detail::HttpSession> http_;
  OdlEndpoints paths_;
  std::mutex cache_mu_;
  std::set<DeviceId> known_devices_;
};

std::shared_ptr<Driver> make_odl_driver(const DriverConfig& config);

}  // namespace umbrella::odl
