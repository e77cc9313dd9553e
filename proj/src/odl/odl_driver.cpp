// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <set>

#include "driver/http_session.hpp"
#include "driver/wire_util.hpp"
#include "umbrella/error.hpp"
#include "umbrella/odl/odl_driver.hpp"

namespace umbrella::odl {

using detail::encode_segment;
using detail::substitute;

namespace {

std::int64_t wall_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

struct ParsedHandle {
  std::uint8_t table;
  std::string flow_id;
};

ParsedHandle split_handle(const FlowHandle& handle) {
  const auto& id = handle.driver_flow_id;
  const auto slash = id.find('/');
  if (slash != std::string::npos && slash > 0 && slash <= 3 && slash + 1 < id.size() &&
      id.find_first_not_of("0123456789") == slash) {
    const auto table = std::stoul(id.substr(0, slash));
    if (table <= 0xff) return {static_cast<std::uint8_t>(table), id.substr(slash + 1)};
  }
  throw DriverError(DriverErrorKind::NotFound, "malformed flow handle '" + id + "'");
}

}  // namespace

OdlDriver::OdlDriver(const DriverConfig& config)
    : http_(std::make_unique<detail::HttpSession>(config)), paths_(OdlEndpoints::from_config(config)) {}

OdlDriver::~OdlDriver() = default;

CapabilitySet OdlDriver::capabilities() const {
  return CapabilitySet{.topology_read = true, .flow_write = true, .flow_stats = true, .port_stats = true, .event_push = false};
}

std::string OdlDriver::node_path(const std::string& pattern, DeviceId device) const {
  return substitute(pattern, "{nodeId}", encode_segment(render_odl(device)));
}

std::string OdlDriver::flow_path(const std::string& pattern, DeviceId device, std::uint8_t table,
                                 const std::string& id) const {
  auto path = node_path(pattern, device);
  path = substitute(std::move(path), "{tableId}", std::to_string(table));
  return substitute(std::move(path), "{flowId}", encode_segment(id));
}

TopologySnapshot OdlDriver::get_topology() {
  const auto topology = http_->get(paths_.topology);
  const auto inventory = http_->get_optional(paths_.nodes);
  auto snapshot = odl_parse_topology(topology.body, inventory.status == 404 ? "{}" : inventory.body, wall_ns());
  std::lock_guard lock(cache_mu_);
  for (const auto& d : snapshot.devices()) known_devices_.insert(d.id);
  return snapshot;
}

void OdlDriver::require_known_device(DeviceId device) {
  {
    std::lock_guard lock(cache_mu_);
    if (known_devices_.count(device)) return;
  }
  const auto snapshot = get_topology();
  if (snapshot.find_device(device) == nullptr) {
    throw DriverError(DriverErrorKind::NotFound, render_odl(device) + " is not a known node");
  }
}

FlowHandle OdlDriver::install_flow(const FlowRule& rule) {
  std::string body;
  const auto id = odl_flow_id(rule);
  try {
    body = odl_render_flow(rule, id);
  } catch (const InvalidRule& e) {
    throw DriverError(DriverErrorKind::Rejected, e.what());
  }
  require_known_device(rule.device);
  http_->put(flow_path(paths_.flow_write, rule.device, rule.table_id, id), body);
  return FlowHandle{rule.device, odl_handle_id(rule.table_id, id)};
}

void OdlDriver::remove_flow(const FlowHandle& handle) {
  const auto h = split_handle(handle);
  http_->del(flow_path(paths_.flow_write, handle.device, h.table, h.flow_id));
}

std::vector<FlowEntry> OdlDriver::list_flows(std::optional<DeviceId> device) {
  const auto config = http_->get_optional(device ? node_path(paths_.config_node, *device) : paths_.config_nodes);
  const auto operational = http_->get_optional(device ? node_path(paths_.node, *device) : paths_.nodes);
  auto entries = config.status == 404 ? std::vector<FlowEntry>{} : odl_parse_inventory_flows(config.body);

  // Operational copies of configured flows may carry switch-assigned ids;
  // only flows the config store does not know about are added.
  std::set<std::pair<DeviceId, std::string>> ids;
  std::set<FlowKey> keys;
  for (const auto& e : entries) {
    ids.emplace(e.handle.device, e.handle.driver_flow_id);
    keys.insert(FlowKey::of(e.rule));
  }
  if (operational.status != 404) {
    for (auto& e : odl_parse_inventory_flows(operational.body)) {
      if (ids.count({e.handle.device, e.handle.driver_flow_id}) || keys.count(FlowKey::of(e.rule))) continue;
      entries.push_back(std::move(e));
    }
  }
  if (device) std::erase_if(entries, [&](const FlowEntry& e) { return e.handle.device != *device; });
  return entries;
}

FlowStats OdlDriver::get_flow_stats(const FlowHandle& handle) {
  const auto h = split_handle(handle);
  const auto operational = http_->get_optional(flow_path(paths_.flow_operational, handle.device, h.table, h.flow_id));
  if (operational.status != 404) return odl_parse_flow_stats(operational.body, handle);
  // Configured but not yet reported by the switch.
  const auto configured = http_->get_optional(flow_path(paths_.flow_write, handle.device, h.table, h.flow_id));
  if (configured.status == 404) throw DriverError(DriverErrorKind::NotFound, handle.driver_flow_id);
  return FlowStats{handle, 0, 0, 0};
}

std::vector<PortStats> OdlDriver::get_port_stats(DeviceId device) {
  const auto response = http_->get(node_path(paths_.node, device));
  return odl_parse_port_stats(response.body);
}

std::shared_ptr<Driver> make_odl_driver(const DriverConfig& config) { return std::make_shared<OdlDriver>(config); }

}  // namespace umbrella::odl
