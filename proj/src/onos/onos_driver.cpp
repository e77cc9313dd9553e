// SPDX-License-Identifier: Apache-2.0
#include <chrono>

#include "driver/http_session.hpp"
#include "driver/wire_util.hpp"
#include "umbrella/error.hpp"
#include "umbrella/onos/onos_driver.hpp"

namespace umbrella::onos {

using detail::encode_segment;

namespace {
std::int64_t wall_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}
}  // namespace

OnosDriver::OnosDriver(const DriverConfig& config)
    : http_(std::make_unique<detail::HttpSession>(config)),
      paths_(OnosEndpoints::from_config(config)),
      app_id_(config.extra("onos.app_id")) {}

OnosDriver::~OnosDriver() = default;

CapabilitySet OnosDriver::capabilities() const {
  return CapabilitySet{.topology_read = true, .flow_write = true, .flow_stats = true, .port_stats = true, .event_push = false};
}

std::string OnosDriver::device_path(const std::string& pattern, DeviceId device) const {
  return detail::substitute(pattern, "{deviceId}", encode_segment(render_onos(device)));
}

TopologySnapshot OnosDriver::get_topology() {
  const auto devices = http_->get(paths_.devices);
  const auto links = http_->get(paths_.links);
  const auto hosts = http_->get(paths_.hosts);
  return onos_parse_topology(devices.body, links.body, hosts.body, wall_ns());
}

FlowHandle OnosDriver::install_flow(const FlowRule& rule) {
  std::string body;
  try {
    body = onos_render_flow(rule);
  } catch (const InvalidRule& e) {
    throw DriverError(DriverErrorKind::Rejected, e.what());
  }
  std::string path = device_path(paths_.flow_of_device, rule.device);
  if (app_id_) path += "?appId=" + encode_segment(*app_id_);
  const auto response = http_->post(path, body);
  return FlowHandle{rule.device, onos_flow_id_from_response(response.location, response.body)};
}

void OnosDriver::remove_flow(const FlowHandle& handle) {
  http_->del(device_path(paths_.flow_of_device, handle.device) + "/" + encode_segment(handle.driver_flow_id));
}

std::vector<FlowEntry> OnosDriver::list_flows(std::optional<DeviceId> device) {
  const auto response = http_->get(device ? device_path(paths_.flow_of_device, *device) : paths_.flows);
  auto entries = onos_parse_flows(response.body);
  if (device) std::erase_if(entries, [&](const FlowEntry& e) { return e.handle.device != *device; });
  return entries;
}

FlowStats OnosDriver::get_flow_stats(const FlowHandle& handle) {
  const auto response =
      http_->get(device_path(paths_.flow_of_device, handle.device) + "/" + encode_segment(handle.driver_flow_id));
  return onos_parse_flow_stats(response.body, handle);
}

std::vector<PortStats> OnosDriver::get_port_stats(DeviceId device) {
  const auto response = http_->get(device_path(paths_.stats_ports, device));
  auto stats = onos_parse_port_stats(response.body);
  std::erase_if(stats, [&](const PortStats& s) { return s.port.device != device; });
  return stats;
}

std::shared_ptr<Driver> make_onos_driver(const DriverConfig& config) { return std::make_shared<OnosDriver>(config); }

}  // namespace umbrella::onos
