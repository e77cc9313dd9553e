// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/events.hpp"

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella {

namespace {

std::string port_text(PortId p) { return fmt::format("{}:{}", p.device.dpid, p.port_no); }

std::string link_text(const Link& l) { return port_text(l.src) + "->" + port_text(l.dst); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(const TopologyEvent& event) {
  return std::visit(
      overloaded{
          [](const DeviceAdded& e) { return fmt::format("DeviceAdded {}", render_onos(e.device.id)); },
          [](const DeviceRemoved& e) { return fmt::format("DeviceRemoved {}", render_onos(e.id)); },
          [](const DeviceUpdated& e) {
            return fmt::format("DeviceUpdated {} ports={}", render_onos(e.device.id), e.device.ports.size());
          },
          [](const LinkAdded& e) { return "LinkAdded " + link_text(e.link); },
          [](const LinkRemoved& e) { return "LinkRemoved " + link_text(e.link); },
          [](const HostAdded& e) { return "HostAdded " + e.host.mac.to_string(); },
          [](const HostRemoved& e) { return "HostRemoved " + e.host.mac.to_string(); },
      },
      event.change);
}

TopologyBuilder::TopologyBuilder(const TopologySnapshot& snapshot) {
  for (const auto& d : snapshot.devices()) devices_.emplace(d.id, d);
  links_.insert(snapshot.links().begin(), snapshot.links().end());
  for (const auto& h : snapshot.hosts()) hosts_.emplace(h.mac, h);
}

void TopologyBuilder::apply(const TopologyChange& change) {
  std::visit(overloaded{
                 [this](const DeviceAdded& e) {
                   if (!devices_.emplace(e.device.id, e.device).second) {
                     throw InvalidTopology("DeviceAdded for existing device " + render_onos(e.device.id));
                   }
                 },
                 [this](const DeviceRemoved& e) {
                   if (devices_.erase(e.id) == 0) {
                     throw InvalidTopology("DeviceRemoved for unknown device " + render_onos(e.id));
                   }
                 },
                 [this](const DeviceUpdated& e) {
                   auto it = devices_.find(e.device.id);
                   if (it == devices_.end()) {
                     throw InvalidTopology("DeviceUpdated for unknown device " + render_onos(e.device.id));
                   }
                   it->second = e.device;
                 },
                 [this](const LinkAdded& e) {
                   if (!links_.insert(e.link).second) throw InvalidTopology("LinkAdded twice " + link_text(e.link));
                 },
                 [this](const LinkRemoved& e) {
                   if (links_.erase(e.link) == 0) throw InvalidTopology("LinkRemoved unknown " + link_text(e.link));
                 },
                 [this](const HostAdded& e) {
                   if (!hosts_.emplace(e.host.mac, e.host).second) {
                     throw InvalidTopology("HostAdded twice " + e.host.mac.to_string());
                   }
                 },
                 [this](const HostRemoved& e) {
                   auto it = hosts_.find(e.host.mac);
                   if (it == hosts_.end() || it->second != e.host) {
                     throw InvalidTopology("HostRemoved unknown " + e.host.mac.to_string());
                   }
                   hosts_.erase(it);
                 },
             },
             change);
}

std::optional<std::string> TopologyBuilder::closure_violation() const {
  std::vector<Device> devices;
  for (const auto& [id, d] : devices_) devices.push_back(d);
  std::vector<Link> links(links_.begin(), links_.end());
  std::vector<Host> hosts;
  for (const auto& [mac, h] : hosts_) hosts.push_back(h);
  return umbrella::closure_violation(devices, links, hosts);
}

TopologySnapshot TopologyBuilder::build(std::int64_t captured_at_ns) const {
  std::vector<Device> devices;
  for (const auto& [id, d] : devices_) devices.push_back(d);
  std::vector<Link> links(links_.begin(), links_.end());
  std::vector<Host> hosts;
  for (const auto& [mac, h] : hosts_) hosts.push_back(h);
  return TopologySnapshot::create(std::move(devices), std::move(links), std::move(hosts), captured_at_ns);
}

TopologySnapshot apply_events(const TopologySnapshot& base, std::span<const TopologyEvent> events) {
  TopologyBuilder builder(base);
  std::int64_t at = base.captured_at_ns();
  for (const auto& e : events) {
    builder.apply(e.change);
    if (auto problem = builder.closure_violation()) {
      throw InvalidTopology(fmt::format("closure broken after {}: {}", to_string(e), *problem));
    }
    at = e.observed_at_ns;
  }
  return builder.build(at);
}

}  // namespace umbrella
