// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella {

bool Device::has_port(std::uint32_t port_no) const {
  return std::binary_search(ports.begin(), ports.end(), port_no);
}

std::optional<std::string> closure_violation(const std::vector<Device>& devices,
                                             const std::vector<Link>& links,
                                             const std::vector<Host>& hosts) {
  std::map<DeviceId, const Device*> by_id;
  for (const auto& d : devices) {
    if (!by_id.emplace(d.id, &d).second) return fmt::format("duplicate device {}", d.id.dpid);
    std::set<std::uint32_t> seen;
    for (auto p : d.ports) {
      if (p == 0) return fmt::format("device {} has port 0", d.id.dpid);
      if (!seen.insert(p).second) return fmt::format("device {} lists port {} twice", d.id.dpid, p);
    }
  }
  auto port_exists = [&](PortId p) {
    auto it = by_id.find(p.device);
    if (it == by_id.end()) return false;
    const auto& ports = it->second->ports;
    return std::find(ports.begin(), ports.end(), p.port_no) != ports.end();
  };
  for (const auto& l : links) {
    if (l.src == l.dst) return fmt::format("self link on {}:{}", l.src.device.dpid, l.src.port_no);
    if (!port_exists(l.src)) {
      return fmt::format("link source {}:{} not in devices", l.src.device.dpid, l.src.port_no);
    }
    if (!port_exists(l.dst)) {
      return fmt::format("link destination {}:{} not in devices", l.dst.device.dpid, l.dst.port_no);
    }
  }
  std::set<MacAddress> macs;
  for (const auto& h : hosts) {
    if (!macs.insert(h.mac).second) return fmt::format("duplicate host {}", h.mac.to_string());
    if (!port_exists(h.attachment)) {
      return fmt::format("host {} attached to missing port {}:{}", h.mac.to_string(),
                         h.attachment.device.dpid, h.attachment.port_no);
    }
  }
  return std::nullopt;
}

TopologySnapshot TopologySnapshot::create(std::vector<Device> devices, std::vector<Link> links,
                                          std::vector<Host> hosts, std::int64_t captured_at_ns) {
  for (auto& d : devices) std::sort(d.ports.begin(), d.ports.end());
  std::sort(devices.begin(), devices.end());
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  std::sort(hosts.begin(), hosts.end(),
            [](const Host& a, const Host& b) { return a.mac < b.mac; });
  if (auto problem = closure_violation(devices, links, hosts)) throw InvalidTopology(*problem);

  TopologySnapshot s;
  s.devices_ = std::move(devices);
  s.links_ = std::move(links);
  s.hosts_ = std::move(hosts);
  s.captured_at_ns_ = captured_at_ns;
  return s;
}

const Device* TopologySnapshot::find_device(DeviceId id) const {
  auto it = std::lower_bound(devices_.begin(), devices_.end(), id,
                             [](const Device& d, DeviceId key) { return d.id < key; });
  return it != devices_.end() && it->id == id ? &*it : nullptr;
}

const Host* TopologySnapshot::find_host(const MacAddress& mac) const {
  auto it = std::lower_bound(hosts_.begin(), hosts_.end(), mac,
                             [](const Host& h, const MacAddress& key) { return h.mac < key; });
  return it != hosts_.end() && it->mac == mac ? &*it : nullptr;
}

bool TopologySnapshot::has_port(PortId port) const {
  const auto* d = find_device(port.device);
  return d != nullptr && d->has_port(port.port_no);
}

}  // namespace umbrella
