// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "umbrella/core/ids.hpp"

namespace umbrella {

struct Device {
  DeviceId id;
  std::vector<std::uint32_t> ports;  // sorted, unique, every entry >= 1

  bool has_port(std::uint32_t port_no) const;
  bool operator==(const Device&) const = default;
  auto operator<=>(const Device&) const = default;
};

struct Host {
  MacAddress mac;
  std::optional<Ipv4Address> ip;
  PortId attachment;

  bool operator==(const Host&) const = default;
  auto operator<=>(const Host&) const = default;
};

/// Directed: a physical cable is two Link values.
struct Link {
  PortId src;
  PortId dst;

  Link reversed() const { return Link{dst, src}; }
  auto operator<=>(const Link&) const = default;
};

/// Returns a description of the first closure/uniqueness violation, or
/// nullopt when devices/links/hosts form a valid topology.
std::optional<std::string> closure_violation(const std::vector<Device>& devices,
                                             const std::vector<Link>& links,
                                             const std::vector<Host>& hosts);

/// Immutable view of the network at one instant.
///
/// Devices are sorted by id, links by (src, dst), hosts by MAC. Equality
/// compares content only; captured_at is metadata.
class TopologySnapshot {
 public:
  TopologySnapshot() = default;

  /// Sorts, de-duplicates links and validates. Throws InvalidTopology.
  static TopologySnapshot create(std::vector<Device> devices, std::vector<Link> links,
                                 std::vector<Host> hosts, std::int64_t captured_at_ns = 0);

  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Host>& hosts() const { return hosts_; }
  std::int64_t captured_at_ns() const { return captured_at_ns_; }

  const Device* find_device(DeviceId id) const;
  const Host* find_host(const MacAddress& mac) const;
  bool has_port(PortId port) const;
  bool empty() const { return devices_.empty() && links_.empty() && hosts_.empty(); }

  friend bool operator==(const TopologySnapshot& a, const TopologySnapshot& b) {
    return a.devices_ == b.devices_ && a.links_ == b.links_ && a.hosts_ == b.hosts_;
  }

 private:
  std::vector<Device> devices_;
  std::vector<Link> links_;
  std::vector<Host> hosts_;
  std::int64_t captured_at_ns_{0};
};

}  // namespace umbrella
