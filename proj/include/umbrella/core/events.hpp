// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "umbrella/core/topology.hpp"

namespace umbrella {

struct DeviceAdded {
  Device device;
  bool operator==(const DeviceAdded&) const = default;
};
struct DeviceRemoved {
  DeviceId id;
  bool operator==(const DeviceRemoved&) const = default;
};
/// Port list of a device present on both sides changed.
struct DeviceUpdated {
  Device device;
  bool operator==(const DeviceUpdated&) const = default;
};
struct LinkAdded {
  Link link;
  bool operator==(const LinkAdded&) const = default;
};
struct LinkRemoved {
  Link link;
  bool operator==(const LinkRemoved&) const = default;
};
struct HostAdded {
  Host host;
  bool operator==(const HostAdded&) const = default;
};
struct HostRemoved {
  Host host;
  bool operator==(const HostRemoved&) const = default;
};

using TopologyChange =
    std::variant<DeviceAdded, DeviceRemoved, DeviceUpdated, LinkAdded, LinkRemoved, HostAdded, HostRemoved>;

struct TopologyEvent {
  TopologyChange change;
  std::int64_t observed_at_ns{0};

  bool operator==(const TopologyEvent&) const = default;
};

std::string to_string(const TopologyEvent& event);

/// Mutable working copy of a topology; the only way to evolve a snapshot.
class TopologyBuilder {
 public:
  TopologyBuilder() = default;
  explicit TopologyBuilder(const TopologySnapshot& snapshot);

  /// Throws InvalidTopology when the change does not apply (adding a device
  /// that exists, removing a link that does not, ...). Closure is NOT
  /// checked here; call closure_violation() when needed.
  void apply(const TopologyChange& change);

  std::optional<std::string> closure_violation() const;
  TopologySnapshot build(std::int64_t captured_at_ns) const;

 private:
  std::map<DeviceId, Device> devices_;
  std::set<Link> links_;
  std::map<MacAddress, Host> hosts_;
};

/// Replays events in order. Throws InvalidTopology if any step does not
/// apply or leaves the topology unclosed.
TopologySnapshot apply_events(const TopologySnapshot& base, std::span<const TopologyEvent> events);

}  // namespace umbrella
