// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "umbrella/core/flow.hpp"
#include "umbrella/core/topology.hpp"
#include "umbrella/error.hpp"

namespace umbrella {

struct CapabilitySet {
  bool topology_read{false};
  bool flow_write{false};
  bool flow_stats{false};
  bool port_stats{false};
  bool event_push{false};  // native change notifications; false = polling only

  static constexpr CapabilitySet all() { return {true, true, true, true, true}; }

  /// flow_stats without flow_write is not a meaningful driver.
  bool consistent() const { return !flow_stats || flow_write; }
  /// True when every capability set in `required` is also set here.
  bool covers(const CapabilitySet& required) const;
  std::string describe_missing(const CapabilitySet& required) const;

  bool operator==(const CapabilitySet&) const = default;
};

enum class DriverErrorKind { Unreachable, AuthFailed, NotFound, Rejected, Unsupported, ProtocolError };

std::string_view to_string(DriverErrorKind kind);

/// The single failure type of every contract operation.
class DriverError : public Error {
 public:
  DriverError(DriverErrorKind kind, std::string detail = {});

  DriverErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  DriverErrorKind kind_;
  std::string detail_;
};

/// Uniform northbound operation set. Implementations translate each call to
/// one controller's API (or simulate it) and report failures only as
/// DriverError. Calls are synchronous; a driver may be shared between threads.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual std::string_view name() const = 0;
  virtual CapabilitySet capabilities() const = 0;

  virtual TopologySnapshot get_topology() = 0;

  /// Returns once the controller acknowledged the rule.
  virtual FlowHandle install_flow(const FlowRule& rule) = 0;
  virtual void remove_flow(const FlowHandle& handle) = 0;
  virtual std::vector<FlowEntry> list_flows(std::optional<DeviceId> device = std::nullopt) = 0;

  virtual FlowStats get_flow_stats(const FlowHandle& handle) = 0;
  virtual std::vector<PortStats> get_port_stats(DeviceId device) = 0;
};

/// Throws DriverError(Unsupported) naming what `driver` lacks.
void require_capabilities(const Driver& driver, const CapabilitySet& required);

}  // namespace umbrella
