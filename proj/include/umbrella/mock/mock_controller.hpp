// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "umbrella/core/topology_spec.hpp"
#include "umbrella/driver/config.hpp"
#include "umbrella/driver/driver.hpp"
#include "umbrella/mock/traffic.hpp"

namespace umbrella::mock {

enum class InstallMode { Sequential, Parallel };

std::string_view to_string(InstallMode mode);
/// "seq"/"sequential" or "par"/"parallel". Throws InvalidSpec.
InstallMode parse_install_mode(std::string_view text);

struct LatencyModel {
  /// Sequential: rules go through one install pipeline, so the k-th rule of
  /// a burst is active k * per_rule after the burst starts. Parallel: every
  /// rule is active per_rule after its request.
  double per_rule_install_ms{0};
  InstallMode install_mode{InstallMode::Sequential};
  /// Virtual time every contract call costs the caller.
  double base_rpc_ms{0};
};

struct AddDevice {
  Device device;
};
struct RemoveDevice {
  DeviceId id;
};
/// Cable-level by default: both directions are added/removed.
struct AddLink {
  Link link;
  bool bidirectional{true};
};
struct RemoveLink {
  Link link;
  bool bidirectional{true};
};
struct AddHost {
  Host host;
};
struct RemoveHost {
  MacAddress mac;
};

using Mutation = std::variant<AddDevice, RemoveDevice, AddLink, RemoveLink, AddHost, RemoveHost>;

/// In-process controller plus network simulator.
///
/// Time is virtual and moves only through advance_to/run_until_complete and
/// the base_rpc cost of contract calls. At one instant, rule activations and
/// contract calls come before packet emissions, so a rule installed with zero
/// latency at t already forwards the packet emitted at t. Equal-time
/// activations run in request order.
///
/// Forwarding takes the highest-priority active matching rule; equal
/// priorities resolve to the earliest installed. Links and switches add no
/// delay; a packet is lost when some hop has no rule, drops it, or outputs to
/// a port that leads neither to another switch nor to the destination host.
class MockController final : public Driver, public TrafficPlane {
 public:
  /// Throws InvalidSpec.
  MockController(const TopologySpec& spec, const LatencyModel& latency);

  std::string_view name() const override { return "mock"; }
  CapabilitySet capabilities() const override { return CapabilitySet::all(); }

  TopologySnapshot get_topology() override;
  FlowHandle install_flow(const FlowRule& rule) override;
  void remove_flow(const FlowHandle& handle) override;
  std::vector<FlowEntry> list_flows(std::optional<DeviceId> device = std::nullopt) override;
  FlowStats get_flow_stats(const FlowHandle& handle) override;
  std::vector<PortStats> get_port_stats(DeviceId device) override;

  std::int64_t now_ns() const override;
  TrainId start_train(const PacketTrain& train) override;
  /// Processes activations with timestamp <= t and emissions with
  /// timestamp < t; emissions at exactly t wait until time moves on.
  void advance_to(std::int64_t t_ns) override;
  DeliveryReport run_until_complete(TrainId id) override;
  DeliveryReport train_report(TrainId id) const override;

  /// start_train + run_until_complete.
  DeliveryReport run_packet_train(const PacketTrain& train);

  /// Removing a device also removes its links, hosts and flow rules.
  /// Throws InvalidMutation.
  void apply_mutation(const Mutation& mutation);

  const LatencyModel& latency() const { return latency_; }

 private:
  struct FlowSlot {
    std::string handle_id;
    std::uint64_t generation{};
    FlowRule rule;
    FlowKey key;
    bool active{false};
    std::int64_t active_at{0};
    std::int64_t last_hit{0};
    std::uint64_t packets{0};
    std::uint64_t bytes{0};
  };

  enum class EventKind : std::uint8_t { Activate = 0, Emit = 1 };

  struct Event {
    std::int64_t at;
    EventKind kind;
    std::uint64_t seq;
    DeviceId device;            // Activate
    std::uint64_t generation;   // Activate
    TrainId train;              // Emit
    std::uint64_t index;        // Emit

    bool operator>(const Event& o) const {
      if (at != o.at) return at > o.at;
      if (kind != o.kind) return kind > o.kind;
      return seq > o.seq;
    }
  };

  struct TrainState {
    PacketTrain train;
    DeliveryReport report;
  };

  void charge_rpc();
  void process_until(std::int64_t t_ns, bool include_emissions_at_t);
  void schedule(Event e);
  void activate(DeviceId device, std::uint64_t generation);
  void emit(TrainId id, std::uint64_t index);
  bool forward(const TrainState& state);
  FlowSlot* lookup(DeviceId device, const PacketDescriptor& packet);
  bool expired(const FlowSlot& slot) const;
  void purge_expired();
  FlowSlot* find_slot(const FlowHandle& handle);
  void rebuild_indexes();
  PortStats& counters(PortId port);

  mutable std::mutex mu_;
  LatencyModel latency_;
  std::int64_t per_rule_ns_;
  std::int64_t rpc_ns_;

  std::map<DeviceId, Device> devices_;
  std::set<Link> links_;
  std::map<MacAddress, Host> hosts_;
  std::map<PortId, PortId> link_from_;

  std::map<DeviceId, std::vector<FlowSlot>> tables_;
  std::uint64_t next_generation_{1};
  std::uint64_t next_handle_{1};
  std::int64_t pipeline_free_at_{0};
  std::map<PortId, PortStats> port_counters_;

  std::int64_t now_{0};
  std::uint64_t next_seq_{0};
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::vector<TrainState> trains_;
};

/// Throws InvalidSpec.
std::shared_ptr<MockController> mock_with_topology(const TopologySpec& spec, const LatencyModel& latency = {});

/// Registry factory. Extras: "topology" (inline JSON spec),
/// "topology_file", "per_rule_ms", "base_rpc_ms", "install_mode".
std::shared_ptr<Driver> make_mock_driver(const DriverConfig& config);

}  // namespace umbrella::mock
