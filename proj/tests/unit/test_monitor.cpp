// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "umbrella/core/topology_spec.hpp"
#include "umbrella/error.hpp"
#include "umbrella/mock/mock_controller.hpp"
#include "umbrella/monitor/topo_monitor.hpp"

using namespace umbrella;
using namespace umbrella::monitor;
using namespace std::chrono_literals;

namespace {

class FlakyDriver final : public Driver {
 public:
  explicit FlakyDriver(std::shared_ptr<mock::MockController> inner) : inner_(std::move(inner)) {}
  bool failing{false};
  std::string_view name() const override { return "flaky"; }
  CapabilitySet capabilities() const override { return inner_->capabilities(); }
  TopologySnapshot get_topology() override {
    if (failing) throw DriverError(DriverErrorKind::Unreachable, "down");
    return inner_->get_topology();
  }
  FlowHandle install_flow(const FlowRule& r) override { return inner_->install_flow(r); }
  void remove_flow(const FlowHandle& h) override { inner_->remove_flow(h); }
  std::vector<FlowEntry> list_flows(std::optional<DeviceId> d) override { return inner_->list_flows(d); }
  FlowStats get_flow_stats(const FlowHandle& h) override { return inner_->get_flow_stats(h); }
  std::vector<PortStats> get_port_stats(DeviceId d) override { return inner_->get_port_stats(d); }

 private:
  std::shared_ptr<mock::MockController> inner_;
};

}  // namespace

TEST(MonitorConfig, Validation) {
  EXPECT_THROW((MonitorConfig{5, 10}.validate()), ConfigError);
  EXPECT_THROW((MonitorConfig{100, 0}.validate()), ConfigError);
  EXPECT_NO_THROW(MonitorConfig{}.validate());
}

TEST(Monitor, ManualPollDeliversReplayableEvents) {
  auto m = mock::mock_with_topology(generate_linear_topology(3));
  auto mon = TopoMonitor::manual(m);
  auto sub = mon->subscribe();
  const auto before = sub->baseline();
  m->apply_mutation(mock::RemoveLink{Link{{DeviceId{1}, 2}, {DeviceId{2}, 2}}});
  mon->poll_once();
  std::vector<TopologyEvent> events;
  while (auto msg = sub->try_receive()) {
    ASSERT_TRUE(std::holds_alternative<TopologyEvent>(*msg));
    events.push_back(std::get<TopologyEvent>(*msg));
  }
  EXPECT_EQ(events.size(), 2u);
  EXPECT_EQ(apply_events(before, events), m->get_topology());
  mon->poll_once();
  EXPECT_FALSE(sub->try_receive().has_value());
}

TEST(Monitor, OverflowTurnsIntoResync) {
  auto m = mock::mock_with_topology(generate_linear_topology(4));
  auto mon = TopoMonitor::manual(m, MonitorConfig{100, 2});
  auto sub = mon->subscribe();
  m->apply_mutation(mock::RemoveDevice{DeviceId{4}});
  mon->poll_once();
  auto msg = sub->try_receive();
  ASSERT_TRUE(msg.has_value());
  ASSERT_TRUE(std::holds_alternative<Resync>(*msg));
  EXPECT_EQ(std::get<Resync>(*msg).snapshot, m->get_topology());
  EXPECT_TRUE(sub->lagged());
}

TEST(Monitor, DegradedReportedOnceThenRecovers) {
  auto m = mock::mock_with_topology(generate_linear_topology(2));
  auto flaky = std::make_shared<FlakyDriver>(m);
  auto mon = TopoMonitor::manual(flaky);
  auto sub = mon->subscribe();
  flaky->failing = true;
  mon->poll_once();
  mon->poll_once();
  auto msg = sub->try_receive();
  ASSERT_TRUE(msg.has_value());
  ASSERT_TRUE(std::holds_alternative<MonitorDegraded>(*msg));
  EXPECT_EQ(std::get<MonitorDegraded>(*msg).kind, DriverErrorKind::Unreachable);
  EXPECT_FALSE(sub->try_receive().has_value());
  flaky->failing = false;
  m->apply_mutation(mock::RemoveHost{MacAddress::from_u64(2)});
  mon->poll_once();
  msg = sub->try_receive();
  ASSERT_TRUE(msg.has_value());
  EXPECT_TRUE(std::holds_alternative<TopologyEvent>(*msg));
}

TEST(Monitor, ThreadedPollingAndStop) {
  auto m = mock::mock_with_topology(generate_linear_topology(3));
  auto mon = TopoMonitor::start(m, MonitorConfig{10, 64});
  auto sub = mon->subscribe();
  m->apply_mutation(mock::RemoveHost{MacAddress::from_u64(3)});
  const auto msg = sub->receive(2000ms);
  ASSERT_TRUE(msg.has_value());
  const auto& ev = std::get<TopologyEvent>(*msg);
  EXPECT_TRUE(std::holds_alternative<HostRemoved>(ev.change));
  mon->stop();
  EXPECT_TRUE(sub->closed());
  EXPECT_FALSE(sub->receive(10ms).has_value());
  EXPECT_TRUE(mon->subscribe()->closed());
}
