// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "umbrella/core/topology_spec.hpp"
#include "umbrella/error.hpp"
#include "umbrella/mock/mock_controller.hpp"
#include "umbrella/path/pathfinder.hpp"

using namespace umbrella;
using namespace umbrella::mock;

namespace {

constexpr std::int64_t kMs = 1'000'000;

MacAddress host_mac(std::uint64_t i) { return MacAddress::from_u64(i); }

std::vector<FlowRule> path_rules(MockController& m, std::uint64_t src, std::uint64_t dst) {
  const auto snap = m.get_topology();
  const auto graph = path::build_graph(snap);
  const auto p = path::shortest_path(graph, *snap.find_host(host_mac(src)), *snap.find_host(host_mac(dst)));
  return path::compile_one_directional(*p);
}

PacketTrain train(std::uint64_t src, std::uint64_t dst, std::int64_t start, std::uint64_t count) {
  return PacketTrain{host_mac(src), host_mac(dst), start, kMs, count};
}

}  // namespace

TEST(Mock, NoRulesMeansEverythingLost) {
  auto m = mock_with_topology(generate_linear_topology(3));
  const auto r = m->run_packet_train(train(1, 3, 0, 10));
  EXPECT_EQ(r.sent, 10u);
  EXPECT_EQ(r.received, 0u);
  EXPECT_TRUE(r.complete);
}

TEST(Mock, ZeroLatencyRulesForwardImmediately) {
  auto m = mock_with_topology(generate_linear_topology(4));
  for (const auto& rule : path_rules(*m, 1, 4)) m->install_flow(rule);
  const auto r = m->run_packet_train(train(1, 4, 0, 20));
  EXPECT_EQ(r.received, 20u);
  EXPECT_EQ(r.first_received_index, 0u);
  const auto back = m->run_packet_train(train(4, 1, m->now_ns(), 5));
  EXPECT_EQ(back.received, 0u);
}

TEST(Mock, SequentialPipelineActivatesKTimesL) {
  auto m = mock_with_topology(generate_linear_topology(5), LatencyModel{2.0, InstallMode::Sequential, 0});
  const auto id = m->start_train(train(1, 5, 0, 30));
  for (const auto& rule : path_rules(*m, 1, 5)) m->install_flow(rule);
  const auto r = m->run_until_complete(id);
  // 5 rules * 2 ms = 10 ms; packet 10 is emitted at 10 ms, after the last activation.
  EXPECT_EQ(r.first_received_index, 10u);
  EXPECT_EQ(r.lost(), 10u);
  EXPECT_EQ(r.interior_losses, 0u);
}

TEST(Mock, ParallelActivatesTogether) {
  auto m = mock_with_topology(generate_linear_topology(5), LatencyModel{2.0, InstallMode::Parallel, 0});
  const auto id = m->start_train(train(1, 5, 0, 30));
  for (const auto& rule : path_rules(*m, 1, 5)) m->install_flow(rule);
  EXPECT_EQ(m->run_until_complete(id).lost(), 2u);
}

TEST(Mock, ClockAndTrainValidation) {
  auto m = mock_with_topology(generate_linear_topology(2));
  m->advance_to(5 * kMs);
  EXPECT_EQ(m->now_ns(), 5 * kMs);
  EXPECT_THROW(m->advance_to(kMs), ClockRegression);
  EXPECT_THROW(m->start_train(train(1, 9, 6 * kMs, 1)), UnknownHost);
  EXPECT_THROW(m->start_train(train(1, 2, kMs, 1)), InvalidTrain);
  EXPECT_THROW(m->start_train(PacketTrain{host_mac(1), host_mac(2), 6 * kMs, 0, 3}), InvalidTrain);
}

TEST(Mock, FlowStoreRoundTripAndStats) {
  auto m = mock_with_topology(generate_linear_topology(2));
  const auto rules = path_rules(*m, 1, 2);
  std::vector<FlowHandle> handles;
  for (const auto& r : rules) handles.push_back(m->install_flow(r));
  EXPECT_EQ(m->list_flows().size(), rules.size());
  EXPECT_EQ(m->list_flows(DeviceId{1}).size(), 1u);
  m->run_packet_train(train(1, 2, 0, 7));
  EXPECT_EQ(m->get_flow_stats(handles[0]).packets, 7u);
  const auto ports = m->get_port_stats(DeviceId{1});
  ASSERT_FALSE(ports.empty());
  m->remove_flow(handles[0]);
  EXPECT_THROW(m->remove_flow(handles[0]), DriverError);
  EXPECT_THROW(m->get_flow_stats(handles[0]), DriverError);
  EXPECT_EQ(m->list_flows().size(), rules.size() - 1);
}

TEST(Mock, SameKeyOverwrites) {
  auto m = mock_with_topology(generate_linear_topology(2));
  auto rule = path_rules(*m, 1, 2).front();
  m->install_flow(rule);
  rule.actions = {Drop{}};
  m->install_flow(rule);
  const auto flows = m->list_flows(rule.device);
  ASSERT_EQ(flows.size(), 1u);
  EXPECT_TRUE(semantically_equal(flows[0].rule, rule));
}

TEST(Mock, InstallRejectsUnknownDeviceAndInvalidRule) {
  auto m = mock_with_topology(generate_linear_topology(2));
  FlowRule r{DeviceId{42}, 0, 1, {}, {Output{1}}};
  try {
    m->install_flow(r);
    FAIL();
  } catch (const DriverError& e) {
    EXPECT_EQ(e.kind(), DriverErrorKind::NotFound);
  }
  r.device = DeviceId{1};
  r.actions = {Drop{}, Output{1}};
  try {
    m->install_flow(r);
    FAIL();
  } catch (const DriverError& e) {
    EXPECT_EQ(e.kind(), DriverErrorKind::Rejected);
  }
}

TEST(Mock, MutationsChangeTopologyAndFlows) {
  auto m = mock_with_topology(generate_linear_topology(3));
  for (const auto& r : path_rules(*m, 1, 3)) m->install_flow(r);
  m->apply_mutation(RemoveDevice{DeviceId{2}});
  const auto snap = m->get_topology();
  EXPECT_EQ(snap.devices().size(), 2u);
  EXPECT_TRUE(snap.links().empty());
  EXPECT_EQ(snap.hosts().size(), 2u);
  EXPECT_TRUE(m->list_flows(DeviceId{2}).empty());
  EXPECT_THROW(m->apply_mutation(RemoveDevice{DeviceId{2}}), InvalidMutation);
  EXPECT_THROW(m->apply_mutation(AddLink{Link{{DeviceId{1}, 9}, {DeviceId{3}, 9}}}), InvalidMutation);
  m->apply_mutation(AddDevice{Device{DeviceId{2}, {1, 2, 3}}});
  m->apply_mutation(AddLink{Link{{DeviceId{1}, 2}, {DeviceId{2}, 2}}});
  EXPECT_EQ(m->get_topology().links().size(), 2u);
}

TEST(Mock, FactoryReadsExtras) {
  DriverConfig c;
  c.name = "mock";
  c.extras = {{"topology", R"({"kind":"linear","n":4})"}, {"per_rule_ms", "1.5"}, {"install_mode", "par"}};
  const auto d = make_mock_driver(c);
  auto* m = dynamic_cast<MockController*>(d.get());
  ASSERT_NE(m, nullptr);
  EXPECT_DOUBLE_EQ(m->latency().per_rule_install_ms, 1.5);
  EXPECT_EQ(m->latency().install_mode, InstallMode::Parallel);
  c.extras["per_rule_ms"] = "-1";
  EXPECT_THROW(make_mock_driver(c), Error);
}
