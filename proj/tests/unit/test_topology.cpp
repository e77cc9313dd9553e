// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include <gtest/gtest.h>

#include "umbrella/core/topology_spec.hpp"
#include "umbrella/error.hpp"

using namespace umbrella;

TEST(LinearTopology, ChainArithmetic) {
  for (std::uint32_t n : {1u, 3u, 10u, 100u}) {
    const auto snap = generate_linear_topology(n).to_snapshot();
    EXPECT_EQ(snap.devices().size(), n);
    EXPECT_EQ(snap.hosts().size(), n);
    EXPECT_EQ(snap.links().size(), 2 * (n - 1));
  }
  EXPECT_THROW(generate_linear_topology(0), InvalidSpec);
}

TEST(LinearTopology, MininetPortNumbering) {
  const auto snap = generate_linear_topology(3).to_snapshot();
  const Host* h1 = snap.find_host(MacAddress::parse("00:00:00:00:00:01"));
  ASSERT_NE(h1, nullptr);
  EXPECT_EQ(h1->attachment, (PortId{DeviceId{1}, 1}));
  EXPECT_EQ(h1->ip, Ipv4Address::parse("10.0.0.1"));
  const Link s1_s2{PortId{DeviceId{1}, 2}, PortId{DeviceId{2}, 2}};
  const Link s2_s3{PortId{DeviceId{2}, 3}, PortId{DeviceId{3}, 2}};
  for (const auto& l : {s1_s2, s2_s3}) {
    EXPECT_TRUE(std::binary_search(snap.links().begin(), snap.links().end(), l));
    EXPECT_TRUE(std::binary_search(snap.links().begin(), snap.links().end(), l.reversed()));
  }
}

TEST(Snapshot, RejectsDanglingReferences) {
  const Device d{DeviceId{1}, {1, 2}};
  EXPECT_THROW(TopologySnapshot::create({d}, {Link{{DeviceId{1}, 2}, {DeviceId{2}, 1}}}, {}), InvalidTopology);
  EXPECT_THROW(TopologySnapshot::create({d}, {}, {Host{MacAddress::from_u64(1), std::nullopt, {DeviceId{1}, 3}}}),
               InvalidTopology);
  EXPECT_THROW(TopologySnapshot::create({d, d}, {}, {}), InvalidTopology);
  EXPECT_THROW(TopologySnapshot::create({Device{DeviceId{1}, {0}}}, {}, {}), InvalidTopology);
  const Host h{MacAddress::from_u64(1), std::nullopt, {DeviceId{1}, 1}};
  EXPECT_THROW(TopologySnapshot::create({d}, {}, {h, h}), InvalidTopology);
}

TEST(Snapshot, SortedDedupedAndContentEquality) {
  const Device a{DeviceId{2}, {2, 1}};
  const Device b{DeviceId{1}, {1}};
  const Link l{{DeviceId{2}, 1}, {DeviceId{1}, 1}};
  const auto s1 = TopologySnapshot::create({a, b}, {l, l}, {}, 5);
  const auto s2 = TopologySnapshot::create({b, a}, {l}, {}, 9);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(s1.devices().front().id, DeviceId{1});
  EXPECT_EQ(s1.devices().back().ports, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(s1.links().size(), 1u);
  EXPECT_TRUE(s1.has_port({DeviceId{2}, 2}));
  EXPECT_FALSE(s1.has_port({DeviceId{1}, 2}));
  EXPECT_TRUE(TopologySnapshot{}.empty());
}

TEST(TopologySpecJson, LinearAndExplicitForms) {
  EXPECT_EQ(parse_topology_spec(R"({"kind":"linear","n":4})").to_snapshot(), generate_linear_topology(4).to_snapshot());
  const auto spec = parse_topology_spec(R"({
    "devices": [{"id": "of:0000000000000001", "ports": [1, 2]}, {"id": "openflow:2", "ports": [1, 2]}],
    "links": [{"src": {"device": "1", "port": 2}, "dst": {"device": "2", "port": 2}}],
    "hosts": [{"mac": "00:00:00:00:00:0a", "ip": "10.0.0.10", "device": "2", "port": 1}]})");
  const auto snap = spec.to_snapshot();
  EXPECT_EQ(snap.devices().size(), 2u);
  EXPECT_EQ(snap.links().size(), 1u);
  ASSERT_EQ(snap.hosts().size(), 1u);
  EXPECT_EQ(snap.hosts()[0].attachment, (PortId{DeviceId{2}, 1}));
  EXPECT_THROW(parse_topology_spec(R"({"kind":"ring","n":4})"), InvalidSpec);
  EXPECT_THROW(parse_topology_spec("not json"), InvalidSpec);
  EXPECT_THROW(parse_topology_spec(R"({"devices":[],"links":[{"src":{"device":"1","port":1},"dst":{"device":"2","port":1}}],"hosts":[]})")
                   .to_snapshot(),
               InvalidSpec);
}
