// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <gtest/gtest.h>

#include "umbrella/core/ids.hpp"
#include "umbrella/error.hpp"

using namespace umbrella;

TEST(DeviceId, NormalizesOnosSpelling) {
  EXPECT_EQ(normalize_device_id("of:0000000000000001"), DeviceId{1});
  EXPECT_EQ(normalize_device_id("of:00000000000000ff"), DeviceId{255});
  EXPECT_EQ(normalize_device_id("of:FFFFFFFFFFFFFFFF"), DeviceId{~0ULL});
}

TEST(DeviceId, NormalizesOdlAndDecimalSpelling) {
  EXPECT_EQ(normalize_device_id("openflow:1"), DeviceId{1});
  EXPECT_EQ(normalize_device_id("openflow:18446744073709551615"), DeviceId{~0ULL});
  EXPECT_EQ(normalize_device_id("42"), DeviceId{42});
}

TEST(DeviceId, RejectsMalformedText) {
  for (const char* bad : {"", "of:1", "of:000000000000000g", "of:00000000000000001", "openflow:", "openflow:-1",
                          "openflow:18446744073709551616", "switch1", "0x10", "openflow:1:2"}) {
    EXPECT_THROW(normalize_device_id(bad), MalformedId) << bad;
  }
}

TEST(DeviceId, RenderingsRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const DeviceId d{rng()};
    EXPECT_EQ(normalize_device_id(render_onos(d)), d);
    EXPECT_EQ(normalize_device_id(render_odl(d)), d);
    EXPECT_EQ(normalize_device_id(render_onos(normalize_device_id(render_odl(d)))), d);
  }
  EXPECT_EQ(render_onos(DeviceId{1}), "of:0000000000000001");
  EXPECT_EQ(render_odl(DeviceId{1}), "openflow:1");
}

TEST(MacAddress, ParsesAndPrints) {
  const auto mac = MacAddress::parse("AA:bb:cc:DD:ee:01");
  EXPECT_EQ(mac.to_string(), "aa:bb:cc:dd:ee:01");
  EXPECT_EQ(mac.to_string(true), "AA:BB:CC:DD:EE:01");
  EXPECT_EQ(mac.to_u64(), 0xaabbccddee01ULL);
  EXPECT_EQ(MacAddress::from_u64(3).to_string(), "00:00:00:00:00:03");
  for (const char* bad : {"", "aa:bb:cc:dd:ee", "aa:bb:cc:dd:ee:0g", "aabbccddee01", "aa:bb:cc:dd:ee:01:02"}) {
    EXPECT_THROW(MacAddress::parse(bad), MalformedValue) << bad;
  }
}

TEST(Ipv4, PrefixMasksAndContains) {
  const auto p = Ipv4Prefix::parse("10.0.0.77/24");
  EXPECT_EQ(p.to_string(), "10.0.0.0/24");
  EXPECT_TRUE(p.contains(Ipv4Address::parse("10.0.0.200")));
  EXPECT_FALSE(p.contains(Ipv4Address::parse("10.0.1.1")));
  EXPECT_EQ(Ipv4Prefix::parse("10.0.0.1").length(), 32);
  EXPECT_TRUE(Ipv4Prefix::parse("0.0.0.0/0").contains(Ipv4Address::parse("255.255.255.255")));
  for (const char* bad : {"10.0.0", "10.0.0.256", "10.0.0.1/33", "a.b.c.d", "10.0.0.1/"}) {
    EXPECT_THROW(Ipv4Prefix::parse(bad), MalformedValue) << bad;
  }
}
