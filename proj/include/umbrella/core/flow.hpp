// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "umbrella/core/ids.hpp"

namespace umbrella {

inline constexpr std::uint16_t kEthTypeIpv4 = 0x0800;

/// Absent field = wildcard.
struct MatchFields {
  std::optional<std::uint32_t> in_port;
  std::optional<MacAddress> eth_src;
  std::optional<MacAddress> eth_dst;
  std::optional<std::uint16_t> eth_type;
  std::optional<Ipv4Prefix> ipv4_src;
  std::optional<Ipv4Prefix> ipv4_dst;

  bool has_ipv4() const { return ipv4_src.has_value() || ipv4_dst.has_value(); }
  bool operator==(const MatchFields&) const = default;
  auto operator<=>(const MatchFields&) const = default;
};

/// OpenFlow reserved port numbers usable in Output.
namespace reserved_port {
inline constexpr std::uint32_t kInPort = 0xfffffff8;
inline constexpr std::uint32_t kTable = 0xfffffff9;
inline constexpr std::uint32_t kNormal = 0xfffffffa;
inline constexpr std::uint32_t kFlood = 0xfffffffb;
inline constexpr std::uint32_t kAll = 0xfffffffc;
inline constexpr std::uint32_t kController = 0xfffffffd;
inline constexpr std::uint32_t kLocal = 0xfffffffe;

/// "CONTROLLER", "LOCAL", ... or nullopt for a physical port.
std::optional<std::string> name_of(std::uint32_t port_no);
std::optional<std::uint32_t> from_name(std::string_view name);
}  // namespace reserved_port

struct Output {
  std::uint32_t port{};
  auto operator<=>(const Output&) const = default;
};
struct Drop {
  auto operator<=>(const Drop&) const = default;
};
struct SetEthDst {
  MacAddress mac;
  auto operator<=>(const SetEthDst&) const = default;
};

using Action = std::variant<Output, Drop, SetEthDst>;

struct FlowRule {
  DeviceId device;
  std::uint8_t table_id{0};
  std::uint16_t priority{0};
  MatchFields match;
  std::vector<Action> actions;
  std::uint32_t idle_timeout_s{0};  // 0 = permanent
  std::uint32_t hard_timeout_s{0};  // 0 = permanent

  bool operator==(const FlowRule&) const = default;
};

/// Throws InvalidRule: more than one Output, Drop mixed with other actions,
/// or an ipv4 match with an explicit non-IPv4 eth_type.
void validate_rule(const FlowRule& rule);

/// Canonical form used for semantic comparison: eth_type made explicit when
/// an ipv4 field is present, empty action list written as [Drop].
FlowRule canonical(const FlowRule& rule);

/// Equality of canonical forms. Handles are never part of a rule.
bool semantically_equal(const FlowRule& a, const FlowRule& b);

/// The fields an OpenFlow table uses to decide that two rules collide:
/// installing a rule with an equal key overwrites the previous one.
struct FlowKey {
  DeviceId device;
  std::uint8_t table_id{};
  std::uint16_t priority{};
  MatchFields match;

  static FlowKey of(const FlowRule& rule);
  auto operator<=>(const FlowKey&) const = default;
};

struct FlowHandle {
  DeviceId device;
  std::string driver_flow_id;

  auto operator<=>(const FlowHandle&) const = default;
};

struct FlowEntry {
  FlowHandle handle;
  FlowRule rule;
};

struct FlowStats {
  FlowHandle handle;
  std::uint64_t packets{};
  std::uint64_t bytes{};
  std::uint32_t duration_s{};
};

struct PortStats {
  PortId port;
  std::uint64_t rx_packets{};
  std::uint64_t tx_packets{};
  std::uint64_t rx_bytes{};
  std::uint64_t tx_bytes{};

  bool operator==(const PortStats&) const = default;
};

/// Header values of one simulated packet. No payload.
struct PacketDescriptor {
  std::uint32_t in_port{};
  MacAddress eth_src;
  MacAddress eth_dst;
  std::uint16_t eth_type{kEthTypeIpv4};
  Ipv4Address ipv4_src;
  Ipv4Address ipv4_dst;
};

bool flow_matches(const FlowRule& rule, const PacketDescriptor& packet);
bool flow_matches(const MatchFields& match, const PacketDescriptor& packet);

std::string to_string(const Action& action);
std::string to_string(const FlowRule& rule);

}  // namespace umbrella
