// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace umbrella {

/// Canonical switch identity: the OpenFlow 64-bit datapath id.
///
/// Controllers spell the same datapath differently ("of:0000000000000001"
/// for ONOS, "openflow:1" for OpenDaylight). Everything inside the library
/// works on the integer; the textual forms only exist at driver boundaries.
struct DeviceId {
  std::uint64_t dpid{};

  auto operator<=>(const DeviceId&) const = default;
};

/// Accepts "of:" + 16 hex digits, "openflow:" + decimal, or bare decimal.
/// Throws MalformedId for anything else.
DeviceId normalize_device_id(std::string_view text);

std::string render_onos(DeviceId id);
std::string render_odl(DeviceId id);

struct PortId {
  DeviceId device;
  std::uint32_t port_no{};

  auto operator<=>(const PortId&) const = default;
};

class MacAddress {
 public:
  constexpr MacAddress() = default;
  explicit constexpr MacAddress(std::array<std::uint8_t, 6> octets) : octets_(octets) {}

  /// "aa:bb:cc:dd:ee:ff", case-insensitive; '-' also accepted as separator.
  static MacAddress parse(std::string_view text);
  static MacAddress from_u64(std::uint64_t value);

  std::uint64_t to_u64() const;
  std::string to_string(bool upper = false) const;
  const std::array<std::uint8_t, 6>& octets() const { return octets_; }

  auto operator<=>(const MacAddress&) const = default;

 private:
  std::array<std::uint8_t, 6> octets_{};
};

class Ipv4Address {
 public:
  constexpr Ipv4Address() = default;
  explicit constexpr Ipv4Address(std::uint32_t value) : value_(value) {}

  static Ipv4Address parse(std::string_view text);

  std::uint32_t value() const { return value_; }
  std::string to_string() const;

  auto operator<=>(const Ipv4Address&) const = default;

 private:
  std::uint32_t value_{};
};

/// Address plus prefix length. Equality is on the masked network, so
/// 10.0.0.7/24 == 10.0.0.0/24.
class Ipv4Prefix {
 public:
  Ipv4Prefix() = default;
  Ipv4Prefix(Ipv4Address address, std::uint8_t length);

  /// "a.b.c.d" (implies /32) or "a.b.c.d/len".
  static Ipv4Prefix parse(std::string_view text);

  Ipv4Address network() const { return network_; }
  std::uint8_t length() const { return length_; }
  bool contains(Ipv4Address address) const;
  std::string to_string() const;

  auto operator<=>(const Ipv4Prefix&) const = default;

 private:
  Ipv4Address network_{};
  std::uint8_t length_{32};
};

}  // namespace umbrella

template <>
struct std::hash<umbrella::DeviceId> {
  std::size_t operator()(const umbrella::DeviceId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.dpid);
  }
};

template <>
struct std::hash<umbrella::PortId> {
  std::size_t operator()(const umbrella::PortId& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.device.dpid * 0x9e3779b97f4a7c15ULL ^ p.port_no);
  }
};

template <>
struct std::hash<umbrella::MacAddress> {
  std::size_t operator()(const umbrella::MacAddress& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.to_u64());
  }
};
