// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/ids.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella {

namespace {

template <typename T>
bool parse_unsigned(std::string_view text, int base, T& out) {
  if (text.empty()) return false;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out, base);
  return ec == std::errc{} && ptr == last;
}

bool all_hex(std::string_view text) {
  for (char c : text) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    if (!ok) return false;
  }
  return true;
}

bool all_digits(std::string_view text) {
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return !text.empty();
}

}  // namespace

DeviceId normalize_device_id(std::string_view text) {
  constexpr std::string_view kOnos = "of:";
  constexpr std::string_view kOdl = "openflow:";
  std::uint64_t value = 0;
  if (text.starts_with(kOnos)) {
    auto hex = text.substr(kOnos.size());
    if (hex.size() == 16 && all_hex(hex) && parse_unsigned(hex, 16, value)) return DeviceId{value};
  } else if (text.starts_with(kOdl)) {
    auto dec = text.substr(kOdl.size());
    if (all_digits(dec) && parse_unsigned(dec, 10, value)) return DeviceId{value};
  } else if (all_digits(text) && parse_unsigned(text, 10, value)) {
    return DeviceId{value};
  }
  throw MalformedId(fmt::format("not a datapath identifier: '{}'", text));
}

std::string render_onos(DeviceId id) { return fmt::format("of:{:016x}", id.dpid); }

std::string render_odl(DeviceId id) { return fmt::format("openflow:{}", id.dpid); }

MacAddress MacAddress::parse(std::string_view text) {
  std::array<std::uint8_t, 6> octets{};
  if (text.size() != 17) throw MalformedValue(fmt::format("bad MAC address '{}'", text));
  for (std::size_t i = 0; i < 6; ++i) {
    auto part = text.substr(i * 3, 2);
    if (i < 5) {
      const char sep = text[i * 3 + 2];
      if (sep != ':' && sep != '-') throw MalformedValue(fmt::format("bad MAC address '{}'", text));
    }
    if (!all_hex(part) || !parse_unsigned(part, 16, octets[i])) {
      throw MalformedValue(fmt::format("bad MAC address '{}'", text));
    }
  }
  return MacAddress{octets};
}

MacAddress MacAddress::from_u64(std::uint64_t value) {
  std::array<std::uint8_t, 6> octets{};
  for (int i = 5; i >= 0; --i) {
    octets[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value & 0xff);
    value >>= 8;
  }
  return MacAddress{octets};
}

std::uint64_t MacAddress::to_u64() const {
  std::uint64_t value = 0;
  for (auto o : octets_) value = (value << 8) | o;
  return value;
}

std::string MacAddress::to_string(bool upper) const {
  const auto& o = octets_;
  if (upper) {
    return fmt::format("{:02X}:{:02X}:{:02X}:{:02X}:{:02X}:{:02X}", o[0], o[1], o[2], o[3], o[4], o[5]);
  }
  return fmt::format("{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}", o[0], o[1], o[2], o[3], o[4], o[5]);
}

Ipv4Address Ipv4Address::parse(std::string_view text) {
  std::uint32_t value = 0;
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const auto dot = text.find('.', start);
    const bool last = i == 3;
    if (last != (dot == std::string_view::npos)) throw MalformedValue(fmt::format("bad IPv4 address '{}'", text));
    auto part = text.substr(start, last ? std::string_view::npos : dot - start);
    unsigned octet = 0;
    if (part.size() > 3 || !all_digits(part) || !parse_unsigned(part, 10, octet) || octet > 255) {
      throw MalformedValue(fmt::format("bad IPv4 address '{}'", text));
    }
    value = (value << 8) | octet;
    start = dot + 1;
  }
  return Ipv4Address{value};
}

std::string Ipv4Address::to_string() const {
  return fmt::format("{}.{}.{}.{}", value_ >> 24, (value_ >> 16) & 0xff, (value_ >> 8) & 0xff, value_ & 0xff);
}

namespace {
std::uint32_t prefix_mask(std::uint8_t length) {
  return length == 0 ? 0u : ~0u << (32 - length);
}
}  // namespace

Ipv4Prefix::Ipv4Prefix(Ipv4Address address, std::uint8_t length) : length_(length) {
  if (length > 32) throw MalformedValue(fmt::format("prefix length {} > 32", length));
  network_ = Ipv4Address{address.value() & prefix_mask(length)};
}

Ipv4Prefix Ipv4Prefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Ipv4Prefix{Ipv4Address::parse(text), 32};
  unsigned length = 0;
  auto len_text = text.substr(slash + 1);
  if (!all_digits(len_text) || !parse_unsigned(len_text, 10, length) || length > 32) {
    throw MalformedValue(fmt::format("bad IPv4 prefix '{}'", text));
  }
  return Ipv4Prefix{Ipv4Address::parse(text.substr(0, slash)), static_cast<std::uint8_t>(length)};
}

bool Ipv4Prefix::contains(Ipv4Address address) const {
  return (address.value() & prefix_mask(length_)) == network_.value();
}

std::string Ipv4Prefix::to_string() const {
  return fmt::format("{}/{}", network_.to_string(), length_);
}

}  // namespace umbrella
