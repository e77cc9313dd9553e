// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/flow.hpp"

#include <array>
#include <utility>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella {

namespace reserved_port {

namespace {
constexpr std::array<std::pair<std::uint32_t, std::string_view>, 7> kNames{{
    {kInPort, "IN_PORT"},
    {kTable, "TABLE"},
    {kNormal, "NORMAL"},
    {kFlood, "FLOOD"},
    {kAll, "ALL"},
    {kController, "CONTROLLER"},
    {kLocal, "LOCAL"},
}};
}  // namespace

std::optional<std::string> name_of(std::uint32_t port_no) {
  for (const auto& [number, name] : kNames) {
    if (number == port_no) return std::string(name);
  }
  return std::nullopt;
}

std::optional<std::uint32_t> from_name(std::string_view name) {
  for (const auto& [number, n] : kNames) {
    if (n == name) return number;
  }
  return std::nullopt;
}

}  // namespace reserved_port

void validate_rule(const FlowRule& rule) {
  int outputs = 0;
  bool drop = false;
  for (const auto& a : rule.actions) {
    if (std::holds_alternative<Output>(a)) ++outputs;
    if (std::holds_alternative<Drop>(a)) drop = true;
  }
  if (outputs > 1) throw InvalidRule("action list has more than one Output");
  if (drop && rule.actions.size() > 1) throw InvalidRule("Drop must be the only action");
  if (rule.match.has_ipv4() && rule.match.eth_type && *rule.match.eth_type != kEthTypeIpv4) {
    throw InvalidRule(fmt::format("ipv4 match with eth_type 0x{:04x}", *rule.match.eth_type));
  }
  if (rule.match.in_port && *rule.match.in_port == 0) throw InvalidRule("in_port 0");
}

FlowRule canonical(const FlowRule& rule) {
  FlowRule out = rule;
  if (out.match.has_ipv4() && !out.match.eth_type) out.match.eth_type = kEthTypeIpv4;
  if (out.actions.empty()) out.actions.emplace_back(Drop{});
  return out;
}

bool semantically_equal(const FlowRule& a, const FlowRule& b) { return canonical(a) == canonical(b); }

FlowKey FlowKey::of(const FlowRule& rule) {
  const auto c = canonical(rule);
  return FlowKey{c.device, c.table_id, c.priority, c.match};
}

bool flow_matches(const MatchFields& m, const PacketDescriptor& p) {
  if (m.in_port && *m.in_port != p.in_port) return false;
  if (m.eth_src && *m.eth_src != p.eth_src) return false;
  if (m.eth_dst && *m.eth_dst != p.eth_dst) return false;
  if (m.eth_type && *m.eth_type != p.eth_type) return false;
  if (m.has_ipv4() && p.eth_type != kEthTypeIpv4) return false;
  if (m.ipv4_src && !m.ipv4_src->contains(p.ipv4_src)) return false;
  if (m.ipv4_dst && !m.ipv4_dst->contains(p.ipv4_dst)) return false;
  return true;
}

bool flow_matches(const FlowRule& rule, const PacketDescriptor& packet) {
  return flow_matches(rule.match, packet);
}

std::string to_string(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Output>) {
          if (auto name = reserved_port::name_of(a.port)) return "output:" + *name;
          return fmt::format("output:{}", a.port);
        } else if constexpr (std::is_same_v<T, Drop>) {
          return "drop";
        } else {
          return "set_eth_dst:" + a.mac.to_string();
        }
      },
      action);
}

std::string to_string(const FlowRule& rule) {
  std::string match;
  auto add = [&](std::string_view key, const std::string& value) {
    if (!match.empty()) match += ',';
    match += fmt::format("{}={}", key, value);
  };
  const auto& m = rule.match;
  if (m.in_port) add("in_port", std::to_string(*m.in_port));
  if (m.eth_src) add("eth_src", m.eth_src->to_string());
  if (m.eth_dst) add("eth_dst", m.eth_dst->to_string());
  if (m.eth_type) add("eth_type", fmt::format("0x{:04x}", *m.eth_type));
  if (m.ipv4_src) add("ipv4_src", m.ipv4_src->to_string());
  if (m.ipv4_dst) add("ipv4_dst", m.ipv4_dst->to_string());
  std::string actions;
  for (const auto& a : rule.actions) {
    if (!actions.empty()) actions += ',';
    actions += to_string(a);
  }
  return fmt::format("device={} table={} priority={} match[{}] actions[{}] idle={} hard={}",
                     render_onos(rule.device), rule.table_id, rule.priority, match, actions,
                     rule.idle_timeout_s, rule.hard_timeout_s);
}

}  // namespace umbrella
