// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/json_codec.hpp"

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella::codec {

namespace {

json port_json(PortId p) { return json{{"device", render_onos(p.device)}, {"port", p.port_no}}; }

json link_json(const Link& l) { return json{{"src", port_json(l.src)}, {"dst", port_json(l.dst)}}; }

json host_json(const Host& h) {
  json j{{"mac", h.mac.to_string()}, {"device", render_onos(h.attachment.device)}, {"port", h.attachment.port_no}};
  if (h.ip) j["ip"] = h.ip->to_string();
  return j;
}

json action_json(const Action& a) {
  if (const auto* out = std::get_if<Output>(&a)) {
    if (auto name = reserved_port::name_of(out->port)) return json{{"output", *name}};
    return json{{"output", out->port}};
  }
  if (const auto* set = std::get_if<SetEthDst>(&a)) return json{{"set_eth_dst", set->mac.to_string()}};
  return json{{"drop", true}};
}

Action action_from_json(const json& j) {
  if (j.contains("output")) {
    const auto& port = j.at("output");
    if (port.is_string()) {
      auto number = reserved_port::from_name(port.get<std::string>());
      if (!number) throw InvalidRule("unknown reserved port " + port.get<std::string>());
      return Output{*number};
    }
    return Output{port.get<std::uint32_t>()};
  }
  if (j.contains("set_eth_dst")) return SetEthDst{MacAddress::parse(j.at("set_eth_dst").get<std::string>())};
  if (j.contains("drop")) return Drop{};
  throw InvalidRule("unknown action " + j.dump());
}

}  // namespace

json to_json(const FlowRule& rule) {
  json match = json::object();
  const auto& m = rule.match;
  if (m.in_port) match["in_port"] = *m.in_port;
  if (m.eth_src) match["eth_src"] = m.eth_src->to_string();
  if (m.eth_dst) match["eth_dst"] = m.eth_dst->to_string();
  if (m.eth_type) match["eth_type"] = *m.eth_type;
  if (m.ipv4_src) match["ipv4_src"] = m.ipv4_src->to_string();
  if (m.ipv4_dst) match["ipv4_dst"] = m.ipv4_dst->to_string();
  json actions = json::array();
  for (const auto& a : rule.actions) actions.push_back(action_json(a));
  return json{{"device", render_onos(rule.device)},
              {"table_id", rule.table_id},
              {"priority", rule.priority},
              {"match", match},
              {"actions", actions},
              {"idle_timeout_s", rule.idle_timeout_s},
              {"hard_timeout_s", rule.hard_timeout_s}};
}

FlowRule flow_rule_from_json(const json& j) {
  try {
    FlowRule rule;
    const auto& dev = j.at("device");
    rule.device = dev.is_number_unsigned() ? DeviceId{dev.get<std::uint64_t>()}
                                           : normalize_device_id(dev.get<std::string>());
    rule.table_id = j.value<std::uint8_t>("table_id", 0);
    const auto priority = j.value<std::int64_t>("priority", 0);
    if (priority < 0 || priority > 65535) throw InvalidRule(fmt::format("priority {} out of range", priority));
    rule.priority = static_cast<std::uint16_t>(priority);
    const auto match = j.value("match", json::object());
    auto& m = rule.match;
    if (match.contains("in_port")) m.in_port = match.at("in_port").get<std::uint32_t>();
    if (match.contains("eth_src")) m.eth_src = MacAddress::parse(match.at("eth_src").get<std::string>());
    if (match.contains("eth_dst")) m.eth_dst = MacAddress::parse(match.at("eth_dst").get<std::string>());
    if (match.contains("eth_type")) m.eth_type = match.at("eth_type").get<std::uint16_t>();
    if (match.contains("ipv4_src")) m.ipv4_src = Ipv4Prefix::parse(match.at("ipv4_src").get<std::string>());
    if (match.contains("ipv4_dst")) m.ipv4_dst = Ipv4Prefix::parse(match.at("ipv4_dst").get<std::string>());
    for (const auto& a : j.value("actions", json::array())) rule.actions.push_back(action_from_json(a));
    rule.idle_timeout_s = j.value<std::uint32_t>("idle_timeout_s", 0);
    rule.hard_timeout_s = j.value<std::uint32_t>("hard_timeout_s", 0);
    validate_rule(rule);
    return rule;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidRule(fmt::format("flow rule json: {}", e.what()));
  } catch (const MalformedValue& e) {
    throw InvalidRule(e.what());
  } catch (const MalformedId& e) {
    throw InvalidRule(e.what());
  }
}

json to_json(const FlowHandle& handle) {
  return json{{"device", render_onos(handle.device)}, {"id", handle.driver_flow_id}};
}

json to_json(const FlowStats& stats) {
  return json{{"handle", to_json(stats.handle)},
              {"packets", stats.packets},
              {"bytes", stats.bytes},
              {"duration_s", stats.duration_s}};
}

json to_json(const PortStats& stats) {
  return json{{"port", port_json(stats.port)},
              {"rx_packets", stats.rx_packets},
              {"tx_packets", stats.tx_packets},
              {"rx_bytes", stats.rx_bytes},
              {"tx_bytes", stats.tx_bytes}};
}

json to_json(const TopologySnapshot& snapshot) {
  json devices = json::array();
  for (const auto& d : snapshot.devices()) devices.push_back(json{{"id", render_onos(d.id)}, {"ports", d.ports}});
  json links = json::array();
  for (const auto& l : snapshot.links()) links.push_back(link_json(l));
  json hosts = json::array();
  for (const auto& h : snapshot.hosts()) hosts.push_back(host_json(h));
  return json{{"devices", devices}, {"links", links}, {"hosts", hosts}, {"captured_at_ns", snapshot.captured_at_ns()}};
}

json to_json(const TopologyEvent& event) {
  json j{{"observed_at_ns", event.observed_at_ns}};
  std::visit(
      [&j](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, DeviceAdded> || std::is_same_v<T, DeviceUpdated>) {
          j["type"] = std::is_same_v<T, DeviceAdded> ? "DeviceAdded" : "DeviceUpdated";
          j["device"] = json{{"id", render_onos(e.device.id)}, {"ports", e.device.ports}};
        } else if constexpr (std::is_same_v<T, DeviceRemoved>) {
          j["type"] = "DeviceRemoved";
          j["device"] = render_onos(e.id);
        } else if constexpr (std::is_same_v<T, LinkAdded>) {
          j["type"] = "LinkAdded";
          j["link"] = link_json(e.link);
        } else if constexpr (std::is_same_v<T, LinkRemoved>) {
          j["type"] = "LinkRemoved";
          j["link"] = link_json(e.link);
        } else if constexpr (std::is_same_v<T, HostAdded>) {
          j["type"] = "HostAdded";
          j["host"] = host_json(e.host);
        } else {
          j["type"] = "HostRemoved";
          j["host"] = host_json(e.host);
        }
      },
      event.change);
  return j;
}

}  // namespace umbrella::codec
