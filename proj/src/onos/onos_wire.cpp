// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <set>

#include "driver/wire_util.hpp"
#include "umbrella/error.hpp"
#include "umbrella/onos/onos_driver.hpp"

namespace umbrella::onos {

using detail::counter_member;
using detail::json;
using detail::member;
using detail::parse_body;
using detail::protocol_error;
using detail::string_member;

namespace {

[[noreturn]] void unsupported(std::string detail) { throw DriverError(DriverErrorKind::Unsupported, std::move(detail)); }

std::string port_name(std::uint32_t port_no) {
  if (auto name = reserved_port::name_of(port_no)) return *name;
  return std::to_string(port_no);
}

std::uint32_t parse_port(const json& v, std::string_view what) {
  if (v.is_number_unsigned()) return v.get<std::uint32_t>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (auto reserved = reserved_port::from_name(s)) return *reserved;
    if (!s.empty() && s.size() <= 10 && s.find_first_not_of("0123456789") == std::string::npos) {
      const auto n = std::stoull(s);
      if (n <= 0xffffffffULL) return static_cast<std::uint32_t>(n);
    }
  }
  protocol_error(fmt::format("{}: bad port {}", what, v.dump()));
}

DeviceId parse_device(const json& v, std::string_view what) {
  if (!v.is_string()) protocol_error(fmt::format("{}: device id is not a string", what));
  try {
    return normalize_device_id(v.get<std::string>());
  } catch (const MalformedId& e) {
    protocol_error(fmt::format("{}: {}", what, e.what()));
  }
}

MacAddress parse_mac(const json& v, std::string_view what) {
  try {
    return MacAddress::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    protocol_error(fmt::format("{}: bad MAC {}", what, v.dump()));
  }
}

std::uint16_t parse_eth_type(const json& v) {
  try {
    if (v.is_number_unsigned()) return static_cast<std::uint16_t>(v.get<std::uint32_t>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      const bool hex = s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0;
      std::size_t used = 0;
      const auto n = std::stoul(hex ? s.substr(2) : s, &used, hex ? 16 : 10);
      if (used == s.size() - (hex ? 2 : 0) && n <= 0xffff) return static_cast<std::uint16_t>(n);
    }
  } catch (const std::exception&) {
  }
  protocol_error(fmt::format("bad ethType {}", v.dump()));
}

Ipv4Prefix parse_prefix(const json& v) {
  try {
    return Ipv4Prefix::parse(v.get<std::string>());
  } catch (const std::exception&) {
    protocol_error(fmt::format("bad ip {}", v.dump()));
  }
}

json render_criteria(const MatchFields& m) {
  json criteria = json::array();
  if (m.in_port) criteria.push_back({{"type", "IN_PORT"}, {"port", *m.in_port}});
  if (m.eth_dst) criteria.push_back({{"type", "ETH_DST"}, {"mac", m.eth_dst->to_string(true)}});
  if (m.eth_src) criteria.push_back({{"type", "ETH_SRC"}, {"mac", m.eth_src->to_string(true)}});
  if (m.eth_type) criteria.push_back({{"type", "ETH_TYPE"}, {"ethType", fmt::format("0x{:x}", *m.eth_type)}});
  if (m.ipv4_src) criteria.push_back({{"type", "IPV4_SRC"}, {"ip", m.ipv4_src->to_string()}});
  if (m.ipv4_dst) criteria.push_back({{"type", "IPV4_DST"}, {"ip", m.ipv4_dst->to_string()}});
  return criteria;
}

json render_instructions(const std::vector<Action>& actions) {
  json out = json::array();
  for (const auto& a : actions) {
    if (const auto* o = std::get_if<Output>(&a)) {
      out.push_back({{"type", "OUTPUT"}, {"port", port_name(o->port)}});
    } else if (std::holds_alternative<Drop>(a)) {
      out.push_back({{"type", "NOACTION"}});
    } else if (const auto* s = std::get_if<SetEthDst>(&a)) {
      out.push_back({{"type", "L2MODIFICATION"}, {"subtype", "ETH_DST"}, {"mac", s->mac.to_string(true)}});
    }
  }
  return out;
}

MatchFields parse_criteria(const json& selector) {
  MatchFields m;
  if (selector.is_null()) return m;
  const auto& criteria = member(selector, "criteria", "selector");
  if (!criteria.is_array()) protocol_error("selector.criteria is not an array");
  for (const auto& c : criteria) {
    const auto type = string_member(c, "type", "criterion");
    if (type == "IN_PORT") {
      m.in_port = parse_port(member(c, "port", "IN_PORT"), "IN_PORT");
    } else if (type == "ETH_DST") {
      m.eth_dst = parse_mac(member(c, "mac", "ETH_DST"), "ETH_DST");
    } else if (type == "ETH_SRC") {
      m.eth_src = parse_mac(member(c, "mac", "ETH_SRC"), "ETH_SRC");
    } else if (type == "ETH_TYPE") {
      m.eth_type = parse_eth_type(member(c, "ethType", "ETH_TYPE"));
    } else if (type == "IPV4_SRC") {
      m.ipv4_src = parse_prefix(member(c, "ip", "IPV4_SRC"));
    } else if (type == "IPV4_DST") {
      m.ipv4_dst = parse_prefix(member(c, "ip", "IPV4_DST"));
    } else {
      unsupported("criterion " + type);
    }
  }
  return m;
}

std::vector<Action> parse_treatment(const json& treatment) {
  std::vector<Action> actions;
  if (treatment.is_null()) return actions;
  const auto& instructions = member(treatment, "instructions", "treatment");
  if (!instructions.is_array()) protocol_error("treatment.instructions is not an array");
  for (const auto& i : instructions) {
    const auto type = string_member(i, "type", "instruction");
    if (type == "OUTPUT") {
      actions.emplace_back(Output{parse_port(member(i, "port", "OUTPUT"), "OUTPUT")});
    } else if (type == "NOACTION") {
      actions.emplace_back(Drop{});
    } else if (type == "L2MODIFICATION" && i.value("subtype", "") == "ETH_DST") {
      actions.emplace_back(SetEthDst{parse_mac(member(i, "mac", "L2MODIFICATION"), "L2MODIFICATION")});
    } else {
      unsupported("instruction " + type);
    }
  }
  return actions;
}

FlowEntry parse_flow_json(const json& f) {
  FlowEntry entry;
  auto& r = entry.rule;
  r.device = parse_device(member(f, "deviceId", "flow"), "flow");
  const auto table = counter_member(f, "tableId", "flow");
  const auto priority = counter_member(f, "priority", "flow");
  if (table > 0xff || priority > 0xffff) protocol_error("flow tableId/priority out of range");
  r.table_id = static_cast<std::uint8_t>(table);
  r.priority = static_cast<std::uint16_t>(priority);
  const bool permanent = f.value("isPermanent", true);
  if (!permanent) {
    r.idle_timeout_s = static_cast<std::uint32_t>(counter_member(f, "timeout", "flow"));
    r.hard_timeout_s = static_cast<std::uint32_t>(counter_member(f, "hardTimeout", "flow"));
  }
  r.match = parse_criteria(f.contains("selector") ? f["selector"] : json());
  r.actions = parse_treatment(f.contains("treatment") ? f["treatment"] : json());
  if (r.actions.empty()) r.actions.emplace_back(Drop{});
  try {
    validate_rule(r);
  } catch (const InvalidRule& e) {
    unsupported(e.what());
  }
  entry.handle.device = r.device;
  if (auto it = f.find("id"); it != f.end()) {
    entry.handle.driver_flow_id = it->is_string() ? it->get<std::string>() : it->dump();
  }
  return entry;
}

const json& array_member(const json& body, std::string_view key, std::string_view what) {
  const auto& arr = member(body, key, what);
  if (!arr.is_array()) protocol_error(fmt::format("{}.{} is not an array", what, key));
  return arr;
}

}  // namespace

OnosEndpoints OnosEndpoints::from_config(const DriverConfig& config) {
  OnosEndpoints e;
  auto take = [&](const char* field, std::string& slot) {
    if (auto v = config.extra(std::string("onos.path.") + field)) slot = *v;
  };
  take("devices", e.devices);
  take("links", e.links);
  take("hosts", e.hosts);
  take("flows", e.flows);
  take("flow_of_device", e.flow_of_device);
  take("stats_ports", e.stats_ports);
  return e;
}

std::string onos_render_flow(const FlowRule& input) {
  validate_rule(input);
  const auto rule = canonical(input);
  const bool permanent = rule.idle_timeout_s == 0 && rule.hard_timeout_s == 0;
  json body{
      {"deviceId", render_onos(rule.device)},
      {"tableId", rule.table_id},
      {"priority", rule.priority},
      {"isPermanent", permanent},
      {"timeout", rule.idle_timeout_s},
      {"selector", {{"criteria", render_criteria(rule.match)}}},
      {"treatment", {{"instructions", render_instructions(rule.actions)}}},
  };
  if (rule.hard_timeout_s != 0) body["hardTimeout"] = rule.hard_timeout_s;
  return body.dump();
}

FlowEntry onos_parse_flow(std::string_view flow_object) { return parse_flow_json(parse_body(flow_object, "flow")); }

TopologySnapshot onos_parse_topology(std::string_view devices_body, std::string_view links_body,
                                     std::string_view hosts_body, std::int64_t captured_at_ns) {
  const auto devices_json = parse_body(devices_body, "devices body");
  const auto links_json = parse_body(links_body, "links body");
  const auto hosts_json = parse_body(hosts_body, "hosts body");

  std::set<DeviceId> known;
  std::map<DeviceId, std::set<std::uint32_t>> available;
  for (const auto& d : array_member(devices_json, "devices", "devices body")) {
    const auto id = parse_device(member(d, "id", "device"), "device");
    known.insert(id);
    if (d.value("available", true)) available[id];
  }
  auto usable = [&](const PortId& p, std::string_view what) {
    if (!known.count(p.device)) protocol_error(fmt::format("{} references unknown device {}", what, render_onos(p.device)));
    return available.count(p.device) != 0;
  };

  std::vector<Link> links;
  for (const auto& l : array_member(links_json, "links", "links body")) {
    if (l.value("state", "ACTIVE") != "ACTIVE") continue;
    const auto& s = member(l, "src", "link");
    const auto& d = member(l, "dst", "link");
    const Link link{PortId{parse_device(member(s, "device", "link.src"), "link.src"), parse_port(member(s, "port", "link.src"), "link.src")},
                    PortId{parse_device(member(d, "device", "link.dst"), "link.dst"), parse_port(member(d, "port", "link.dst"), "link.dst")}};
    const bool src_ok = usable(link.src, "link");
    const bool dst_ok = usable(link.dst, "link");
    if (!src_ok || !dst_ok) continue;
    available[link.src.device].insert(link.src.port_no);
    available[link.dst.device].insert(link.dst.port_no);
    links.push_back(link);
  }

  std::vector<Host> hosts;
  for (const auto& h : array_member(hosts_json, "hosts", "hosts body")) {
    const json* location = nullptr;
    if (auto it = h.find("locations"); it != h.end() && it->is_array() && !it->empty()) {
      location = &it->front();
    } else if (auto it2 = h.find("location"); it2 != h.end() && it2->is_object()) {
      location = &*it2;
    }
    if (location == nullptr) protocol_error("host without location");
    const PortId at{parse_device(member(*location, "elementId", "host location"), "host location"),
                    parse_port(member(*location, "port", "host location"), "host location")};
    if (!usable(at, "host")) continue;
    Host host{parse_mac(member(h, "mac", "host"), "host"), std::nullopt, at};
    if (auto ips = h.find("ipAddresses"); ips != h.end() && ips->is_array()) {
      for (const auto& ip : *ips) {
        if (!ip.is_string()) continue;
        try {
          host.ip = Ipv4Address::parse(ip.get<std::string>());
          break;
        } catch (const MalformedValue&) {
          // IPv6 or garbage; keep looking for an IPv4 address.
        }
      }
    }
    available[at.device].insert(at.port_no);
    hosts.push_back(host);
  }

  std::vector<Device> devices;
  for (const auto& [id, ports] : available) devices.push_back(Device{id, {ports.begin(), ports.end()}});
  try {
    return TopologySnapshot::create(std::move(devices), std::move(links), std::move(hosts), captured_at_ns);
  } catch (const InvalidTopology& e) {
    protocol_error(e.what());
  }
}

std::vector<FlowEntry> onos_parse_flows(std::string_view body) {
  const auto j = parse_body(body, "flows body");
  std::vector<FlowEntry> out;
  for (const auto& f : array_member(j, "flows", "flows body")) {
    const auto state = f.value("state", "ADDED");
    if (state == "PENDING_REMOVE" || state == "REMOVED") continue;
    try {
      out.push_back(parse_flow_json(f));
    } catch (const DriverError& e) {
      if (e.kind() != DriverErrorKind::Unsupported) throw;
    }
  }
  return out;
}

FlowStats onos_parse_flow_stats(std::string_view body, const FlowHandle& handle) {
  const auto j = parse_body(body, "flow body");
  const json* flow = &j;
  if (auto it = j.find("flows"); it != j.end()) {
    if (!it->is_array() || it->empty()) throw DriverError(DriverErrorKind::NotFound, handle.driver_flow_id);
    flow = &it->front();
  }
  FlowStats s{handle, counter_member(*flow, "packets", "flow"), counter_member(*flow, "bytes", "flow"), 0};
  s.duration_s = static_cast<std::uint32_t>(counter_member(*flow, "life", "flow"));
  return s;
}

std::vector<PortStats> onos_parse_port_stats(std::string_view body) {
  const auto j = parse_body(body, "port statistics body");
  std::vector<PortStats> out;
  for (const auto& dev : array_member(j, "statistics", "port statistics body")) {
    const auto device = parse_device(member(dev, "device", "statistics"), "statistics");
    for (const auto& p : array_member(dev, "ports", "statistics")) {
      PortStats s;
      s.port = PortId{device, parse_port(member(p, "port", "port statistics"), "port statistics")};
      s.rx_packets = counter_member(p, "packetsReceived", "port statistics");
      s.tx_packets = counter_member(p, "packetsSent", "port statistics");
      s.rx_bytes = counter_member(p, "bytesReceived", "port statistics");
      s.tx_bytes = counter_member(p, "bytesSent", "port statistics");
      out.push_back(s);
    }
  }
  return out;
}

std::string onos_flow_id_from_response(const std::optional<std::string>& location, std::string_view body) {
  if (location) {
    std::string_view loc = *location;
    while (!loc.empty() && loc.back() == '/') loc.remove_suffix(1);
    const auto slash = loc.rfind('/');
    auto id = slash == std::string_view::npos ? loc : loc.substr(slash + 1);
    if (!id.empty()) return std::string(id);
  }
  if (!body.empty()) {
    const auto j = parse_body(body, "install response");
    if (auto it = j.find("flows"); it != j.end() && it->is_array() && !it->empty()) {
      const auto& f = it->front();
      for (const char* key : {"flowId", "id"}) {
        if (auto id = f.find(key); id != f.end()) return id->is_string() ? id->get<std::string>() : id->dump();
      }
    }
  }
  protocol_error("install response carries no flow id");
}

}  // namespace umbrella::onos
