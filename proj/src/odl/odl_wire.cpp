// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <set>

#include <openssl/evp.h>

#include "driver/wire_util.hpp"
#include "umbrella/error.hpp"
#include "umbrella/odl/odl_driver.hpp"

namespace umbrella::odl {

using detail::counter_member;
using detail::json;
using detail::member;
using detail::parse_body;
using detail::protocol_error;
using detail::string_member;

namespace {

[[noreturn]] void unsupported(std::string detail) { throw DriverError(DriverErrorKind::Unsupported, std::move(detail)); }

constexpr std::string_view kOpenflow = "openflow:";
constexpr std::string_view kHost = "host:";

/// ODL spells OpenFlow reserved ports without underscores.
std::optional<std::string> odl_reserved_name(std::uint32_t port) {
  if (port == reserved_port::kInPort) return "INPORT";
  return reserved_port::name_of(port);
}

std::optional<std::uint32_t> odl_reserved_port(std::string_view name) {
  if (name == "INPORT") return reserved_port::kInPort;
  return reserved_port::from_name(name);
}

std::optional<std::uint32_t> decimal_u32(std::string_view s) {
  if (s.empty() || s.size() > 10 || s.find_first_not_of("0123456789") != std::string_view::npos) return std::nullopt;
  const auto n = std::stoull(std::string(s));
  if (n > 0xffffffffULL) return std::nullopt;
  return static_cast<std::uint32_t>(n);
}

/// "openflow:D" -> D.
std::optional<DeviceId> switch_node(std::string_view node_id) {
  if (node_id.rfind(kOpenflow, 0) != 0 || node_id.find(':', kOpenflow.size()) != std::string_view::npos) {
    return std::nullopt;
  }
  try {
    return normalize_device_id(node_id);
  } catch (const MalformedId&) {
    return std::nullopt;
  }
}

/// "openflow:D:P" -> (D, P); reserved names map to reserved numbers.
std::optional<PortId> termination_point(std::string_view tp) {
  const auto colon = tp.rfind(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto device = switch_node(tp.substr(0, colon));
  if (!device) return std::nullopt;
  const auto suffix = tp.substr(colon + 1);
  if (auto n = decimal_u32(suffix)) return PortId{*device, *n};
  if (auto r = odl_reserved_port(suffix)) return PortId{*device, *r};
  return std::nullopt;
}

std::uint32_t parse_connector(const json& v, std::string_view what) {
  std::string s;
  if (v.is_number_unsigned()) return v.get<std::uint32_t>();
  if (v.is_string()) s = v.get<std::string>();
  std::string_view text = s;
  if (text.rfind(kOpenflow, 0) == 0) {
    if (auto tp = termination_point(text)) return tp->port_no;
  } else {
    if (auto n = decimal_u32(text)) return *n;
    if (auto r = odl_reserved_port(text)) return *r;
  }
  protocol_error(fmt::format("{}: bad node connector {}", what, v.dump()));
}

MacAddress parse_mac(const json& v, std::string_view what) {
  try {
    return MacAddress::parse(v.get<std::string>());
  } catch (const std::exception&) {
    protocol_error(fmt::format("{}: bad MAC {}", what, v.dump()));
  }
}

Ipv4Prefix parse_prefix(const json& v) {
  try {
    return Ipv4Prefix::parse(v.get<std::string>());
  } catch (const std::exception&) {
    protocol_error(fmt::format("bad ipv4 prefix {}", v.dump()));
  }
}

std::string connector_name(std::uint32_t port) {
  if (auto name = odl_reserved_name(port)) return *name;
  return std::to_string(port);
}

json render_match(const FlowRule& rule) {
  const auto& m = rule.match;
  json match = json::object();
  if (m.in_port) match["in-port"] = fmt::format("{}:{}", render_odl(rule.device), connector_name(*m.in_port));
  json eth = json::object();
  if (m.eth_type) eth["ethernet-type"] = {{"type", *m.eth_type}};
  if (m.eth_src) eth["ethernet-source"] = {{"address", m.eth_src->to_string()}};
  if (m.eth_dst) eth["ethernet-destination"] = {{"address", m.eth_dst->to_string()}};
  if (!eth.empty()) match["ethernet-match"] = eth;
  if (m.ipv4_src) match["ipv4-source"] = m.ipv4_src->to_string();
  if (m.ipv4_dst) match["ipv4-destination"] = m.ipv4_dst->to_string();
  return match;
}

json render_actions(const std::vector<Action>& actions) {
  json out = json::array();
  int order = 0;
  for (const auto& a : actions) {
    json entry{{"order", order++}};
    if (const auto* o = std::get_if<Output>(&a)) {
      entry["output-action"] = {{"output-node-connector", connector_name(o->port)}, {"max-length", 65535}};
    } else if (std::holds_alternative<Drop>(a)) {
      entry["drop-action"] = json::object();
    } else if (const auto* s = std::get_if<SetEthDst>(&a)) {
      entry["set-field"] = {{"ethernet-match", {{"ethernet-destination", {{"address", s->mac.to_string()}}}}}};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

MatchFields parse_match(const json& match) {
  MatchFields m;
  if (match.is_null()) return m;
  if (!match.is_object()) protocol_error("flow match is not an object");
  for (const auto& [key, value] : match.items()) {
    if (key == "in-port") {
      m.in_port = parse_connector(value, "in-port");
    } else if (key == "ethernet-match") {
      for (const auto& [ekey, evalue] : value.items()) {
        if (ekey == "ethernet-type") {
          const auto type = counter_member(evalue, "type", "ethernet-type");
          if (type > 0xffff) protocol_error("ethernet-type out of range");
          m.eth_type = static_cast<std::uint16_t>(type);
        } else if (ekey == "ethernet-source") {
          m.eth_src = parse_mac(member(evalue, "address", "ethernet-source"), "ethernet-source");
        } else if (ekey == "ethernet-destination") {
          m.eth_dst = parse_mac(member(evalue, "address", "ethernet-destination"), "ethernet-destination");
        } else {
          unsupported("ethernet-match." + ekey);
        }
      }
    } else if (key == "ipv4-source") {
      m.ipv4_src = parse_prefix(value);
    } else if (key == "ipv4-destination") {
      m.ipv4_dst = parse_prefix(value);
    } else {
      unsupported("match field " + key);
    }
  }
  return m;
}

std::vector<const json*> by_order(const json& arr, std::string_view what) {
  if (!arr.is_array()) protocol_error(fmt::format("{} is not an array", what));
  std::vector<const json*> items;
  for (const auto& item : arr) items.push_back(&item);
  std::stable_sort(items.begin(), items.end(),
                   [](const json* a, const json* b) { return a->value("order", 0) < b->value("order", 0); });
  return items;
}

std::vector<Action> parse_instructions(const json& instructions) {
  std::vector<Action> actions;
  if (instructions.is_null()) return actions;
  for (const json* ins : by_order(member(instructions, "instruction", "instructions"), "instruction")) {
    if (!ins->contains("apply-actions")) unsupported("instruction " + ins->dump());
    const auto& apply = (*ins)["apply-actions"];
    if (!apply.contains("action")) continue;
    for (const json* a : by_order(apply["action"], "action")) {
      if (auto it = a->find("output-action"); it != a->end()) {
        actions.emplace_back(Output{parse_connector(member(*it, "output-node-connector", "output-action"), "output-action")});
      } else if (a->contains("drop-action")) {
        actions.emplace_back(Drop{});
      } else if (auto sf = a->find("set-field"); sf != a->end()) {
        const auto& eth = member(*sf, "ethernet-match", "set-field");
        if (sf->size() != 1 || eth.size() != 1 || !eth.contains("ethernet-destination")) unsupported("set-field " + sf->dump());
        actions.emplace_back(SetEthDst{parse_mac(member(eth["ethernet-destination"], "address", "set-field"), "set-field")});
      } else {
        unsupported("action " + a->dump());
      }
    }
  }
  return actions;
}

FlowEntry parse_flow_json(const json& f, DeviceId device) {
  FlowEntry entry;
  auto& r = entry.rule;
  r.device = device;
  const auto table = counter_member(f, "table_id", "flow");
  const auto priority = counter_member(f, "priority", "flow");
  if (table > 0xff || priority > 0xffff) protocol_error("flow table_id/priority out of range");
  r.table_id = static_cast<std::uint8_t>(table);
  r.priority = static_cast<std::uint16_t>(priority);
  r.idle_timeout_s = static_cast<std::uint32_t>(counter_member(f, "idle-timeout", "flow"));
  r.hard_timeout_s = static_cast<std::uint32_t>(counter_member(f, "hard-timeout", "flow"));
  r.match = parse_match(f.contains("match") ? f["match"] : json());
  r.actions = parse_instructions(f.contains("instructions") ? f["instructions"] : json());
  if (r.actions.empty()) r.actions.emplace_back(Drop{});
  try {
    validate_rule(r);
  } catch (const InvalidRule& e) {
    unsupported(e.what());
  }
  entry.handle = FlowHandle{device, odl_handle_id(r.table_id, string_member(f, "id", "flow"))};
  return entry;
}

const json& node_array(const json& body) {
  static const json kEmpty = json::array();
  const json* nodes = &body;
  if (auto it = body.find("nodes"); it != body.end()) nodes = &*it;
  auto it = nodes->find("node");
  if (it == nodes->end()) return kEmpty;
  if (!it->is_array()) protocol_error("inventory node is not an array");
  return *it;
}

std::optional<std::uint32_t> connector_port(const json& connector) {
  if (auto it = connector.find("flow-node-inventory:port-number"); it != connector.end()) {
    if (it->is_number_unsigned()) return it->get<std::uint32_t>();
    if (it->is_string()) return decimal_u32(it->get<std::string>());
    return std::nullopt;
  }
  if (auto tp = termination_point(string_member(connector, "id", "node-connector")); tp && tp->port_no < reserved_port::kInPort) {
    return tp->port_no;
  }
  return std::nullopt;
}

}  // namespace

OdlEndpoints OdlEndpoints::from_config(const DriverConfig& config) {
  OdlEndpoints e;
  auto take = [&](const char* field, std::string& slot) {
    if (auto v = config.extra(std::string("odl.path.") + field)) slot = *v;
  };
  take("topology", e.topology);
  take("nodes", e.nodes);
  take("node", e.node);
  take("flow_operational", e.flow_operational);
  take("config_nodes", e.config_nodes);
  take("config_node", e.config_node);
  take("flow_write", e.flow_write);
  return e;
}

std::string odl_flow_id(const FlowRule& rule) {
  const auto c = canonical(rule);
  const auto& m = c.match;
  auto opt = [](const auto& v, auto render) { return v ? render(*v) : std::string("*"); };
  const std::string key = fmt::format(
      "{}|{}|{}|in_port={}|eth_src={}|eth_dst={}|eth_type={}|ipv4_src={}|ipv4_dst={}", c.device.dpid, c.table_id,
      c.priority, opt(m.in_port, [](auto p) { return std::to_string(p); }),
      opt(m.eth_src, [](auto mac) { return mac.to_string(); }), opt(m.eth_dst, [](auto mac) { return mac.to_string(); }),
      opt(m.eth_type, [](auto t) { return std::to_string(t); }), opt(m.ipv4_src, [](auto p) { return p.to_string(); }),
      opt(m.ipv4_dst, [](auto p) { return p.to_string(); }));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(key.data(), key.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string id = "umb-";
  for (unsigned i = 0; i < 16; ++i) id += fmt::format("{:02x}", digest[i]);
  return id;
}

std::string odl_handle_id(std::uint8_t table_id, const std::string& flow_id) {
  return fmt::format("{}/{}", table_id, flow_id);
}

std::string odl_render_flow(const FlowRule& rule, const std::string& flow_id) {
  validate_rule(rule);
  const auto c = canonical(rule);
  json flow{
      {"id", flow_id},
      {"table_id", c.table_id},
      {"priority", c.priority},
      {"idle-timeout", c.idle_timeout_s},
      {"hard-timeout", c.hard_timeout_s},
      {"match", render_match(c)},
      {"instructions", {{"instruction", json::array({{{"order", 0}, {"apply-actions", {{"action", render_actions(c.actions)}}}}})}}},
  };
  return json{{"flow-node-inventory:flow", json::array({flow})}}.dump();
}

FlowEntry odl_parse_flow(std::string_view flow_object, DeviceId device) {
  return parse_flow_json(parse_body(flow_object, "flow"), device);
}

TopologySnapshot odl_parse_topology(std::string_view topology_body, std::string_view inventory_body,
                                    std::int64_t captured_at_ns) {
  const auto topo = parse_body(topology_body, "topology body");
  const auto inventory = parse_body(inventory_body, "inventory body");

  const auto& root = member(topo, "network-topology", "topology body");
  const json* chosen = nullptr;
  if (auto list = root.find("topology"); list != root.end()) {
    if (!list->is_array()) protocol_error("network-topology.topology is not an array");
    for (const auto& t : *list) {
      if (chosen == nullptr || t.value("topology-id", "") == "flow:1") chosen = &t;
      if (t.value("topology-id", "") == "flow:1") break;
    }
  }

  std::map<DeviceId, std::set<std::uint32_t>> devices;
  std::vector<Link> links;
  std::vector<Host> hosts;
  const json empty = json::array();
  const json& nodes = chosen && chosen->contains("node") ? (*chosen)["node"] : empty;
  const json& edges = chosen && chosen->contains("link") ? (*chosen)["link"] : empty;

  for (const auto& n : nodes) {
    const auto node_id = string_member(n, "node-id", "topology node");
    if (auto id = switch_node(node_id)) {
      auto& ports = devices[*id];
      if (auto tps = n.find("termination-point"); tps != n.end()) {
        for (const auto& tp : *tps) {
          auto p = termination_point(string_member(tp, "tp-id", "termination point"));
          if (p && p->port_no < reserved_port::kInPort) ports.insert(p->port_no);
        }
      }
    }
  }
  for (const auto& n : nodes) {
    const auto node_id = string_member(n, "node-id", "topology node");
    if (node_id.rfind(kHost, 0) != 0) continue;
    const auto& addresses = member(n, "host-tracker-service:addresses", "host node");
    const auto& points = member(n, "host-tracker-service:attachment-points", "host node");
    if (!addresses.is_array() || addresses.empty()) protocol_error(node_id + " has no addresses");
    if (!points.is_array() || points.empty()) protocol_error(node_id + " has no attachment points");
    const auto tp_text = string_member(points.front(), "tp-id", "attachment point");
    auto at = termination_point(tp_text);
    if (!at || !devices.count(at->device)) protocol_error(fmt::format("{} attached to unknown port {}", node_id, tp_text));
    Host host{parse_mac(member(addresses.front(), "mac", "host address"), "host address"), std::nullopt, *at};
    for (const auto& a : addresses) {
      if (auto ip = a.find("ip"); ip != a.end() && ip->is_string()) {
        try {
          host.ip = Ipv4Address::parse(ip->get<std::string>());
          break;
        } catch (const MalformedValue&) {
        }
      }
    }
    devices[at->device].insert(at->port_no);
    hosts.push_back(host);
  }
  for (const auto& l : edges) {
    const auto& src = member(l, "source", "link");
    const auto& dst = member(l, "destination", "link");
    const auto src_node = string_member(src, "source-node", "link.source");
    const auto dst_node = string_member(dst, "dest-node", "link.destination");
    if (!switch_node(src_node) || !switch_node(dst_node)) continue;  // host attachment links
    auto a = termination_point(string_member(src, "source-tp", "link.source"));
    auto b = termination_point(string_member(dst, "dest-tp", "link.destination"));
    if (!a || !b) protocol_error("link with malformed termination point: " + l.dump());
    if (!devices.count(a->device) || !devices.count(b->device)) protocol_error("link to unknown node: " + l.dump());
    devices[a->device].insert(a->port_no);
    devices[b->device].insert(b->port_no);
    links.push_back(Link{*a, *b});
  }
  for (const auto& n : node_array(inventory)) {
    auto id = switch_node(string_member(n, "id", "inventory node"));
    if (!id || !devices.count(*id)) continue;
    if (auto connectors = n.find("node-connector"); connectors != n.end()) {
      for (const auto& c : *connectors) {
        if (auto port = connector_port(c); port && *port < reserved_port::kInPort) devices[*id].insert(*port);
      }
    }
  }

  std::vector<Device> out;
  for (const auto& [id, ports] : devices) out.push_back(Device{id, {ports.begin(), ports.end()}});
  try {
    return TopologySnapshot::create(std::move(out), std::move(links), std::move(hosts), captured_at_ns);
  } catch (const InvalidTopology& e) {
    protocol_error(e.what());
  }
}

std::vector<FlowEntry> odl_parse_inventory_flows(std::string_view body) {
  const auto j = parse_body(body, "inventory body");
  std::vector<FlowEntry> out;
  for (const auto& n : node_array(j)) {
    auto device = switch_node(string_member(n, "id", "inventory node"));
    if (!device) continue;
    auto tables = n.find("flow-node-inventory:table");
    if (tables == n.end()) continue;
    for (const auto& t : *tables) {
      auto flows = t.find("flow");
      if (flows == t.end()) continue;
      for (const auto& f : *flows) {
        try {
          out.push_back(parse_flow_json(f, *device));
        } catch (const DriverError& e) {
          if (e.kind() != DriverErrorKind::Unsupported) throw;
        }
      }
    }
  }
  return out;
}

std::vector<PortStats> odl_parse_port_stats(std::string_view node_body) {
  const auto j = parse_body(node_body, "node body");
  std::vector<PortStats> out;
  for (const auto& n : node_array(j)) {
    auto device = switch_node(string_member(n, "id", "inventory node"));
    if (!device) protocol_error("node id is not an openflow node");
    auto connectors = n.find("node-connector");
    if (connectors == n.end()) continue;
    for (const auto& c : *connectors) {
      auto port = connector_port(c);
      if (!port || *port >= reserved_port::kInPort) continue;
      PortStats s;
      s.port = PortId{*device, *port};
      if (auto st = c.find("opendaylight-port-statistics:flow-capable-node-connector-statistics"); st != c.end()) {
        if (auto p = st->find("packets"); p != st->end()) {
          s.rx_packets = counter_member(*p, "received", "packets");
          s.tx_packets = counter_member(*p, "transmitted", "packets");
        }
        if (auto b = st->find("bytes"); b != st->end()) {
          s.rx_bytes = counter_member(*b, "received", "bytes");
          s.tx_bytes = counter_member(*b, "transmitted", "bytes");
        }
      }
      out.push_back(s);
    }
  }
  return out;
}

FlowStats odl_parse_flow_stats(std::string_view flow_body, const FlowHandle& handle) {
  const auto j = parse_body(flow_body, "flow body");
  const json* flow = &j;
  if (auto it = j.find("flow-node-inventory:flow"); it != j.end()) {
    if (!it->is_array() || it->empty()) throw DriverError(DriverErrorKind::NotFound, handle.driver_flow_id);
    flow = &it->front();
  }
  FlowStats s{handle, 0, 0, 0};
  if (auto st = flow->find("opendaylight-flow-statistics:flow-statistics"); st != flow->end()) {
    s.packets = counter_member(*st, "packet-count", "flow-statistics");
    s.bytes = counter_member(*st, "byte-count", "flow-statistics");
    if (auto d = st->find("duration"); d != st->end()) {
      s.duration_s = static_cast<std::uint32_t>(counter_member(*d, "second", "duration"));
    }
  }
  return s;
}

}  // namespace umbrella::odl
