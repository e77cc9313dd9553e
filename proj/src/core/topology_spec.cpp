// SPDX-License-Identifier: Apache-2.0
#include "umbrella/core/topology_spec.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "umbrella/error.hpp"

namespace umbrella {

using nlohmann::json;

TopologySnapshot TopologySpec::to_snapshot(std::int64_t captured_at_ns) const {
  try {
    return TopologySnapshot::create(devices, links, hosts, captured_at_ns);
  } catch (const InvalidTopology& e) {
    throw InvalidSpec(e.what());
  }
}

TopologySpec generate_linear_topology(std::uint32_t n) {
  if (n == 0) throw InvalidSpec("linear topology needs at least one switch");
  TopologySpec spec;
  for (std::uint32_t i = 1; i <= n; ++i) {
    Device d{DeviceId{i}, {1}};
    if (n > 1) d.ports.push_back(2);
    if (i > 1 && i < n) d.ports.push_back(3);
    spec.devices.push_back(std::move(d));
    spec.hosts.push_back(Host{MacAddress::from_u64(i), Ipv4Address{(10u << 24) + i}, PortId{DeviceId{i}, 1}});
  }
  for (std::uint32_t i = 1; i < n; ++i) {
    // s1 reaches s2 on port 2; every other switch uses port 3 toward its successor.
    const PortId out{DeviceId{i}, i == 1 ? 2u : 3u};
    const PortId in{DeviceId{i + 1}, 2};
    spec.links.push_back(Link{out, in});
    spec.links.push_back(Link{in, out});
  }
  return spec;
}

namespace {

DeviceId device_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return DeviceId{v.get<std::uint64_t>()};
  return normalize_device_id(v.get<std::string>());
}

PortId port_ref(const json& j) {
  return PortId{device_field(j, "device"), j.at("port").get<std::uint32_t>()};
}

}  // namespace

TopologySpec parse_topology_spec(std::string_view json_text) {
  try {
    const auto doc = json::parse(json_text);
    if (doc.contains("kind")) {
      const auto kind = doc.at("kind").get<std::string>();
      if (kind != "linear") throw InvalidSpec("unknown topology kind '" + kind + "'");
      const auto n = doc.at("n").get<std::int64_t>();
      if (n < 1) throw InvalidSpec("linear topology needs n >= 1");
      return generate_linear_topology(static_cast<std::uint32_t>(n));
    }
    TopologySpec spec;
    for (const auto& d : doc.value("devices", json::array())) {
      spec.devices.push_back(Device{device_field(d, "id"), d.value("ports", std::vector<std::uint32_t>{})});
    }
    for (const auto& l : doc.value("links", json::array())) {
      spec.links.push_back(Link{port_ref(l.at("src")), port_ref(l.at("dst"))});
    }
    for (const auto& h : doc.value("hosts", json::array())) {
      Host host{MacAddress::parse(h.at("mac").get<std::string>()), std::nullopt, port_ref(h)};
      if (h.contains("ip")) host.ip = Ipv4Address::parse(h.at("ip").get<std::string>());
      spec.hosts.push_back(host);
    }
    (void)spec.to_snapshot();
    return spec;
  } catch (const json::exception& e) {
    throw InvalidSpec(fmt::format("topology spec: {}", e.what()));
  } catch (const MalformedId& e) {
    throw InvalidSpec(e.what());
  } catch (const MalformedValue& e) {
    throw InvalidSpec(e.what());
  }
}

}  // namespace umbrella
