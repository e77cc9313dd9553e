// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace umbrella::testing {

std::vector<std::vector<DeviceId>> all_simple_paths(const TopologySnapshot& snapshot, DeviceId src, DeviceId dst) {
  std::vector<std::vector<DeviceId>> out;
  std::vector<DeviceId> stack{src};
  std::set<DeviceId> on_stack{src};
  std::function<void(DeviceId)> dfs = [&](DeviceId at) {
    if (at == dst) {
      out.push_back(stack);
      return;
    }
    std::set<DeviceId> next;
    for (const auto& l : snapshot.links()) {
      if (l.src.device == at) next.insert(l.dst.device);
    }
    for (auto v : next) {
      if (on_stack.count(v)) continue;
      stack.push_back(v);
      on_stack.insert(v);
      dfs(v);
      on_stack.erase(v);
      stack.pop_back();
    }
  };
  if (snapshot.find_device(src) && snapshot.find_device(dst)) dfs(src);
  return out;
}

std::optional<std::size_t> brute_force_hops(const TopologySnapshot& snapshot, DeviceId src, DeviceId dst) {
  std::optional<std::size_t> best;
  for (const auto& p : all_simple_paths(snapshot, src, dst)) {
    if (!best || p.size() - 1 < *best) best = p.size() - 1;
  }
  return best;
}

std::optional<std::vector<DeviceId>> brute_force_lexicographic(const TopologySnapshot& snapshot, DeviceId src,
                                                               DeviceId dst) {
  auto paths = all_simple_paths(snapshot, src, dst);
  if (paths.empty()) return std::nullopt;
  std::size_t shortest = paths.front().size();
  for (const auto& p : paths) shortest = std::min(shortest, p.size());
  std::optional<std::vector<DeviceId>> best;
  for (const auto& p : paths) {
    if (p.size() == shortest && (!best || p < *best)) best = p;
  }
  return best;
}

bool referentially_closed(const std::vector<Device>& devices, const std::vector<Link>& links,
                          const std::vector<Host>& hosts) {
  auto has = [&](PortId p) {
    for (const auto& d : devices) {
      if (d.id != p.device) continue;
      for (auto port : d.ports) {
        if (port == p.port_no) return true;
      }
    }
    return false;
  };
  for (const auto& l : links) {
    if (!has(l.src) || !has(l.dst)) return false;
  }
  for (const auto& h : hosts) {
    if (!has(h.attachment)) return false;
  }
  return true;
}

double analytic_sequential_setup_ms(std::uint32_t rules, double per_rule_ms) { return rules * per_rule_ms; }

}  // namespace umbrella::testing
