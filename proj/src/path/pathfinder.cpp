// SPDX-License-Identifier: Apache-2.0
#include "umbrella/path/pathfinder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <queue>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella::path {

bool NetGraph::contains(DeviceId id) const { return std::binary_search(vertices_.begin(), vertices_.end(), id); }

std::span<const Edge> NetGraph::out_edges(DeviceId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) return {};
  return it->second;
}

std::vector<DeviceId> NetGraph::successors(DeviceId id) const {
  std::vector<DeviceId> out;
  for (const auto& e : out_edges(id)) {
    if (out.empty() || out.back() != e.dst.device) out.push_back(e.dst.device);
  }
  return out;
}

const Edge* NetGraph::best_edge(DeviceId from, DeviceId to) const {
  const Edge* best = nullptr;
  for (const auto& e : out_edges(from)) {
    if (e.dst.device != to) continue;
    if (best == nullptr || e.weight < best->weight) best = &e;
  }
  return best;
}

void NetGraph::set_weight(const Link& link, double weight) {
  if (!(weight > 0) || !std::isfinite(weight)) throw std::invalid_argument("edge weight must be positive");
  auto it = adjacency_.find(link.src.device);
  if (it != adjacency_.end()) {
    for (auto& e : it->second) {
      if (e.src == link.src && e.dst == link.dst) {
        e.weight = weight;
        return;
      }
    }
  }
  throw std::invalid_argument("no such edge");
}

NetGraph build_graph(const TopologySnapshot& snapshot) {
  NetGraph g;
  for (const auto& d : snapshot.devices()) {
    g.vertices_.push_back(d.id);
    g.adjacency_[d.id];
  }
  for (const auto& l : snapshot.links()) {
    g.adjacency_[l.src.device].push_back(Edge{l.src, l.dst, 1.0});
    ++g.edge_count_;
  }
  for (auto& [id, edges] : g.adjacency_) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.dst.device, a.src.port_no, a.dst.port_no) < std::tie(b.dst.device, b.src.port_no, b.dst.port_no);
    });
  }
  return g;
}

std::vector<DeviceId> HostPath::devices() const {
  std::vector<DeviceId> out;
  out.reserve(hops.size());
  for (const auto& h : hops) out.push_back(h.device);
  return out;
}

namespace {

std::map<DeviceId, std::vector<const Edge*>> reverse_adjacency(const NetGraph& g) {
  std::map<DeviceId, std::vector<const Edge*>> in;
  for (auto v : g.vertices()) {
    for (const auto& e : g.out_edges(v)) in[e.dst.device].push_back(&e);
  }
  return in;
}

/// Walks from src choosing, at every step, the smallest successor that
/// stays on an optimal path according to `on_optimal(u, v)`. With
/// distances-to-dst known this yields the lexicographically smallest
/// optimal sequence.
template <typename OnOptimal>
DeviceSequence greedy_walk(const NetGraph& g, DeviceId src, DeviceId dst, OnOptimal on_optimal) {
  DeviceSequence seq{src};
  std::set<DeviceId> used{src};
  DeviceId at = src;
  while (at != dst) {
    bool moved = false;
    for (auto v : g.successors(at)) {
      if (!used.count(v) && on_optimal(at, v)) {
        seq.push_back(v);
        used.insert(v);
        at = v;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("greedy walk left the optimal subgraph");
  }
  return seq;
}

}  // namespace

std::optional<DeviceSequence> bfs_path(const NetGraph& g, DeviceId src, DeviceId dst) {
  if (!g.contains(src) || !g.contains(dst)) return std::nullopt;
  const auto in = reverse_adjacency(g);
  std::map<DeviceId, std::size_t> dist{{dst, 0}};
  std::deque<DeviceId> frontier{dst};
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    auto it = in.find(v);
    if (it == in.end()) continue;
    for (const Edge* e : it->second) {
      if (dist.emplace(e->src.device, dist[v] + 1).second) frontier.push_back(e->src.device);
    }
  }
  if (!dist.count(src)) return std::nullopt;
  return greedy_walk(g, src, dst, [&](DeviceId u, DeviceId v) {
    auto it = dist.find(v);
    return it != dist.end() && it->second + 1 == dist.at(u);
  });
}

std::optional<DeviceSequence> dijkstra_path(const NetGraph& g, DeviceId src, DeviceId dst) {
  if (!g.contains(src) || !g.contains(dst)) return std::nullopt;
  const auto in = reverse_adjacency(g);
  std::map<DeviceId, double> dist{{dst, 0.0}};
  using Item = std::pair<double, DeviceId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, dst);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist.at(v)) continue;
    auto it = in.find(v);
    if (it == in.end()) continue;
    for (const Edge* e : it->second) {
      const double nd = d + e->weight;
      auto [slot, inserted] = dist.emplace(e->src.device, nd);
      if (inserted || nd < slot->second) {
        slot->second = nd;
        heap.emplace(nd, e->src.device);
      }
    }
  }
  if (!dist.count(src)) return std::nullopt;
  return greedy_walk(g, src, dst, [&](DeviceId u, DeviceId v) {
    auto it = dist.find(v);
    if (it == dist.end()) return false;
    const double via = g.best_edge(u, v)->weight + it->second;
    const double here = dist.at(u);
    return std::abs(via - here) <= 1e-9 * std::max(1.0, here);
  });
}

AlgorithmRegistry::AlgorithmRegistry() {
  algorithms_.emplace("bfs", bfs_path);
  algorithms_.emplace("dijkstra", dijkstra_path);
}

void AlgorithmRegistry::register_algorithm(PathAlgorithm algorithm) {
  std::unique_lock lock(mu_);
  if (!algorithm.function) throw std::invalid_argument("path algorithm without a function");
  if (!algorithms_.emplace(algorithm.name, std::move(algorithm.function)).second) {
    throw DuplicateName(fmt::format("path algorithm '{}' already registered", algorithm.name));
  }
}

PathFunction AlgorithmRegistry::find(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = algorithms_.find(name);
  if (it == algorithms_.end()) throw UnknownAlgorithm(fmt::format("unknown path algorithm '{}'", name));
  return it->second;
}

std::vector<std::string> AlgorithmRegistry::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, fn] : algorithms_) out.push_back(name);
  return out;
}

AlgorithmRegistry& default_algorithms() {
  static AlgorithmRegistry registry;
  return registry;
}

void validate_sequence(const NetGraph& g, const DeviceSequence& seq, DeviceId src, DeviceId dst) {
  if (seq.empty()) throw AlgorithmContractViolation("empty device sequence");
  if (seq.front() != src) throw AlgorithmContractViolation("sequence does not start at the source device");
  if (seq.back() != dst) throw AlgorithmContractViolation("sequence does not end at the destination device");
  std::set<DeviceId> seen;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!g.contains(seq[i])) throw AlgorithmContractViolation(fmt::format("device {} not in graph", seq[i].dpid));
    if (!seen.insert(seq[i]).second) {
      throw AlgorithmContractViolation(fmt::format("device {} repeated", seq[i].dpid));
    }
    if (i + 1 < seq.size() && g.best_edge(seq[i], seq[i + 1]) == nullptr) {
      throw AlgorithmContractViolation(fmt::format("no link {} -> {}", seq[i].dpid, seq[i + 1].dpid));
    }
  }
}

std::optional<HostPath> shortest_path(const NetGraph& graph, const Host& src, const Host& dst,
                                      std::string_view algorithm, const AlgorithmRegistry& registry) {
  const auto fn = registry.find(algorithm);
  if (!graph.contains(src.attachment.device)) throw UnknownHost(src.mac.to_string() + " not attached to the graph");
  if (!graph.contains(dst.attachment.device)) throw UnknownHost(dst.mac.to_string() + " not attached to the graph");
  if (src.mac == dst.mac) throw std::invalid_argument("source and destination are the same host");

  const DeviceId from = src.attachment.device;
  const DeviceId to = dst.attachment.device;
  const auto seq = fn(graph, from, to);
  if (!seq) return std::nullopt;
  validate_sequence(graph, *seq, from, to);

  HostPath path{src, dst, {}};
  PortId in = src.attachment;
  for (std::size_t i = 0; i < seq->size(); ++i) {
    const DeviceId at = (*seq)[i];
    if (i + 1 == seq->size()) {
      path.hops.push_back(Hop{at, in, dst.attachment});
    } else {
      const Edge* e = graph.best_edge(at, (*seq)[i + 1]);
      path.hops.push_back(Hop{at, in, e->src});
      in = e->dst;
    }
  }
  return path;
}

HostPath reversed(const HostPath& path) {
  HostPath out{path.dst, path.src, {}};
  for (auto it = path.hops.rbegin(); it != path.hops.rend(); ++it) {
    out.hops.push_back(Hop{it->device, it->out_port, it->in_port});
  }
  return out;
}

std::vector<FlowRule> compile_one_directional(const HostPath& path, std::uint16_t priority,
                                              const MatchFields& match_template) {
  std::vector<FlowRule> rules;
  rules.reserve(path.hops.size());
  for (const auto& hop : path.hops) {
    FlowRule rule;
    rule.device = hop.device;
    rule.priority = priority;
    rule.match = match_template;
    rule.match.eth_dst = path.dst.mac;
    rule.match.in_port = hop.in_port.port_no;
    rule.actions = {Output{hop.out_port.port_no}};
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace umbrella::path
