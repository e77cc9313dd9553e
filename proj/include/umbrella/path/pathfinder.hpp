// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umbrella/core/flow.hpp"
#include "umbrella/core/topology.hpp"

namespace umbrella::path {

struct Edge {
  PortId src;
  PortId dst;
  double weight{1.0};
};

/// Switch-level graph of a snapshot: one vertex per device, one directed
/// edge per inter-switch link. Hosts are not vertices.
class NetGraph {
 public:
  const std::vector<DeviceId>& vertices() const { return vertices_; }
  bool contains(DeviceId id) const;
  std::size_t edge_count() const { return edge_count_; }

  /// Outgoing edges sorted by (dst device, src port, dst port).
  std::span<const Edge> out_edges(DeviceId id) const;
  /// Distinct successor devices, ascending.
  std::vector<DeviceId> successors(DeviceId id) const;
  /// Cheapest edge from -> to, ties broken by lower port numbers.
  const Edge* best_edge(DeviceId from, DeviceId to) const;

  /// Throws std::invalid_argument for an unknown link or weight <= 0.
  void set_weight(const Link& link, double weight);

 private:
  friend NetGraph build_graph(const TopologySnapshot& snapshot);

  std::vector<DeviceId> vertices_;
  std::map<DeviceId, std::vector<Edge>> adjacency_;
  std::size_t edge_count_{0};
};

NetGraph build_graph(const TopologySnapshot& snapshot);

struct Hop {
  DeviceId device;
  PortId in_port;
  PortId out_port;

  bool operator==(const Hop&) const = default;
};

struct HostPath {
  Host src;
  Host dst;
  std::vector<Hop> hops;

  std::vector<DeviceId> devices() const;
  bool operator==(const HostPath&) const = default;
};

using DeviceSequence = std::vector<DeviceId>;

/// A path algorithm returns the device sequence from src to dst (inclusive)
/// or nullopt when dst is unreachable.
using PathFunction = std::function<std::optional<DeviceSequence>(const NetGraph&, DeviceId src, DeviceId dst)>;

struct PathAlgorithm {
  std::string name;
  PathFunction function;
};

/// Minimum hop count; among equal-length paths the lexicographically
/// smallest device sequence.
std::optional<DeviceSequence> bfs_path(const NetGraph& graph, DeviceId src, DeviceId dst);

/// Minimum total edge weight with the same lexicographic tie-break.
std::optional<DeviceSequence> dijkstra_path(const NetGraph& graph, DeviceId src, DeviceId dst);

inline constexpr std::string_view kDefaultAlgorithm = "bfs";

/// Named algorithms. Starts with "bfs" and "dijkstra". Lookups may run
/// concurrently; registration is exclusive.
class AlgorithmRegistry {
 public:
  AlgorithmRegistry();
  AlgorithmRegistry(const AlgorithmRegistry&) = delete;
  AlgorithmRegistry& operator=(const AlgorithmRegistry&) = delete;

  /// Throws DuplicateName.
  void register_algorithm(PathAlgorithm algorithm);
  /// Throws UnknownAlgorithm.
  PathFunction find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, PathFunction, std::less<>> algorithms_;
};

AlgorithmRegistry& default_algorithms();

/// Throws AlgorithmContractViolation when `sequence` is not a connected
/// simple path from src to dst in `graph`.
void validate_sequence(const NetGraph& graph, const DeviceSequence& sequence, DeviceId src, DeviceId dst);

/// Host-to-host path. nullopt = no path. Throws UnknownAlgorithm,
/// AlgorithmContractViolation, UnknownHost (host not attached to a vertex),
/// std::invalid_argument when src and dst are the same host.
std::optional<HostPath> shortest_path(const NetGraph& graph, const Host& src, const Host& dst,
                                      std::string_view algorithm = kDefaultAlgorithm,
                                      const AlgorithmRegistry& registry = default_algorithms());

/// Same path walked backwards: dst -> src with in/out ports swapped.
HostPath reversed(const HostPath& path);

inline constexpr std::uint16_t kDefaultPriority = 100;

/// One rule per hop forwarding src -> dst only. Rule i matches the template
/// plus eth_dst = dst.mac and in_port = hops[i].in_port, and outputs to
/// hops[i].out_port.
std::vector<FlowRule> compile_one_directional(const HostPath& path, std::uint16_t priority = kDefaultPriority,
                                              const MatchFields& match_template = {});

}  // namespace umbrella::path
