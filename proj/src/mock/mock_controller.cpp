// SPDX-License-Identifier: Apache-2.0
#include "umbrella/mock/mock_controller.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella::mock {

namespace {

std::int64_t ms_to_ns(double ms, std::string_view what) {
  if (!(ms >= 0) || !std::isfinite(ms)) throw InvalidSpec(fmt::format("{} must be a non-negative number", what));
  return static_cast<std::int64_t>(std::llround(ms * 1e6));
}

DriverError not_found(std::string detail) { return DriverError(DriverErrorKind::NotFound, std::move(detail)); }

}  // namespace

std::string_view to_string(InstallMode mode) {
  return mode == InstallMode::Sequential ? "sequential" : "parallel";
}

InstallMode parse_install_mode(std::string_view text) {
  if (text == "seq" || text == "sequential") return InstallMode::Sequential;
  if (text == "par" || text == "parallel") return InstallMode::Parallel;
  throw InvalidSpec(fmt::format("unknown install mode '{}'", text));
}

MockController::MockController(const TopologySpec& spec, const LatencyModel& latency)
    : latency_(latency),
      per_rule_ns_(ms_to_ns(latency.per_rule_install_ms, "per_rule_install_ms")),
      rpc_ns_(ms_to_ns(latency.base_rpc_ms, "base_rpc_ms")) {
  const auto snapshot = spec.to_snapshot();
  for (const auto& d : snapshot.devices()) devices_.emplace(d.id, d);
  links_.insert(snapshot.links().begin(), snapshot.links().end());
  for (const auto& h : snapshot.hosts()) hosts_.emplace(h.mac, h);
  rebuild_indexes();
}

void MockController::rebuild_indexes() {
  link_from_.clear();
  for (const auto& l : links_) link_from_[l.src] = l.dst;
}

PortStats& MockController::counters(PortId port) {
  auto [it, inserted] = port_counters_.try_emplace(port);
  if (inserted) it->second.port = port;
  return it->second;
}

// ---- clock ---------------------------------------------------------------

std::int64_t MockController::now_ns() const {
  std::lock_guard lock(mu_);
  return now_;
}

void MockController::schedule(Event e) {
  e.seq = next_seq_++;
  queue_.push(e);
}

void MockController::process_until(std::int64_t t_ns, bool include_emissions_at_t) {
  while (!queue_.empty()) {
    const Event e = queue_.top();
    const bool due = e.at < t_ns || (e.at == t_ns && (include_emissions_at_t || e.kind == EventKind::Activate));
    if (!due) break;
    queue_.pop();
    now_ = std::max(now_, e.at);
    if (e.kind == EventKind::Activate) {
      activate(e.device, e.generation);
    } else {
      emit(e.train, e.index);
    }
  }
  now_ = std::max(now_, t_ns);
}

void MockController::advance_to(std::int64_t t_ns) {
  std::lock_guard lock(mu_);
  if (t_ns < now_) throw ClockRegression(fmt::format("advance_to({}) before now={}", t_ns, now_));
  process_until(t_ns, false);
}

void MockController::charge_rpc() {
  if (rpc_ns_ > 0) process_until(now_ + rpc_ns_, false);
}

// ---- topology ------------------------------------------------------------

TopologySnapshot MockController::get_topology() {
  std::lock_guard lock(mu_);
  std::vector<Device> devices;
  for (const auto& [id, d] : devices_) devices.push_back(d);
  std::vector<Link> links(links_.begin(), links_.end());
  std::vector<Host> hosts;
  for (const auto& [mac, h] : hosts_) hosts.push_back(h);
  auto snapshot = TopologySnapshot::create(std::move(devices), std::move(links), std::move(hosts), now_);
  charge_rpc();
  return snapshot;
}

void MockController::apply_mutation(const Mutation& mutation) {
  std::lock_guard lock(mu_);
  auto port_exists = [this](PortId p) {
    auto it = devices_.find(p.device);
    return it != devices_.end() && it->second.has_port(p.port_no);
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AddDevice>) {
          Device d = m.device;
          std::sort(d.ports.begin(), d.ports.end());
          if (devices_.count(d.id)) throw InvalidMutation("device exists: " + render_onos(d.id));
          if (std::adjacent_find(d.ports.begin(), d.ports.end()) != d.ports.end() ||
              (!d.ports.empty() && d.ports.front() == 0)) {
            throw InvalidMutation("device ports must be unique and >= 1");
          }
          devices_.emplace(d.id, std::move(d));
        } else if constexpr (std::is_same_v<T, RemoveDevice>) {
          if (devices_.erase(m.id) == 0) throw InvalidMutation("no device " + render_onos(m.id));
          std::erase_if(links_, [&](const Link& l) { return l.src.device == m.id || l.dst.device == m.id; });
          std::erase_if(hosts_, [&](const auto& kv) { return kv.second.attachment.device == m.id; });
          tables_.erase(m.id);
          std::erase_if(port_counters_, [&](const auto& kv) { return kv.first.device == m.id; });
        } else if constexpr (std::is_same_v<T, AddLink>) {
          const Link& l = m.link;
          if (l.src == l.dst) throw InvalidMutation("self link");
          if (!port_exists(l.src) || !port_exists(l.dst)) throw InvalidMutation("link endpoint missing");
          if (links_.count(l) || (m.bidirectional && links_.count(l.reversed()))) {
            throw InvalidMutation("link exists");
          }
          links_.insert(l);
          if (m.bidirectional) links_.insert(l.reversed());
        } else if constexpr (std::is_same_v<T, RemoveLink>) {
          const Link& l = m.link;
          if (!links_.count(l) || (m.bidirectional && !links_.count(l.reversed()))) {
            throw InvalidMutation("no such link");
          }
          links_.erase(l);
          if (m.bidirectional) links_.erase(l.reversed());
        } else if constexpr (std::is_same_v<T, AddHost>) {
          if (hosts_.count(m.host.mac)) throw InvalidMutation("host exists: " + m.host.mac.to_string());
          if (!port_exists(m.host.attachment)) throw InvalidMutation("host attachment missing");
          hosts_.emplace(m.host.mac, m.host);
        } else {
          if (hosts_.erase(m.mac) == 0) throw InvalidMutation("no host " + m.mac.to_string());
        }
      },
      mutation);
  rebuild_indexes();
}

// ---- flows ---------------------------------------------------------------

bool MockController::expired(const FlowSlot& s) const {
  if (!s.active) return false;
  const auto& r = s.rule;
  if (r.hard_timeout_s > 0 && now_ >= s.active_at + static_cast<std::int64_t>(r.hard_timeout_s) * 1'000'000'000) {
    return true;
  }
  return r.idle_timeout_s > 0 && now_ >= s.last_hit + static_cast<std::int64_t>(r.idle_timeout_s) * 1'000'000'000;
}

void MockController::purge_expired() {
  for (auto& [id, table] : tables_) {
    std::erase_if(table, [this](const FlowSlot& s) { return expired(s); });
  }
}

MockController::FlowSlot* MockController::find_slot(const FlowHandle& handle) {
  auto it = tables_.find(handle.device);
  if (it == tables_.end()) return nullptr;
  for (auto& s : it->second) {
    if (s.handle_id == handle.driver_flow_id) return &s;
  }
  return nullptr;
}

FlowHandle MockController::install_flow(const FlowRule& rule) {
  std::lock_guard lock(mu_);
  if (!devices_.count(rule.device)) throw not_found("no device " + render_onos(rule.device));
  try {
    validate_rule(rule);
  } catch (const InvalidRule& e) {
    throw DriverError(DriverErrorKind::Rejected, e.what());
  }
  purge_expired();

  auto& table = tables_[rule.device];
  const auto key = FlowKey::of(rule);
  std::string handle_id;
  auto same = std::find_if(table.begin(), table.end(), [&](const FlowSlot& s) { return s.key == key; });
  if (same != table.end()) {
    handle_id = same->handle_id;
    table.erase(same);
  } else {
    handle_id = fmt::format("mock-{}", next_handle_++);
  }

  std::int64_t activation = now_ + per_rule_ns_;
  if (latency_.install_mode == InstallMode::Sequential) {
    activation = std::max(now_, pipeline_free_at_) + per_rule_ns_;
    pipeline_free_at_ = activation;
  }

  FlowSlot slot;
  slot.handle_id = handle_id;
  slot.generation = next_generation_++;
  slot.rule = rule;
  slot.key = key;
  table.push_back(slot);
  if (activation <= now_) {
    activate(rule.device, slot.generation);
  } else {
    schedule(Event{activation, EventKind::Activate, 0, rule.device, slot.generation, 0, 0});
  }
  charge_rpc();
  return FlowHandle{rule.device, handle_id};
}

void MockController::activate(DeviceId device, std::uint64_t generation) {
  auto it = tables_.find(device);
  if (it == tables_.end()) return;
  for (auto& s : it->second) {
    if (s.generation == generation) {
      s.active = true;
      s.active_at = now_;
      s.last_hit = now_;
      return;
    }
  }
}

void MockController::remove_flow(const FlowHandle& handle) {
  std::lock_guard lock(mu_);
  purge_expired();
  auto it = tables_.find(handle.device);
  const bool erased = it != tables_.end() && std::erase_if(it->second, [&](const FlowSlot& s) {
                                               return s.handle_id == handle.driver_flow_id;
                                             }) > 0;
  if (!erased) throw not_found("no flow " + handle.driver_flow_id);
  charge_rpc();
}

std::vector<FlowEntry> MockController::list_flows(std::optional<DeviceId> device) {
  std::lock_guard lock(mu_);
  purge_expired();
  std::vector<FlowEntry> out;
  for (const auto& [id, table] : tables_) {
    if (device && id != *device) continue;
    for (const auto& s : table) out.push_back(FlowEntry{FlowHandle{id, s.handle_id}, s.rule});
  }
  charge_rpc();
  return out;
}

FlowStats MockController::get_flow_stats(const FlowHandle& handle) {
  std::lock_guard lock(mu_);
  purge_expired();
  const auto* s = find_slot(handle);
  if (s == nullptr) throw not_found("no flow " + handle.driver_flow_id);
  FlowStats stats{handle, s->packets, s->bytes, 0};
  if (s->active) stats.duration_s = static_cast<std::uint32_t>((now_ - s->active_at) / 1'000'000'000);
  charge_rpc();
  return stats;
}

std::vector<PortStats> MockController::get_port_stats(DeviceId device) {
  std::lock_guard lock(mu_);
  auto it = devices_.find(device);
  if (it == devices_.end()) throw not_found("no device " + render_onos(device));
  std::vector<PortStats> out;
  for (auto port : it->second.ports) out.push_back(counters(PortId{device, port}));
  charge_rpc();
  return out;
}

// ---- data plane ----------------------------------------------------------

MockController::FlowSlot* MockController::lookup(DeviceId device, const PacketDescriptor& packet) {
  auto it = tables_.find(device);
  if (it == tables_.end()) return nullptr;
  FlowSlot* best = nullptr;
  for (auto& s : it->second) {
    if (!s.active || expired(s) || !flow_matches(s.rule, packet)) continue;
    // Slots sit in install order, so strict '>' keeps the earliest on ties.
    if (best == nullptr || s.rule.priority > best->rule.priority) best = &s;
  }
  return best;
}

TrainId MockController::start_train(const PacketTrain& train) {
  std::lock_guard lock(mu_);
  if (train.interval_ns <= 0) throw InvalidTrain("interval_ns must be positive");
  if (train.start_at_ns < now_) throw InvalidTrain(fmt::format("train starts at {} before now={}", train.start_at_ns, now_));
  if (!hosts_.count(train.src_host)) throw UnknownHost(train.src_host.to_string());
  if (!hosts_.count(train.dst_host)) throw UnknownHost(train.dst_host.to_string());
  const TrainId id = trains_.size();
  trains_.push_back(TrainState{train, DeliveryReport{}});
  if (train.count == 0) {
    trains_.back().report.complete = true;
  } else {
    schedule(Event{train.start_at_ns, EventKind::Emit, 0, DeviceId{}, 0, id, 0});
  }
  return id;
}

void MockController::emit(TrainId id, std::uint64_t index) {
  auto& state = trains_[id];
  auto& report = state.report;
  ++report.sent;
  if (forward(state)) {
    ++report.received;
    if (!report.first_received_index) report.first_received_index = index;
  } else if (report.first_received_index) {
    ++report.interior_losses;
  }
  const auto& train = state.train;
  if (index + 1 < train.count) {
    schedule(Event{train.start_at_ns + static_cast<std::int64_t>(index + 1) * train.interval_ns, EventKind::Emit, 0,
                   DeviceId{}, 0, id, index + 1});
  } else {
    report.complete = true;
  }
}

bool MockController::forward(const TrainState& state) {
  const auto src_it = hosts_.find(state.train.src_host);
  const auto dst_it = hosts_.find(state.train.dst_host);
  if (src_it == hosts_.end() || dst_it == hosts_.end()) return false;
  const Host& src = src_it->second;
  const Host& dst = dst_it->second;
  const std::uint64_t frame = state.train.frame_bytes;

  PacketDescriptor packet;
  packet.in_port = src.attachment.port_no;
  packet.eth_src = src.mac;
  packet.eth_dst = dst.mac;
  packet.eth_type = kEthTypeIpv4;
  packet.ipv4_src = src.ip.value_or(Ipv4Address{});
  packet.ipv4_dst = dst.ip.value_or(Ipv4Address{});

  PortId at = src.attachment;
  {
    auto& c = counters(at);
    ++c.rx_packets;
    c.rx_bytes += frame;
  }
  const std::size_t max_hops = devices_.size() + 1;
  for (std::size_t hop = 0; hop < max_hops; ++hop) {
    FlowSlot* slot = lookup(at.device, packet);
    if (slot == nullptr) return false;
    ++slot->packets;
    slot->bytes += frame;
    slot->last_hit = now_;

    std::optional<std::uint32_t> out;
    for (const auto& action : slot->rule.actions) {
      if (std::holds_alternative<Drop>(action)) return false;
      if (const auto* set = std::get_if<SetEthDst>(&action)) packet.eth_dst = set->mac;
      if (const auto* o = std::get_if<Output>(&action)) out = o->port;
    }
    if (!out) return false;
    std::uint32_t port = *out;
    if (port == reserved_port::kInPort) port = packet.in_port;
    const auto& device = devices_.at(at.device);
    if (!device.has_port(port)) return false;  // reserved ports other than IN_PORT are not simulated

    const PortId egress{at.device, port};
    {
      auto& c = counters(egress);
      ++c.tx_packets;
      c.tx_bytes += frame;
    }
    if (egress == dst.attachment) return true;
    auto next = link_from_.find(egress);
    if (next == link_from_.end()) return false;
    at = next->second;
    packet.in_port = at.port_no;
    auto& c = counters(at);
    ++c.rx_packets;
    c.rx_bytes += frame;
  }
  return false;
}

DeliveryReport MockController::run_until_complete(TrainId id) {
  std::lock_guard lock(mu_);
  if (id >= trains_.size()) throw InvalidTrain(fmt::format("unknown train {}", id));
  const auto end = trains_[id].train.last_emission_ns();
  if (!trains_[id].report.complete) process_until(std::max(end, now_), true);
  return trains_[id].report;
}

DeliveryReport MockController::train_report(TrainId id) const {
  std::lock_guard lock(mu_);
  if (id >= trains_.size()) throw InvalidTrain(fmt::format("unknown train {}", id));
  return trains_[id].report;
}

DeliveryReport MockController::run_packet_train(const PacketTrain& train) {
  return run_until_complete(start_train(train));
}

// ---- construction --------------------------------------------------------

std::shared_ptr<MockController> mock_with_topology(const TopologySpec& spec, const LatencyModel& latency) {
  return std::make_shared<MockController>(spec, latency);
}

std::shared_ptr<Driver> make_mock_driver(const DriverConfig& config) {
  TopologySpec spec;
  if (auto inline_spec = config.extra("topology")) {
    spec = parse_topology_spec(*inline_spec);
  } else if (auto file = config.extra("topology_file")) {
    std::ifstream in(*file);
    if (!in) throw InvalidSpec("cannot open topology file " + *file);
    std::ostringstream text;
    text << in.rdbuf();
    spec = parse_topology_spec(text.str());
  }
  LatencyModel latency;
  auto number = [](const std::string& text, std::string_view key) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw InvalidSpec(fmt::format("extras.{} is not a number: '{}'", key, text));
    }
  };
  if (auto v = config.extra("per_rule_ms")) latency.per_rule_install_ms = number(*v, "per_rule_ms");
  if (auto v = config.extra("base_rpc_ms")) latency.base_rpc_ms = number(*v, "base_rpc_ms");
  if (auto v = config.extra("install_mode")) latency.install_mode = parse_install_mode(*v);
  return mock_with_topology(spec, latency);
}

}  // namespace umbrella::mock
