// SPDX-License-Identifier: Apache-2.0
#include "umbrella/monitor/topo_monitor.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "umbrella/error.hpp"

namespace umbrella::monitor {

std::vector<TopologyEvent> diff_snapshots(const TopologySnapshot& a, const TopologySnapshot& b) {
  const auto at = b.captured_at_ns();
  std::vector<TopologyEvent> out;
  auto emit = [&](TopologyChange change) { out.push_back(TopologyEvent{std::move(change), at}); };

  // Snapshots keep hosts sorted by MAC, links by (src, dst), devices by id.
  for (const auto& h : a.hosts()) {
    const Host* now = b.find_host(h.mac);
    if (now == nullptr || *now != h) emit(HostRemoved{h});
  }
  std::vector<Link> gone;
  std::set_difference(a.links().begin(), a.links().end(), b.links().begin(), b.links().end(),
                      std::back_inserter(gone));
  for (const auto& l : gone) emit(LinkRemoved{l});
  for (const auto& d : a.devices()) {
    if (b.find_device(d.id) == nullptr) emit(DeviceRemoved{d.id});
  }
  for (const auto& d : b.devices()) {
    const Device* before = a.find_device(d.id);
    if (before != nullptr && before->ports != d.ports) emit(DeviceUpdated{d});
  }
  for (const auto& d : b.devices()) {
    if (a.find_device(d.id) == nullptr) emit(DeviceAdded{d});
  }
  std::vector<Link> fresh;
  std::set_difference(b.links().begin(), b.links().end(), a.links().begin(), a.links().end(),
                      std::back_inserter(fresh));
  for (const auto& l : fresh) emit(LinkAdded{l});
  for (const auto& h : b.hosts()) {
    const Host* before = a.find_host(h.mac);
    if (before == nullptr || *before != h) emit(HostAdded{h});
  }
  return out;
}

void MonitorConfig::validate() const {
  if (poll_interval_ms < 10) throw ConfigError(fmt::format("poll_interval_ms {} < 10", poll_interval_ms));
  if (queue_capacity == 0) throw ConfigError("queue_capacity must be positive");
}

// ---- Subscription --------------------------------------------------------

void Subscription::push(std::vector<MonitorMessage> batch, const TopologySnapshot& current) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    if (queue_.size() + batch.size() > capacity_) {
      queue_.clear();
      lagged_ = true;
      queue_.emplace_back(Resync{current});
    } else {
      for (auto& m : batch) queue_.push_back(std::move(m));
    }
  }
  cv_.notify_all();
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::optional<MonitorMessage> Subscription::receive(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  auto m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

std::optional<MonitorMessage> Subscription::try_receive() { return receive(std::chrono::milliseconds(0)); }

bool Subscription::lagged() const {
  std::lock_guard lock(mu_);
  return lagged_;
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

// ---- TopoMonitor ---------------------------------------------------------

TopoMonitor::TopoMonitor(std::shared_ptr<Driver> driver, MonitorConfig config)
    : driver_(std::move(driver)), config_(config) {
  config_.validate();
  require_capabilities(*driver_, CapabilitySet{.topology_read = true});
  try {
    last_ = driver_->get_topology();
  } catch (const DriverError&) {
    degraded_ = true;
  }
}

std::unique_ptr<TopoMonitor> TopoMonitor::manual(std::shared_ptr<Driver> driver, MonitorConfig config) {
  return std::unique_ptr<TopoMonitor>(new TopoMonitor(std::move(driver), config));
}

std::unique_ptr<TopoMonitor> TopoMonitor::start(std::shared_ptr<Driver> driver, MonitorConfig config) {
  auto monitor = manual(std::move(driver), config);
  monitor->thread_ = std::thread([m = monitor.get()] { m->run(); });
  return monitor;
}

TopoMonitor::~TopoMonitor() { stop(); }

std::shared_ptr<Subscription> TopoMonitor::subscribe() {
  std::lock_guard lock(state_mu_);
  auto sub = std::shared_ptr<Subscription>(new Subscription(next_id_++, config_.queue_capacity, last_));
  if (closed_) {
    sub->close();
  } else {
    subscribers_.push_back(sub);
  }
  return sub;
}

void TopoMonitor::poll_once() {
  std::lock_guard poll_lock(poll_mu_);
  TopologySnapshot current;
  try {
    current = driver_->get_topology();
  } catch (const DriverError& e) {
    std::vector<std::shared_ptr<Subscription>> subs;
    {
      std::lock_guard lock(state_mu_);
      if (degraded_) return;
      degraded_ = true;
      subs = subscribers_;
    }
    for (auto& s : subs) s->push({MonitorDegraded{e.kind(), e.detail()}}, last_snapshot());
    return;
  }

  std::vector<TopologyEvent> events;
  std::vector<std::shared_ptr<Subscription>> subs;
  {
    std::lock_guard lock(state_mu_);
    events = diff_snapshots(last_, current);
    last_ = current;
    degraded_ = false;
    subs = subscribers_;
  }
  if (events.empty()) return;
  for (auto& s : subs) {
    std::vector<MonitorMessage> batch(events.begin(), events.end());
    s->push(std::move(batch), current);
  }
}

void TopoMonitor::run() {
  const auto interval = std::chrono::milliseconds(config_.poll_interval_ms);
  std::unique_lock lock(stop_mu_);
  while (!stopping_) {
    lock.unlock();
    poll_once();
    lock.lock();
    stop_cv_.wait_for(lock, interval, [this] { return stopping_; });
  }
}

void TopoMonitor::stop() {
  {
    std::lock_guard lock(stop_mu_);
    stopping_ = true;
  }
  stop_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  std::vector<std::shared_ptr<Subscription>> subs;
  {
    std::lock_guard lock(state_mu_);
    closed_ = true;
    subs.swap(subscribers_);
  }
  for (auto& s : subs) s->close();
}

TopologySnapshot TopoMonitor::last_snapshot() const {
  std::lock_guard lock(state_mu_);
  return last_;
}

}  // namespace umbrella::monitor
