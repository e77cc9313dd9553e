// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "umbrella/core/events.hpp"
#include "umbrella/driver/driver.hpp"

namespace umbrella::monitor {

/// Ordered events turning `old_snapshot` into `new_snapshot`.
///
/// Removals first (hosts, links, devices), then port-list updates, then
/// additions (devices, links, hosts), each group in ascending order. Every
/// prefix of the list leaves a referentially closed topology, and replaying
/// the full list onto the old snapshot yields the new one.
std::vector<TopologyEvent> diff_snapshots(const TopologySnapshot& old_snapshot, const TopologySnapshot& new_snapshot);

struct MonitorConfig {
  std::uint32_t poll_interval_ms{500};
  std::size_t queue_capacity{1024};

  /// Throws ConfigError: poll_interval_ms < 10 or queue_capacity == 0.
  void validate() const;
};

/// Sent instead of events after a subscriber's queue overflowed; the
/// subscriber should replace its view with `snapshot`.
struct Resync {
  TopologySnapshot snapshot;
};

/// A poll failed; polling continues.
struct MonitorDegraded {
  DriverErrorKind kind;
  std::string detail;
};

using MonitorMessage = std::variant<TopologyEvent, Resync, MonitorDegraded>;

class TopoMonitor;

class Subscription {
 public:
  /// Blocks up to `timeout`. nullopt on timeout or once closed and drained.
  std::optional<MonitorMessage> receive(std::chrono::milliseconds timeout);
  std::optional<MonitorMessage> try_receive();

  /// Topology the first delivered event applies to.
  const TopologySnapshot& baseline() const { return baseline_; }
  bool lagged() const;
  bool closed() const;
  std::uint64_t id() const { return id_; }

 private:
  friend class TopoMonitor;
  Subscription(std::uint64_t id, std::size_t capacity, TopologySnapshot baseline)
      : id_(id), capacity_(capacity), baseline_(std::move(baseline)) {}

  void push(std::vector<MonitorMessage> batch, const TopologySnapshot& current);
  void close();

  const std::uint64_t id_;
  const std::size_t capacity_;
  const TopologySnapshot baseline_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<MonitorMessage> queue_;
  bool lagged_{false};
  bool closed_{false};
};

/// Polls a driver's topology and fans out the diffs. Changes that appear
/// and revert within one poll interval are not observed.
class TopoMonitor {
 public:
  /// Takes the baseline snapshot and starts the polling thread. Throws
  /// DriverError(Unsupported) without topology_read, ConfigError.
  static std::unique_ptr<TopoMonitor> start(std::shared_ptr<Driver> driver, MonitorConfig config = {});

  /// Like start() but without a thread; drive it with poll_once().
  static std::unique_ptr<TopoMonitor> manual(std::shared_ptr<Driver> driver, MonitorConfig config = {});

  ~TopoMonitor();
  TopoMonitor(const TopoMonitor&) = delete;
  TopoMonitor& operator=(const TopoMonitor&) = delete;

  std::shared_ptr<Subscription> subscribe();

  /// One poll + diff + fan-out. Safe to call alongside the thread.
  void poll_once();

  /// Joins the polling thread and closes every subscription. Queued
  /// messages stay readable. Idempotent.
  void stop();

  TopologySnapshot last_snapshot() const;

 private:
  TopoMonitor(std::shared_ptr<Driver> driver, MonitorConfig config);
  void run();

  std::shared_ptr<Driver> driver_;
  const MonitorConfig config_;

  std::mutex poll_mu_;
  mutable std::mutex state_mu_;
  TopologySnapshot last_;
  bool degraded_{false};
  bool closed_{false};
  std::vector<std::shared_ptr<Subscription>> subscribers_;
  std::uint64_t next_id_{1};

  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  bool stopping_{false};
  std::thread thread_;
};

}  // namespace umbrella::monitor
