// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "umbrella/core/ids.hpp"

namespace umbrella {

/// Constant-rate packet stream between two hosts.
/// Packet i is emitted at start_at_ns + i * interval_ns, i in [0, count).
struct PacketTrain {
  MacAddress src_host;
  MacAddress dst_host;
  std::int64_t start_at_ns{0};
  std::int64_t interval_ns{1'000'000};
  std::uint64_t count{0};
  std::uint32_t frame_bytes{64};

  std::int64_t last_emission_ns() const {
    return count == 0 ? start_at_ns : start_at_ns + static_cast<std::int64_t>(count - 1) * interval_ns;
  }
};

struct DeliveryReport {
  std::uint64_t sent{0};
  std::uint64_t received{0};
  std::optional<std::uint64_t> first_received_index;
  /// Packets lost after the first delivered one. Zero means the losses form
  /// a prefix of the train.
  std::uint64_t interior_losses{0};
  bool complete{false};

  std::uint64_t lost() const { return sent - received; }
  bool operator==(const DeliveryReport&) const = default;
};

using TrainId = std::size_t;

/// Data-plane side of a simulated network, driven by a virtual clock.
///
/// A testbed that offers this interface lets the benchmark measure setup
/// time by packet loss; one without it is measured by install
/// acknowledgements instead.
class TrafficPlane {
 public:
  virtual ~TrafficPlane() = default;

  virtual std::int64_t now_ns() const = 0;

  /// Schedules a train. Throws InvalidTrain, UnknownHost.
  virtual TrainId start_train(const PacketTrain& train) = 0;

  /// Moves the clock to t. Throws ClockRegression when t < now.
  virtual void advance_to(std::int64_t t_ns) = 0;

  /// Processes everything up to and including the train's last emission.
  virtual DeliveryReport run_until_complete(TrainId id) = 0;

  virtual DeliveryReport train_report(TrainId id) const = 0;
};

}  // namespace umbrella
