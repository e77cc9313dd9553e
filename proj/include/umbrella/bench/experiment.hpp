// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "umbrella/core/topology_spec.hpp"
#include "umbrella/driver/driver.hpp"
#include "umbrella/mock/mock_controller.hpp"
#include "umbrella/mock/traffic.hpp"

namespace umbrella::bench {

using mock::InstallMode;

/// Flow-rule setup time experiment.
///
/// For every size and repetition: a constant-rate train starts at t0, the
/// application computes the sender->receiver path at t0 + pre_install_delay
/// and installs one-directional rules, the train runs to completion, and
/// the lost-packet count gives the setup time.
struct ExperimentPlan {
  std::vector<std::uint32_t> sizes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::uint32_t repetitions{5};
  double rate_pps{1000.0};
  double pre_install_delay_ms{2000.0};
  double train_duration_ms{10000.0};
  InstallMode install_mode{InstallMode::Sequential};
  /// Concurrent install_flow calls in Parallel mode; 0 = path length.
  std::size_t parallel_fanout{0};
  std::uint16_t priority{100};
  /// Default: host on the lowest / highest datapath id.
  std::optional<MacAddress> sender;
  std::optional<MacAddress> receiver;

  double interval_ms() const { return 1000.0 / rate_pps; }
  /// Throws InvalidPlan.
  void validate() const;
};

enum class MeasurementKind { LossBased, AckBased };

std::string_view to_string(MeasurementKind kind);

struct ExperimentResult {
  std::uint32_t size{};
  MeasurementKind measurement{MeasurementKind::LossBased};
  std::vector<double> per_rep_setup_ms;
  std::vector<std::uint64_t> packets_sent;  // per rep
  std::vector<std::uint64_t> packets_lost;  // per rep
  double mean_setup_ms{0};
  double stddev_setup_ms{0};  // sample standard deviation
};

/// What the harness runs against for one topology size. `traffic` is set
/// when the testbed can emulate the sender/receiver (loss-based timing);
/// otherwise setup time is the wall-clock span from the first install
/// request to the last acknowledgement.
struct Testbed {
  std::shared_ptr<Driver> driver;
  std::shared_ptr<TrafficPlane> traffic;
};

using TestbedFactory = std::function<Testbed(std::uint32_t size)>;

/// Fresh mock over generate_linear_topology(size). The plan's install mode
/// overrides latency.install_mode so both sides agree.
Testbed mock_testbed(std::uint32_t size, mock::LatencyModel latency);
TestbedFactory mock_testbed_factory(mock::LatencyModel latency, InstallMode mode);

/// Same driver for every size, no traffic plane (live controllers).
TestbedFactory fixed_testbed_factory(std::shared_ptr<Driver> driver);

/// max(0, packets_lost * interval_ms - pre_install_delay_ms)
double compute_setup_time(std::uint64_t packets_lost, double interval_ms, double pre_install_delay_ms);

/// Sizes the testbed cannot route (no path, sender == receiver) are skipped
/// and described in `diagnostics`. Driver errors propagate.
std::vector<ExperimentResult> run_experiment(const TestbedFactory& testbeds, const ExperimentPlan& plan,
                                             std::vector<std::string>* diagnostics = nullptr);

std::vector<ExperimentResult> run_experiment(std::shared_ptr<Driver> driver, const ExperimentPlan& plan,
                                             std::vector<std::string>* diagnostics = nullptr);

/// "size,rep,packets_sent,packets_lost,setup_ms" then one row per
/// (size, rep), reps numbered from 1. Throws InvalidPlan on empty input.
std::string render_csv(const std::vector<ExperimentResult>& results);
void export_csv(const std::vector<ExperimentResult>& results, const std::filesystem::path& path);

/// Whitespace-separated "size mean stddev" rows with '#' metadata lines.
std::string render_gnuplot(const std::vector<ExperimentResult>& results, const ExperimentPlan& plan);
void export_gnuplot(const std::vector<ExperimentResult>& results, const ExperimentPlan& plan,
                    const std::filesystem::path& path);

/// "10..100:10", "10,20,30" or "10". Throws InvalidPlan.
std::vector<std::uint32_t> parse_sizes(std::string_view text);

}  // namespace umbrella::bench
