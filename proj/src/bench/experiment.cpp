// SPDX-License-Identifier: Apache-2.0
#include "umbrella/bench/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>

#include <fmt/format.h>

#include "umbrella/error.hpp"
#include "umbrella/path/pathfinder.hpp"

namespace umbrella::bench {

void ExperimentPlan::validate() const {
  if (sizes.empty()) throw InvalidPlan("no topology sizes");
  for (auto n : sizes) {
    if (n == 0) throw InvalidPlan("topology size must be positive");
  }
  if (repetitions == 0) throw InvalidPlan("repetitions must be positive");
  if (!(rate_pps > 0) || !std::isfinite(rate_pps)) throw InvalidPlan("rate_pps must be positive");
  if (!(pre_install_delay_ms >= 0)) throw InvalidPlan("pre_install_delay_ms must be non-negative");
  if (!(train_duration_ms > pre_install_delay_ms)) {
    throw InvalidPlan("train_duration_ms must exceed pre_install_delay_ms");
  }
}

std::string_view to_string(MeasurementKind kind) {
  return kind == MeasurementKind::LossBased ? "loss-based" : "ack-based";
}

Testbed mock_testbed(std::uint32_t size, mock::LatencyModel latency) {
  auto controller = mock::mock_with_topology(generate_linear_topology(size), latency);
  return Testbed{controller, controller};
}

TestbedFactory mock_testbed_factory(mock::LatencyModel latency, InstallMode mode) {
  latency.install_mode = mode;
  return [latency](std::uint32_t size) { return mock_testbed(size, latency); };
}

TestbedFactory fixed_testbed_factory(std::shared_ptr<Driver> driver) {
  return [driver = std::move(driver)](std::uint32_t) { return Testbed{driver, nullptr}; };
}

double compute_setup_time(std::uint64_t packets_lost, double interval_ms, double pre_install_delay_ms) {
  return std::max(0.0, static_cast<double>(packets_lost) * interval_ms - pre_install_delay_ms);
}

namespace {

/// Skips the current size.
struct SizeAborted {
  std::string reason;
};

struct Endpoints {
  Host sender;
  Host receiver;
};

Endpoints pick_endpoints(const TopologySnapshot& snapshot, const ExperimentPlan& plan) {
  const auto& hosts = snapshot.hosts();
  auto by_mac = [&](const MacAddress& mac) -> Host {
    const Host* h = snapshot.find_host(mac);
    if (h == nullptr) throw SizeAborted{"host " + mac.to_string() + " not in topology"};
    return *h;
  };
  if (hosts.empty()) throw SizeAborted{"topology has no hosts"};
  auto attach_less = [](const Host& a, const Host& b) {
    return std::tie(a.attachment, a.mac) < std::tie(b.attachment, b.mac);
  };
  Host sender = plan.sender ? by_mac(*plan.sender) : *std::min_element(hosts.begin(), hosts.end(), attach_less);
  Host receiver = sender;
  if (plan.receiver) {
    receiver = by_mac(*plan.receiver);
  } else {
    // First host on the highest datapath id.
    const DeviceId last = std::max_element(hosts.begin(), hosts.end(), attach_less)->attachment.device;
    for (const auto& h : hosts) {
      if (h.attachment.device == last) {
        receiver = h;
        break;
      }
    }
  }
  if (sender.mac == receiver.mac) throw SizeAborted{"sender and receiver are the same host"};
  return {sender, receiver};
}

std::vector<FlowRule> plan_rules(Driver& driver, const Endpoints& ends, const ExperimentPlan& plan) {
  const auto snapshot = driver.get_topology();
  const auto graph = path::build_graph(snapshot);
  const auto host_path = path::shortest_path(graph, ends.sender, ends.receiver);
  if (!host_path) {
    throw SizeAborted{fmt::format("no path {} -> {}", ends.sender.mac.to_string(), ends.receiver.mac.to_string())};
  }
  return path::compile_one_directional(*host_path, plan.priority);
}

void remove_all(Driver& driver, const std::vector<FlowHandle>& handles) {
  for (const auto& h : handles) {
    try {
      driver.remove_flow(h);
    } catch (const DriverError& e) {
      if (e.kind() != DriverErrorKind::NotFound) throw;
    }
  }
}

std::vector<FlowHandle> install_rules(Driver& driver, const std::vector<FlowRule>& rules, const ExperimentPlan& plan) {
  std::vector<FlowHandle> handles;
  handles.reserve(rules.size());
  try {
    if (plan.install_mode == InstallMode::Sequential) {
      for (const auto& r : rules) handles.push_back(driver.install_flow(r));
      return handles;
    }
    const std::size_t fanout = plan.parallel_fanout == 0 ? std::max<std::size_t>(rules.size(), 1) : plan.parallel_fanout;
    for (std::size_t start = 0; start < rules.size(); start += fanout) {
      const auto end = std::min(rules.size(), start + fanout);
      std::vector<std::future<FlowHandle>> pending;
      for (auto i = start; i < end; ++i) {
        pending.push_back(std::async(std::launch::async, [&driver, &rule = rules[i]] { return driver.install_flow(rule); }));
      }
      std::exception_ptr failure;
      for (auto& f : pending) {
        try {
          handles.push_back(f.get());
        } catch (...) {
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    }
    return handles;
  } catch (...) {
    remove_all(driver, handles);
    throw;
  }
}

struct RepOutcome {
  double setup_ms{};
  std::uint64_t sent{};
  std::uint64_t lost{};
};

RepOutcome run_loss_based(Driver& driver, TrafficPlane& traffic, const Endpoints& ends, const ExperimentPlan& plan) {
  const auto interval_ns = static_cast<std::int64_t>(std::llround(1e9 / plan.rate_pps));
  const auto count = static_cast<std::uint64_t>(std::floor(plan.train_duration_ms * plan.rate_pps / 1000.0));
  const auto delay_ns = static_cast<std::int64_t>(std::llround(plan.pre_install_delay_ms * 1e6));

  const auto t0 = traffic.now_ns();
  const auto train = traffic.start_train(PacketTrain{ends.sender.mac, ends.receiver.mac, t0, interval_ns, count, 64});
  traffic.advance_to(t0 + delay_ns);
  const auto rules = plan_rules(driver, ends, plan);
  const auto handles = install_rules(driver, rules, plan);
  const auto report = traffic.run_until_complete(train);
  remove_all(driver, handles);

  if (report.interior_losses != 0) {
    throw std::logic_error(fmt::format("{} packets lost after the path was complete", report.interior_losses));
  }
  return RepOutcome{compute_setup_time(report.lost(), plan.interval_ms(), plan.pre_install_delay_ms), report.sent,
                    report.lost()};
}

RepOutcome run_ack_based(Driver& driver, const Endpoints& ends, const ExperimentPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  const auto rules = plan_rules(driver, ends, plan);
  const auto handles = install_rules(driver, rules, plan);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  remove_all(driver, handles);
  return RepOutcome{std::chrono::duration<double, std::milli>(elapsed).count(), 0, 0};
}

void summarize(ExperimentResult& r) {
  const auto n = static_cast<double>(r.per_rep_setup_ms.size());
  r.mean_setup_ms = std::accumulate(r.per_rep_setup_ms.begin(), r.per_rep_setup_ms.end(), 0.0) / n;
  double ss = 0;
  for (double v : r.per_rep_setup_ms) ss += (v - r.mean_setup_ms) * (v - r.mean_setup_ms);
  r.stddev_setup_ms = r.per_rep_setup_ms.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

}  // namespace

std::vector<ExperimentResult> run_experiment(const TestbedFactory& testbeds, const ExperimentPlan& plan,
                                             std::vector<std::string>* diagnostics) {
  plan.validate();
  std::vector<ExperimentResult> results;
  for (const auto size : plan.sizes) {
    Testbed bed = testbeds(size);
    require_capabilities(*bed.driver, CapabilitySet{.topology_read = true, .flow_write = true});
    ExperimentResult result;
    result.size = size;
    result.measurement = bed.traffic ? MeasurementKind::LossBased : MeasurementKind::AckBased;
    try {
      const auto ends = pick_endpoints(bed.driver->get_topology(), plan);
      for (std::uint32_t rep = 0; rep < plan.repetitions; ++rep) {
        const auto outcome = bed.traffic ? run_loss_based(*bed.driver, *bed.traffic, ends, plan)
                                         : run_ack_based(*bed.driver, ends, plan);
        result.per_rep_setup_ms.push_back(outcome.setup_ms);
        result.packets_sent.push_back(outcome.sent);
        result.packets_lost.push_back(outcome.lost);
      }
    } catch (const SizeAborted& abort) {
      if (diagnostics) diagnostics->push_back(fmt::format("size {}: {}", size, abort.reason));
      continue;
    }
    summarize(result);
    results.push_back(std::move(result));
  }
  return results;
}

std::vector<ExperimentResult> run_experiment(std::shared_ptr<Driver> driver, const ExperimentPlan& plan,
                                             std::vector<std::string>* diagnostics) {
  return run_experiment(fixed_testbed_factory(std::move(driver)), plan, diagnostics);
}

std::string render_csv(const std::vector<ExperimentResult>& results) {
  if (results.empty()) throw InvalidPlan("no results to export");
  auto ordered = results;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ExperimentResult& a, const ExperimentResult& b) { return a.size < b.size; });
  std::string out = "size,rep,packets_sent,packets_lost,setup_ms\n";
  for (const auto& r : ordered) {
    for (std::size_t i = 0; i < r.per_rep_setup_ms.size(); ++i) {
      out += fmt::format("{},{},{},{},{}\n", r.size, i + 1, r.packets_sent[i], r.packets_lost[i], r.per_rep_setup_ms[i]);
    }
  }
  return out;
}

namespace {
void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.flush()) throw Error("write to " + path.string() + " failed");
}
}  // namespace

void export_csv(const std::vector<ExperimentResult>& results, const std::filesystem::path& path) {
  write_file(path, render_csv(results));
}

std::string render_gnuplot(const std::vector<ExperimentResult>& results, const ExperimentPlan& plan) {
  if (results.empty()) throw InvalidPlan("no results to export");
  std::string out = "# flow rule setup time vs. number of switches\n";
  out += fmt::format("# measurement: {}\n", to_string(results.front().measurement));
  out += "# path computed at install time";
  out += results.front().measurement == MeasurementKind::AckBased ? " (inside the measured window)\n" : "\n";
  out += fmt::format("# install_mode: {}  repetitions: {}  rate_pps: {}  pre_install_delay_ms: {}\n",
                     mock::to_string(plan.install_mode), plan.repetitions, plan.rate_pps, plan.pre_install_delay_ms);
  out += "# size mean_setup_ms stddev_setup_ms\n";
  for (const auto& r : results) out += fmt::format("{} {} {}\n", r.size, r.mean_setup_ms, r.stddev_setup_ms);
  return out;
}

void export_gnuplot(const std::vector<ExperimentResult>& results, const ExperimentPlan& plan,
                    const std::filesystem::path& path) {
  write_file(path, render_gnuplot(results, plan));
}

std::vector<std::uint32_t> parse_sizes(std::string_view text) {
  auto number = [text](std::string_view part) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || v == 0) {
      throw InvalidPlan(fmt::format("bad sizes '{}'", text));
    }
    return v;
  };
  std::vector<std::uint32_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto colon = text.find(':', dots);
    const auto first = number(text.substr(0, dots));
    const auto last = number(text.substr(dots + 2, colon == std::string_view::npos ? std::string_view::npos : colon - dots - 2));
    const auto step = colon == std::string_view::npos ? 1u : number(text.substr(colon + 1));
    if (last < first) throw InvalidPlan(fmt::format("bad sizes '{}'", text));
    for (auto n = first; n <= last; n += step) out.push_back(n);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(number(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace umbrella::bench
