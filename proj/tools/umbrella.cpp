// SPDX-License-Identifier: Apache-2.0
//
// umbrella: command-line front end for the controller-neutral API.
//
//   umbrella topology show [--driver onos --endpoint http://host:8181 --json]
//   umbrella flows list|install|remove [--device of:... --file rules.json --id ID]
//   umbrella path compute --src-mac 00:00:00:00:00:01 --dst-mac 00:00:00:00:00:03
//   umbrella bench run --per-rule-ms 5 --sizes 10..100:10 --csv out.csv

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "umbrella/bench/experiment.hpp"
#include "umbrella/core/json_codec.hpp"
#include "umbrella/driver/registry.hpp"
#include "umbrella/path/pathfinder.hpp"

namespace {

using namespace umbrella;
using codec::json;

constexpr const char* kDefaultMockTopology = R"({"kind":"linear","n":3})";

struct ConnectionOptions {
  std::string config_file;
  std::string driver;
  std::string endpoint;
  std::string user;
  std::string password;
  std::string topology;
  double per_rule_ms{0};
  std::string install_mode{"seq"};
};

void add_connection_options(CLI::App& cmd, ConnectionOptions& opts) {
  cmd.add_option("--config", opts.config_file, "Driver config file")->check(CLI::ExistingFile);
  cmd.add_option("--driver", opts.driver, "Driver name (mock, onos, odl)");
  cmd.add_option("--endpoint", opts.endpoint, "Controller base URL");
  cmd.add_option("--user", opts.user, "Controller user name");
  cmd.add_option("--password", opts.password, "Controller password");
  cmd.add_option("--topology", opts.topology, "Mock topology: JSON text or a file holding it");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

DriverConfig resolve_config(const ConnectionOptions& opts) {
  DriverConfig config = opts.config_file.empty() ? DriverConfig{} : load_driver_config(opts.config_file);
  apply_env_overrides(config);
  if (!opts.driver.empty()) config.name = opts.driver;
  if (!opts.endpoint.empty()) config.endpoint = opts.endpoint;
  if (!opts.user.empty()) config.username = opts.user;
  if (!opts.password.empty()) config.password = opts.password;
  if (config.name.empty()) config.name = "mock";
  if (config.name == "mock") {
    if (!opts.topology.empty()) {
      const bool inline_json = opts.topology.find('{') != std::string::npos;
      config.extras["topology"] = inline_json ? opts.topology : read_file(opts.topology);
    } else if (!config.extra("topology") && !config.extra("topology_file")) {
      config.extras["topology"] = kDefaultMockTopology;
    }
  }
  return config;
}

std::shared_ptr<Driver> connect(const ConnectionOptions& opts, CapabilitySet required = {}) {
  return default_registry().create_driver(resolve_config(opts), required);
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void show_topology(const ConnectionOptions& opts, bool as_json) {
  const auto snapshot = connect(opts, {.topology_read = true})->get_topology();
  if (as_json) return print_json(codec::to_json(snapshot));
  fmt::print("{} devices, {} links, {} hosts\n", snapshot.devices().size(), snapshot.links().size(),
             snapshot.hosts().size());
  for (const auto& d : snapshot.devices()) {
    fmt::print("device {} ports {}\n", render_onos(d.id), fmt::join(d.ports, ","));
  }
  for (const auto& l : snapshot.links()) {
    fmt::print("link {}/{} -> {}/{}\n", render_onos(l.src.device), l.src.port_no, render_onos(l.dst.device),
               l.dst.port_no);
  }
  for (const auto& h : snapshot.hosts()) {
    fmt::print("host {} {} at {}/{}\n", h.mac.to_string(), h.ip ? h.ip->to_string() : "-",
               render_onos(h.attachment.device), h.attachment.port_no);
  }
}

void list_flows(const ConnectionOptions& opts, const std::string& device, bool as_json) {
  auto driver = connect(opts, {.flow_write = true});
  std::optional<DeviceId> filter;
  if (!device.empty()) filter = normalize_device_id(device);
  const auto flows = driver->list_flows(filter);
  if (as_json) {
    json out = json::array();
    for (const auto& f : flows) out.push_back({{"handle", codec::to_json(f.handle)}, {"rule", codec::to_json(f.rule)}});
    return print_json(out);
  }
  for (const auto& f : flows) fmt::print("{} {}\n", f.handle.driver_flow_id, to_string(f.rule));
}

void install_flows(const ConnectionOptions& opts, const std::string& file) {
  auto driver = connect(opts, {.flow_write = true});
  const auto doc = json::parse(file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(file));
  std::vector<FlowRule> rules;
  if (doc.is_array()) {
    for (const auto& r : doc) rules.push_back(codec::flow_rule_from_json(r));
  } else {
    rules.push_back(codec::flow_rule_from_json(doc));
  }
  for (const auto& r : rules) {
    const auto handle = driver->install_flow(r);
    fmt::print("{} {}\n", render_onos(handle.device), handle.driver_flow_id);
  }
}

void remove_flow(const ConnectionOptions& opts, const std::string& device, const std::string& id) {
  if (device.empty() || id.empty()) throw ConfigError("flows remove needs --device and --id");
  connect(opts, {.flow_write = true})->remove_flow(FlowHandle{normalize_device_id(device), id});
}

void compute_path(const ConnectionOptions& opts, const std::string& src_mac, const std::string& dst_mac,
                  const std::string& algorithm, bool as_json) {
  const auto snapshot = connect(opts, {.topology_read = true})->get_topology();
  auto host = [&](const std::string& text) {
    const Host* h = snapshot.find_host(MacAddress::parse(text));
    if (h == nullptr) throw UnknownHost("no host " + text);
    return *h;
  };
  const auto path = path::shortest_path(path::build_graph(snapshot), host(src_mac), host(dst_mac), algorithm);
  if (!path) throw Error(fmt::format("no path from {} to {}", src_mac, dst_mac));
  if (as_json) {
    json hops = json::array();
    for (const auto& h : path->hops) {
      hops.push_back({{"device", render_onos(h.device)}, {"in_port", h.in_port.port_no}, {"out_port", h.out_port.port_no}});
    }
    return print_json({{"src", src_mac}, {"dst", dst_mac}, {"hops", hops}});
  }
  for (const auto& h : path->hops) {
    fmt::print("{} in {} out {}\n", render_onos(h.device), h.in_port.port_no, h.out_port.port_no);
  }
}

struct BenchOptions {
  std::string sizes{"10..100:10"};
  std::uint32_t reps{5};
  double rate_pps{1000};
  double pre_delay_ms{2000};
  double duration_ms{10000};
  std::size_t fanout{0};
  std::string csv;
  std::string dat;
};

void run_bench(const ConnectionOptions& opts, const BenchOptions& bench_opts) {
  bench::ExperimentPlan plan;
  plan.sizes = bench::parse_sizes(bench_opts.sizes);
  plan.repetitions = bench_opts.reps;
  plan.rate_pps = bench_opts.rate_pps;
  plan.pre_install_delay_ms = bench_opts.pre_delay_ms;
  plan.train_duration_ms = bench_opts.duration_ms;
  plan.install_mode = mock::parse_install_mode(opts.install_mode);
  plan.parallel_fanout = bench_opts.fanout;

  const auto config = resolve_config(opts);
  bench::TestbedFactory testbeds;
  if (config.name == "mock") {
    testbeds = bench::mock_testbed_factory(mock::LatencyModel{opts.per_rule_ms, plan.install_mode, 0}, plan.install_mode);
  } else {
    testbeds = bench::fixed_testbed_factory(default_registry().create_driver(config, {.topology_read = true, .flow_write = true}));
  }
  std::vector<std::string> diagnostics;
  const auto results = bench::run_experiment(testbeds, plan, &diagnostics);
  for (const auto& d : diagnostics) fmt::print(stderr, "umbrella: {}\n", d);
  if (results.empty()) throw Error("no size produced a result");

  fmt::print("# {} install, {} timing\n", mock::to_string(plan.install_mode), bench::to_string(results.front().measurement));
  fmt::print("{:>6} {:>12} {:>12}\n", "size", "mean_ms", "stddev_ms");
  for (const auto& r : results) fmt::print("{:>6} {:>12.3f} {:>12.3f}\n", r.size, r.mean_setup_ms, r.stddev_setup_ms);
  if (!bench_opts.csv.empty()) bench::export_csv(results, bench_opts.csv);
  if (!bench_opts.dat.empty()) bench::export_gnuplot(results, plan, bench_opts.dat);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controller-neutral SDN northbound client"};
  app.require_subcommand(1);

  ConnectionOptions conn;
  bool as_json = false;
  std::string device, file, flow_id, src_mac, dst_mac, algorithm{path::kDefaultAlgorithm};
  BenchOptions bench_opts;

  auto* topology = app.add_subcommand("topology", "Topology queries")->require_subcommand(1);
  auto* topology_show = topology->add_subcommand("show", "Print the current topology");
  add_connection_options(*topology_show, conn);
  topology_show->add_flag("--json", as_json, "JSON output");

  auto* flows = app.add_subcommand("flows", "Flow rule management")->require_subcommand(1);
  auto* flows_list = flows->add_subcommand("list", "List installed flow rules");
  add_connection_options(*flows_list, conn);
  flows_list->add_option("--device", device, "Only this device");
  flows_list->add_flag("--json", as_json, "JSON output");
  auto* flows_install = flows->add_subcommand("install", "Install rules from a JSON file ('-' for stdin)");
  add_connection_options(*flows_install, conn);
  flows_install->add_option("--file", file, "Rule or array of rules")->required();
  auto* flows_remove = flows->add_subcommand("remove", "Remove one flow rule");
  add_connection_options(*flows_remove, conn);
  flows_remove->add_option("--device", device, "Device of the rule")->required();
  flows_remove->add_option("--id", flow_id, "Driver flow id")->required();

  auto* path_cmd = app.add_subcommand("path", "Path computation")->require_subcommand(1);
  auto* path_compute = path_cmd->add_subcommand("compute", "Shortest path between two hosts");
  add_connection_options(*path_compute, conn);
  path_compute->add_option("--src-mac", src_mac, "Source host")->required();
  path_compute->add_option("--dst-mac", dst_mac, "Destination host")->required();
  path_compute->add_option("--algorithm", algorithm, "Registered path algorithm");
  path_compute->add_flag("--json", as_json, "JSON output");

  auto* bench_cmd = app.add_subcommand("bench", "Flow rule setup time benchmark")->require_subcommand(1);
  auto* bench_run = bench_cmd->add_subcommand("run", "Run the setup time sweep");
  add_connection_options(*bench_run, conn);
  bench_run->add_option("--sizes", bench_opts.sizes, "Switch counts: 10..100:10, 10,20 or 10");
  bench_run->add_option("--reps", bench_opts.reps, "Repetitions per size")->check(CLI::PositiveNumber);
  bench_run->add_option("--rate-pps", bench_opts.rate_pps, "Packet train rate")->check(CLI::PositiveNumber);
  bench_run->add_option("--pre-delay-ms", bench_opts.pre_delay_ms, "Delay before path install")->check(CLI::NonNegativeNumber);
  bench_run->add_option("--duration-ms", bench_opts.duration_ms, "Packet train duration")->check(CLI::PositiveNumber);
  bench_run->add_option("--install-mode", conn.install_mode, "seq or par");
  bench_run->add_option("--fanout", bench_opts.fanout, "Concurrent installs in par mode (0 = path length)");
  bench_run->add_option("--per-rule-ms", conn.per_rule_ms, "Mock per-rule install latency")->check(CLI::NonNegativeNumber);
  bench_run->add_option("--csv", bench_opts.csv, "Write per-repetition CSV");
  bench_run->add_option("--dat", bench_opts.dat, "Write gnuplot data file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*topology_show) show_topology(conn, as_json);
    else if (*flows_list) list_flows(conn, device, as_json);
    else if (*flows_install) install_flows(conn, file);
    else if (*flows_remove) remove_flow(conn, device, flow_id);
    else if (*path_compute) compute_path(conn, src_mac, dst_mac, algorithm, as_json);
    else if (*bench_run) run_bench(conn, bench_opts);
  } catch (const std::exception& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    fmt::print(stderr, "umbrella: {}\n", message);
    return 1;
  }
  return 0;
}
