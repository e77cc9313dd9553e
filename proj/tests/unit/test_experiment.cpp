// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "umbrella/bench/experiment.hpp"
#include "umbrella/error.hpp"

using namespace umbrella;
using namespace umbrella::bench;

TEST(SetupTime, Formula) {
  EXPECT_DOUBLE_EQ(compute_setup_time(2050, 1.0, 2000.0), 50.0);
  EXPECT_DOUBLE_EQ(compute_setup_time(1000, 1.0, 2000.0), 0.0);
  EXPECT_DOUBLE_EQ(compute_setup_time(300, 10.0, 2000.0), 1000.0);
}

TEST(Plan, Validation) {
  ExperimentPlan p;
  EXPECT_NO_THROW(p.validate());
  p.sizes.clear();
  EXPECT_THROW(p.validate(), InvalidPlan);
  p = {};
  p.repetitions = 0;
  EXPECT_THROW(p.validate(), InvalidPlan);
  p = {};
  p.rate_pps = 0;
  EXPECT_THROW(p.validate(), InvalidPlan);
  p = {};
  p.train_duration_ms = p.pre_install_delay_ms;
  EXPECT_THROW(p.validate(), InvalidPlan);
}

TEST(Sizes, Parsing) {
  EXPECT_EQ(parse_sizes("10..30:10"), (std::vector<std::uint32_t>{10, 20, 30}));
  EXPECT_EQ(parse_sizes("2..4"), (std::vector<std::uint32_t>{2, 3, 4}));
  EXPECT_EQ(parse_sizes("5,7"), (std::vector<std::uint32_t>{5, 7}));
  EXPECT_EQ(parse_sizes("9"), (std::vector<std::uint32_t>{9}));
  for (const char* bad : {"", "0", "a", "5..2", "1..5:0", "1,,2"}) EXPECT_THROW(parse_sizes(bad), InvalidPlan) << bad;
}

TEST(Experiment, SequentialMockMatchesRuleCount) {
  ExperimentPlan plan;
  plan.sizes = {3, 6};
  plan.repetitions = 2;
  const auto results = run_experiment(mock_testbed_factory({4.0, InstallMode::Sequential, 0}, InstallMode::Sequential), plan);
  ASSERT_EQ(results.size(), 2u);
  for (const auto& r : results) {
    EXPECT_EQ(r.measurement, MeasurementKind::LossBased);
    EXPECT_EQ(r.per_rep_setup_ms.size(), 2u);
    EXPECT_DOUBLE_EQ(r.mean_setup_ms, 4.0 * r.size);
    EXPECT_DOUBLE_EQ(r.stddev_setup_ms, 0.0);
    EXPECT_EQ(r.packets_sent[0], 10000u);
  }
}

TEST(Experiment, ParallelIsFlat) {
  ExperimentPlan plan;
  plan.sizes = {2, 8};
  plan.repetitions = 1;
  plan.install_mode = InstallMode::Parallel;
  const auto results = run_experiment(mock_testbed_factory({4.0, InstallMode::Parallel, 0}, InstallMode::Parallel), plan);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_DOUBLE_EQ(results[0].mean_setup_ms, 4.0);
  EXPECT_DOUBLE_EQ(results[1].mean_setup_ms, 4.0);
}

TEST(Experiment, SingleSwitchIsSkipped) {
  ExperimentPlan plan;
  plan.sizes = {1, 2};
  plan.repetitions = 1;
  std::vector<std::string> diag;
  const auto results = run_experiment(mock_testbed_factory({1.0, InstallMode::Sequential, 0}, InstallMode::Sequential), plan, &diag);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].size, 2u);
  EXPECT_EQ(diag.size(), 1u);
}

TEST(Experiment, AckBasedWithoutTrafficPlane) {
  auto mock = mock::mock_with_topology(generate_linear_topology(3));
  ExperimentPlan plan;
  plan.sizes = {3};
  plan.repetitions = 2;
  const auto results = run_experiment(fixed_testbed_factory(mock), plan);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].measurement, MeasurementKind::AckBased);
  EXPECT_GE(results[0].mean_setup_ms, 0.0);
  EXPECT_TRUE(mock->list_flows().empty());
}

TEST(Export, CsvAndGnuplot) {
  ExperimentResult r{3, MeasurementKind::LossBased, {12.0, 14.0}, {100, 100}, {12, 14}, 13.0, 1.4142135623730951};
  EXPECT_EQ(render_csv({r}), "size,rep,packets_sent,packets_lost,setup_ms\n3,1,100,12,12\n3,2,100,14,14\n");
  const auto dat = render_gnuplot({r}, ExperimentPlan{});
  EXPECT_NE(dat.find("# measurement: "), std::string::npos);
  EXPECT_NE(dat.find("\n3 13 1.4142135623730951\n"), std::string::npos);
  EXPECT_THROW(render_csv({}), InvalidPlan);
}
