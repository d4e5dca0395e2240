// Copyright 2026 The treeplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "treeplan/metrics.hpp"

namespace treeplan
{
namespace
{

// Log with the given per-tick accelerations; x and v follow by Euler steps.
RolloutLog log_from_accel(const std::vector<double> & accel, double v0 = 5.0)
{
  RolloutLog log;
  log.scenario_id = "synthetic";
  log.planner = "test";
  log.v_max = 10.0;
  double x = 0.0;
  double v = v0;
  for (std::size_t k = 0; k < accel.size(); ++k) {
    RolloutTick tick;
    tick.index = static_cast<int>(k);
    tick.t = 0.1 * static_cast<double>(k);
    tick.x = x;
    tick.v = v;
    tick.a = accel[k];
    log.ticks.push_back(tick);
    x += v * 0.1;
    v = std::max(0.0, v + accel[k] * 0.1);
  }
  return log;
}

TEST(Comfort, SmoothLogIsComfortable)
{
  const auto row = compute_metrics(log_from_accel(std::vector<double>(50, 0.5)), nullptr);
  EXPECT_TRUE(row.comfortable);
  EXPECT_EQ(row.max_abs_jerk, 0.0);
  EXPECT_EQ(row.min_accel, 0.5);
  EXPECT_EQ(row.front_collisions, 0);
  EXPECT_FALSE(row.min_time_gap.has_value());
  EXPECT_FALSE(row.progress.has_value());
}

TEST(Comfort, JerkSpikeFailsComfort)
{
  std::vector<double> accel(50, 0.0);
  accel[20] = 0.5;  // 5 m/s^3 up, then down
  const auto row = compute_metrics(log_from_accel(accel), nullptr);
  EXPECT_FALSE(row.comfortable);
  EXPECT_NEAR(row.max_jerk, 5.0, 1e-9);
  EXPECT_NEAR(row.min_jerk, -5.0, 1e-9);
  EXPECT_NEAR(row.max_abs_jerk, 5.0, 1e-9);
}

TEST(Comfort, AccelerationBounds)
{
  std::vector<double> accel(60, 0.0);
  for (std::size_t k = 10; k < 60; ++k) {
    accel[k] = std::max(-4.2, -0.3 * static_cast<double>(k - 9));
  }
  const auto row = compute_metrics(log_from_accel(accel, 12.0), nullptr);
  EXPECT_NEAR(row.max_abs_jerk, 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(row.min_accel, -4.2);
  EXPECT_FALSE(row.comfortable);
}

TEST(Comfort, WarmupTicksAreIgnored)
{
  std::vector<double> accel(50, 0.0);
  accel[5] = 3.0;
  auto log = log_from_accel(accel);
  for (std::size_t k = 0; k < 10; ++k) {
    log.ticks[k].warmup = true;
  }
  const auto row = compute_metrics(log, nullptr);
  EXPECT_TRUE(row.comfortable);
  EXPECT_EQ(row.max_accel, 0.0);
}

TEST(Safety, OverlapSpanningSeveralTicksIsOneCollision)
{
  auto log = log_from_accel(std::vector<double>(40, 0.0), 5.0);
  for (auto & tick : log.ticks) {
    // Agent body [x_tick - 1, x_tick + 3) on ticks 10 to 14: five ticks of overlap.
    const bool overlap = tick.index >= 10 && tick.index <= 14;
    AgentWorldState agent{"lead", overlap ? tick.x + 3.0 : tick.x + 20.0, 5.0, 0.0, true};
    tick.agents.push_back(agent);
  }
  const auto row = compute_metrics(log, nullptr);
  EXPECT_EQ(row.front_collisions, 1);
  EXPECT_EQ(row.rear_collisions, 0);
}

TEST(Safety, OutOfPathAgentsAreIgnored)
{
  auto log = log_from_accel(std::vector<double>(20, 0.0));
  for (auto & tick : log.ticks) {
    tick.agents.push_back({"side", tick.x + 1.0, 5.0, 0.0, false});
  }
  const auto row = compute_metrics(log, nullptr);
  EXPECT_EQ(row.front_collisions, 0);
  EXPECT_FALSE(row.min_time_gap.has_value());
}

TEST(Safety, RearContactAndTimeGap)
{
  auto log = log_from_accel(std::vector<double>(20, 0.0), 5.0);
  for (auto & tick : log.ticks) {
    tick.agents.push_back({"lead", tick.x + 14.0, 5.0, 0.0, true});  // 10 m gap at 5 m/s
    if (tick.index == 7) {
      tick.agents.push_back({"follower", tick.x - 1.0, 6.0, 0.0, true});
    }
  }
  const auto row = compute_metrics(log, nullptr);
  ASSERT_TRUE(row.min_time_gap.has_value());
  EXPECT_NEAR(*row.min_time_gap, 2.0, 1e-9);
  EXPECT_EQ(row.rear_collisions, 1);
}

TEST(Safety, RedLightCrossingAndSpeeding)
{
  auto log = log_from_accel(std::vector<double>(30, 0.0), 11.0);
  log.light = TrafficLight{15.0, {{0.0, LightPhase::kRed}}};
  const auto row = compute_metrics(log, nullptr);
  EXPECT_EQ(row.traffic_light_violations, 1);
  EXPECT_DOUBLE_EQ(row.speed_violation, 1.0);
  log.light = TrafficLight{15.0, {{0.0, LightPhase::kGreen}}};
  EXPECT_EQ(compute_metrics(log, nullptr).traffic_light_violations, 0);
}

TEST(HumanLikeness, SelfComparisonIsPerfect)
{
  std::vector<double> accel(80, 0.0);
  for (std::size_t k = 20; k < 40; ++k) {
    accel[k] = -1.0;
  }
  for (std::size_t k = 50; k < 70; ++k) {
    accel[k] = 1.0;
  }
  const auto log = log_from_accel(accel, 6.0);
  const auto row = compute_metrics(log, &log);
  EXPECT_DOUBLE_EQ(*row.progress, 1.0);
  EXPECT_DOUBLE_EQ(*row.l2_error, 0.0);
  EXPECT_DOUBLE_EQ(*row.decel_delay, 0.0);
  EXPECT_DOUBLE_EQ(*row.accel_delay, 0.0);
  EXPECT_DOUBLE_EQ(*row.max_speed_error, 0.0);
}

TEST(HumanLikeness, LateBrakingShowsAsPositiveDelay)
{
  std::vector<double> expert_accel(60, 0.0);
  std::vector<double> ego_accel(60, 0.0);
  for (std::size_t k = 10; k < 30; ++k) {
    expert_accel[k] = -1.0;
    ego_accel[k + 5] = -1.0;
  }
  const auto expert = log_from_accel(expert_accel);
  const auto ego = log_from_accel(ego_accel);
  const auto row = compute_metrics(ego, &expert);
  EXPECT_NEAR(*row.decel_delay, 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(*row.accel_delay, 0.0);  // neither accelerates
  EXPECT_GT(*row.progress, 1.0);
  EXPECT_GT(*row.l2_error, 0.0);
  const auto onset = onset_time(expert, true, {});
  ASSERT_TRUE(onset.has_value());
  EXPECT_NEAR(*onset, 1.0, 1e-9);
  EXPECT_FALSE(onset_time(expert, false, {}).has_value());
}

TEST(HumanLikeness, BriefDipIsNotAnOnset)
{
  std::vector<double> accel(40, 0.0);
  accel[10] = accel[11] = accel[12] = -1.0;  // 0.2 s, shorter than the window
  EXPECT_FALSE(onset_time(log_from_accel(accel), true, {}).has_value());
  accel[13] = -1.0;
  EXPECT_TRUE(onset_time(log_from_accel(accel), true, {}).has_value());
}

TEST(Aggregate, MeansAndOptionalFields)
{
  MetricsRow a;
  a.planner = "p";
  a.front_collisions = 1;
  a.comfortable = false;
  a.max_abs_jerk = 2.0;
  a.min_time_gap = 1.0;
  MetricsRow b;
  b.planner = "p";
  b.failed = true;
  b.max_abs_jerk = 4.0;
  const std::vector<MetricsRow> rows{a, b};
  const auto s = aggregate(rows);
  EXPECT_EQ(s.scenarios, 2u);
  EXPECT_EQ(s.failures, 1u);
  EXPECT_DOUBLE_EQ(s.front_collision_rate, 0.5);
  EXPECT_DOUBLE_EQ(s.comfort_rate, 0.5);
  EXPECT_DOUBLE_EQ(s.mean_max_abs_jerk, 3.0);
  EXPECT_DOUBLE_EQ(*s.min_time_gap, 1.0);
  EXPECT_FALSE(s.progress.has_value());
  EXPECT_THROW(aggregate(std::vector<MetricsRow>{}), MetricsError);
}

TEST(Latency, NearestRankPercentiles)
{
  std::vector<double> samples(100);
  std::iota(samples.begin(), samples.end(), 1.0);
  const auto s = latency_stats(samples);
  EXPECT_EQ(s.count, 100u);
  EXPECT_EQ(s.p50, 50.0);
  EXPECT_EQ(s.p99, 99.0);
  EXPECT_EQ(s.p9999, 100.0);
  EXPECT_EQ(s.max, 100.0);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_NEAR(s.stddev, std::sqrt((100.0 * 100.0 - 1.0) / 12.0), 1e-12);
  const std::vector<double> one{7.0};
  EXPECT_EQ(latency_stats(one).p50, 7.0);
  EXPECT_THROW(latency_stats(std::vector<double>{}), MetricsError);
}

TEST(Latency, TableHasOneColumnPerConfig)
{
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{3.0};
  const auto table =
    format_latency_table({{"first", latency_stats(a)}, {"second", latency_stats(b)}});
  for (const char * label : {"Max", "P99.99", "P99", "P50", "Average", "first", "second"}) {
    EXPECT_NE(table.find(label), std::string::npos) << label;
  }
}

TEST(Csv, RoundTripWithAwkwardFields)
{
  CsvTable table;
  table.header = {"name", "note"};
  table.rows = {{"plain", "comma, inside"}, {"quote \"here\"", "line\nbreak"},
    {"unicode \xc3\xa9\xe2\x82\xac", ""}};
  const auto text = format_csv(table);
  const auto back = parse_csv(text);
  EXPECT_EQ(back.header, table.header);
  EXPECT_EQ(back.rows, table.rows);
  const auto path = std::filesystem::temp_directory_path() / "treeplan-test.csv";
  emit_csv(table, path);
  const auto read = read_csv(path);
  std::filesystem::remove(path);
  EXPECT_EQ(read.rows, table.rows);
}

TEST(Csv, MetricsTableRoundTrip)
{
  std::vector<double> accel(60, 0.0);
  for (std::size_t k = 10; k < 30; ++k) {
    accel[k] = -0.7;
  }
  auto log = log_from_accel(accel);
  for (auto & tick : log.ticks) {
    tick.agents.push_back({"lead", tick.x + 13.3, 5.0, 0.0, true});
  }
  const auto expert = log_from_accel(std::vector<double>(60, 0.1));
  std::vector<MetricsRow> rows{compute_metrics(log, &expert), compute_metrics(log, nullptr)};
  rows[1].scenario_id = "needs, \"quoting\"";
  const auto back = rows_from_table(parse_csv(format_csv(metrics_table(rows))));
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].scenario_id, rows[i].scenario_id);
    EXPECT_EQ(back[i].min_time_gap, rows[i].min_time_gap);
    EXPECT_EQ(back[i].progress, rows[i].progress);
    EXPECT_EQ(back[i].decel_delay, rows[i].decel_delay);
    EXPECT_EQ(back[i].max_abs_jerk, rows[i].max_abs_jerk);
    EXPECT_EQ(back[i].comfortable, rows[i].comfortable);
  }
}

TEST(Csv, NumbersRoundTripExactly)
{
  for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 1e300, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::optional<double>{}), "");
}

}  // namespace
}  // namespace treeplan
