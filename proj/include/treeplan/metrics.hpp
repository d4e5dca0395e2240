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

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treeplan/simulator.hpp"

namespace treeplan
{

class MetricsError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ComfortBounds
{
  double accel_min = -4.05;
  double accel_max = 2.40;
  double jerk_abs_max = 4.13;
};

struct OnsetRule
{
  double threshold = 0.5;  // |accel| in m/s^2
  double sustain = 0.3;    // seconds
};

struct MetricsRow
{
  std::string scenario_id;
  std::string planner;
  bool failed = false;
  int front_collisions = 0;
  int rear_collisions = 0;
  int traffic_light_violations = 0;
  double speed_violation = 0.0;  // fraction of ticks above v_max + 0.1
  std::optional<double> min_time_gap;  // empty without a lead
  bool comfortable = true;
  double min_jerk = 0.0;
  double max_jerk = 0.0;
  double max_abs_jerk = 0.0;
  double min_accel = 0.0;
  double max_accel = 0.0;
  // Human-likeness, present only with an expert log.
  std::optional<double> progress;
  std::optional<double> l2_error;
  std::optional<double> decel_delay;
  std::optional<double> accel_delay;
  std::optional<double> max_speed_error;
};

/// Metrics over the non-warmup ticks of `log`. Jerk is the finite difference
/// of consecutive tick accelerations.
MetricsRow compute_metrics(const RolloutLog & log, const RolloutLog * expert,
  const ComfortBounds & bounds = {}, const OnsetRule & onset = {});

/// First non-warmup time at which accel stays beyond the threshold (below
/// -threshold when `decel`) for the sustain window.
std::optional<double> onset_time(const RolloutLog & log, bool decel, const OnsetRule & onset);

struct MetricsSummary
{
  std::string planner;
  std::size_t scenarios = 0;
  std::size_t failures = 0;
  double front_collision_rate = 0.0;
  double rear_collision_rate = 0.0;
  double traffic_light_violation_rate = 0.0;
  double speed_violation = 0.0;
  std::optional<double> min_time_gap;
  double comfort_rate = 0.0;
  double mean_max_abs_jerk = 0.0;
  double mean_min_accel = 0.0;
  double mean_max_accel = 0.0;
  std::optional<double> progress;
  std::optional<double> l2_error;
  std::optional<double> decel_delay;
  std::optional<double> accel_delay;
  std::optional<double> max_speed_error;
};

/// Means over rows; optional fields average over the rows that have them.
/// Throws MetricsError on empty input.
MetricsSummary aggregate(std::span<const MetricsRow> rows);

struct LatencyStats
{
  std::size_t count = 0;
  double max = 0.0;
  double p9999 = 0.0;
  double p99 = 0.0;
  double p50 = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// Nearest-rank percentiles; units are those of the samples.
LatencyStats latency_stats(std::span<const double> samples);
double nearest_rank(std::span<const double> sorted, double percentile);

/// Rows of Max / P99.99 / P99 / P50 / Average with one column per entry.
std::string format_latency_table(
  const std::vector<std::pair<std::string, LatencyStats>> & columns);

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_csv(const CsvTable & table);
CsvTable parse_csv(const std::string & text);
void emit_csv(const CsvTable & table, const std::filesystem::path & path);
CsvTable read_csv(const std::filesystem::path & path);

/// Shortest round-trip decimal text; empty for nullopt.
std::string format_number(double value);
std::string format_number(const std::optional<double> & value);

CsvTable metrics_table(std::span<const MetricsRow> rows);
std::vector<MetricsRow> rows_from_table(const CsvTable & table);
CsvTable summary_table(std::span<const MetricsSummary> summaries);

}  // namespace treeplan
