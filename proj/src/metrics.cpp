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

#include "treeplan/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace treeplan
{

namespace
{

constexpr double kMovingSpeed = 0.01;
constexpr double kTimeGapSpeedFloor = 0.1;
constexpr double kSpeedLimitSlack = 0.1;

std::size_t first_metric_tick(const RolloutLog & log)
{
  std::size_t i = 0;
  while (i < log.ticks.size() && log.ticks[i].warmup) {
    ++i;
  }
  return i;
}

// Onset search over ticks [begin, end).
std::optional<double> onset_between(const RolloutLog & log, std::size_t begin, std::size_t end,
  bool decel, const OnsetRule & onset)
{
  const auto window = static_cast<std::size_t>(std::lround(onset.sustain / log.dt));
  auto beyond = [&](std::size_t k) {
      const double a = log.ticks[k].a;
      return decel ? a < -onset.threshold : a > onset.threshold;
    };
  for (std::size_t k = begin; k + window < end; ++k) {
    bool held = true;
    for (std::size_t j = k; j <= k + window; ++j) {
      if (!beyond(j)) {
        held = false;
        break;
      }
    }
    if (held) {
      return log.ticks[k].t;
    }
  }
  return std::nullopt;
}

std::optional<double> delay(const std::optional<double> & ego, const std::optional<double> & ref)
{
  if (!ego && !ref) {
    return 0.0;
  }
  if (ego && ref) {
    return *ego - *ref;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> onset_time(const RolloutLog & log, bool decel, const OnsetRule & onset)
{
  return onset_between(log, first_metric_tick(log), log.ticks.size(), decel, onset);
}

MetricsRow compute_metrics(const RolloutLog & log, const RolloutLog * expert,
  const ComfortBounds & bounds, const OnsetRule & onset)
{
  MetricsRow row;
  row.scenario_id = log.scenario_id;
  row.planner = log.planner;
  row.failed = log.failed;

  const std::size_t begin = first_metric_tick(log);
  const std::size_t end = log.ticks.size();
  if (begin >= end) {
    return row;
  }

  struct Contact
  {
    bool front = false;
    bool rear = false;
  };
  std::map<std::string, Contact> previous;
  std::size_t over_limit = 0;
  row.min_accel = std::numeric_limits<double>::infinity();
  row.max_accel = -std::numeric_limits<double>::infinity();
  row.min_jerk = std::numeric_limits<double>::infinity();
  row.max_jerk = -std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < end; ++k) {
    const auto & tick = log.ticks[k];
    const bool counted = k >= begin;
    std::map<std::string, Contact> current;
    std::optional<double> lead_gap;
    for (const auto & agent : tick.agents) {
      if (!agent.in_path) {
        continue;
      }
      Contact c;
      c.front = tick.x <= agent.x && tick.x > agent.x - kVehicleLength;
      c.rear = tick.x > agent.x && agent.x > tick.x - kVehicleLength;
      const auto prev = previous.find(agent.id);
      const Contact before = prev == previous.end() ? Contact{} : prev->second;
      if (counted && c.front && !before.front && tick.v > kMovingSpeed) {
        ++row.front_collisions;
      }
      if (counted && c.rear && !before.rear) {
        ++row.rear_collisions;
      }
      current[agent.id] = c;
      if (agent.x > tick.x) {
        const double gap = agent.x - kVehicleLength - tick.x;
        lead_gap = lead_gap ? std::min(*lead_gap, gap) : gap;
      }
    }
    previous = std::move(current);
    if (!counted) {
      continue;
    }

    if (lead_gap) {
      const double gap_s = *lead_gap / std::max(tick.v, kTimeGapSpeedFloor);
      row.min_time_gap = row.min_time_gap ? std::min(*row.min_time_gap, gap_s) : gap_s;
    }
    if (tick.v > log.v_max + kSpeedLimitSlack) {
      ++over_limit;
    }
    row.min_accel = std::min(row.min_accel, tick.a);
    row.max_accel = std::max(row.max_accel, tick.a);
    if (k > begin) {
      const auto & prev_tick = log.ticks[k - 1];
      const double jerk = (tick.a - prev_tick.a) / log.dt;
      row.min_jerk = std::min(row.min_jerk, jerk);
      row.max_jerk = std::max(row.max_jerk, jerk);
      if (log.light && prev_tick.x < log.light->stop_line && tick.x >= log.light->stop_line &&
        log.light->phase_at(tick.t) == LightPhase::kRed)
      {
        ++row.traffic_light_violations;
      }
    }
  }
  const std::size_t n = end - begin;
  if (n == 1) {
    row.min_jerk = 0.0;
    row.max_jerk = 0.0;
  }
  row.speed_violation = static_cast<double>(over_limit) / static_cast<double>(n);
  row.max_abs_jerk = std::max(std::abs(row.min_jerk), std::abs(row.max_jerk));
  row.comfortable = row.min_accel >= bounds.accel_min && row.max_accel <= bounds.accel_max &&
    row.max_abs_jerk <= bounds.jerk_abs_max;

  if (expert != nullptr && expert->ticks.size() >= end) {
    const auto & e = expert->ticks;
    const auto & g = log.ticks;
    const double ego_dist = g[end - 1].x - g[begin].x;
    const double exp_dist = e[end - 1].x - e[begin].x;
    row.progress = exp_dist > 1e-9 ? ego_dist / exp_dist : 1.0;

    double l2 = 0.0;
    double speed_err = 0.0;
    double exp_speed = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      l2 += std::abs(g[k].x - e[k].x);
      speed_err = std::max(speed_err, std::abs(g[k].v - e[k].v));
      exp_speed = std::max(exp_speed, e[k].v);
    }
    row.l2_error = l2 / static_cast<double>(n);
    row.max_speed_error = speed_err / std::max(exp_speed, kTimeGapSpeedFloor);
    row.decel_delay = delay(onset_between(log, begin, end, true, onset),
        onset_between(*expert, begin, end, true, onset));
    row.accel_delay = delay(onset_between(log, begin, end, false, onset),
        onset_between(*expert, begin, end, false, onset));
  }
  return row;
}

MetricsSummary aggregate(std::span<const MetricsRow> rows)
{
  if (rows.empty()) {
    throw MetricsError("cannot aggregate zero metrics rows");
  }
  MetricsSummary s;
  s.planner = rows.front().planner;
  s.scenarios = rows.size();
  const double n = static_cast<double>(rows.size());

  auto mean_of = [&](auto field) {
      double sum = 0.0;
      for (const auto & r : rows) {
        sum += static_cast<double>(field(r));
      }
      return sum / n;
    };
  auto mean_opt = [&](auto field) -> std::optional<double> {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto & r : rows) {
        if (const std::optional<double> v = field(r)) {
          sum += *v;
          ++count;
        }
      }
      if (count == 0) {
        return std::nullopt;
      }
      return sum / static_cast<double>(count);
    };

  for (const auto & r : rows) {
    s.failures += r.failed ? 1 : 0;
  }
  s.front_collision_rate = mean_of([](const MetricsRow & r) { return r.front_collisions; });
  s.rear_collision_rate = mean_of([](const MetricsRow & r) { return r.rear_collisions; });
  s.traffic_light_violation_rate =
    mean_of([](const MetricsRow & r) { return r.traffic_light_violations; });
  s.speed_violation = mean_of([](const MetricsRow & r) { return r.speed_violation; });
  s.comfort_rate = mean_of([](const MetricsRow & r) { return r.comfortable ? 1.0 : 0.0; });
  s.mean_max_abs_jerk = mean_of([](const MetricsRow & r) { return r.max_abs_jerk; });
  s.mean_min_accel = mean_of([](const MetricsRow & r) { return r.min_accel; });
  s.mean_max_accel = mean_of([](const MetricsRow & r) { return r.max_accel; });
  s.min_time_gap = mean_opt([](const MetricsRow & r) { return r.min_time_gap; });
  s.progress = mean_opt([](const MetricsRow & r) { return r.progress; });
  s.l2_error = mean_opt([](const MetricsRow & r) { return r.l2_error; });
  s.decel_delay = mean_opt([](const MetricsRow & r) { return r.decel_delay; });
  s.accel_delay = mean_opt([](const MetricsRow & r) { return r.accel_delay; });
  s.max_speed_error = mean_opt([](const MetricsRow & r) { return r.max_speed_error; });
  return s;
}

double nearest_rank(std::span<const double> sorted, double percentile)
{
  if (sorted.empty()) {
    throw MetricsError("percentile of an empty sample");
  }
  const double n = static_cast<double>(sorted.size());
  // A tiny slack keeps exact products such as 0.99 * 100 from rounding up.
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencyStats latency_stats(std::span<const double> samples)
{
  if (samples.empty()) {
    throw MetricsError("latency statistics need at least one sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  LatencyStats s;
  s.count = sorted.size();
  s.max = sorted.back();
  s.p9999 = nearest_rank(sorted, 99.99);
  s.p99 = nearest_rank(sorted, 99.0);
  s.p50 = nearest_rank(sorted, 50.0);
  const double n = static_cast<double>(sorted.size());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double var = 0.0;
  for (double x : sorted) {
    var += (x - s.mean) * (x - s.mean);
  }
  s.stddev = std::sqrt(var / n);
  return s;
}

std::string format_latency_table(
  const std::vector<std::pair<std::string, LatencyStats>> & columns)
{
  std::size_t width = 12;
  for (const auto & [name, stats] : columns) {
    width = std::max(width, name.size() + 2);
  }
  std::string out;
  char cell[64];
  std::snprintf(cell, sizeof(cell), "%-10s", "");
  out += cell;
  for (const auto & [name, stats] : columns) {
    std::snprintf(cell, sizeof(cell), "%*s", static_cast<int>(width), name.c_str());
    out += cell;
  }
  out += "\n";
  const std::pair<const char *, double LatencyStats::*> rows[] = {
    {"Max", &LatencyStats::max}, {"P99.99", &LatencyStats::p9999}, {"P99", &LatencyStats::p99},
    {"P50", &LatencyStats::p50}, {"Average", &LatencyStats::mean}};
  for (const auto & [label, member] : rows) {
    std::snprintf(cell, sizeof(cell), "%-10s", label);
    out += cell;
    for (const auto & column : columns) {
      std::snprintf(cell, sizeof(cell), "%*.3f", static_cast<int>(width), column.second.*member);
      out += cell;
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace
{

std::string quote(const std::string & field)
{
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_csv(const CsvTable & table)
{
  std::string out;
  auto line = [&out](const std::vector<std::string> & fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
          out += ',';
        }
        out += quote(fields[i]);
      }
      out += "\r\n";
    };
  line(table.header);
  for (const auto & row : table.rows) {
    line(row);
  }
  return out;
}

CsvTable parse_csv(const std::string & text)
{
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&]() {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      field_started = false;
    };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      ++i;
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) {
    throw MetricsError("unterminated quoted CSV field");
  }
  if (field_started || !record.empty()) {
    end_record();
  }
  CsvTable table;
  if (records.empty()) {
    return table;
  }
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw MetricsError("CSV row " + std::to_string(r) + " has " +
              std::to_string(records[r].size()) + " fields, header has " +
              std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

void emit_csv(const CsvTable & table, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw MetricsError("cannot write CSV file " + path.string());
  }
  out << format_csv(table);
  if (!out) {
    throw MetricsError("failed writing CSV file " + path.string());
  }
}

CsvTable read_csv(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MetricsError("cannot open CSV file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string format_number(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_number(const std::optional<double> & value)
{
  return value ? format_number(*value) : std::string{};
}

namespace
{

const std::vector<std::string> kMetricColumns = {"scenario_id", "planner", "failed",
  "front_collisions", "rear_collisions", "traffic_light_violations", "speed_violation",
  "min_time_gap_s", "comfortable", "min_jerk", "max_jerk", "max_abs_jerk", "min_accel",
  "max_accel", "progress", "l2_error_m", "decel_delay_s", "accel_delay_s", "max_speed_error"};

double parse_double(const std::string & text, const std::string & column)
{
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw MetricsError("column " + column + ": not a number: '" + text + "'");
  }
  return value;
}

std::optional<double> parse_opt(const std::string & text, const std::string & column)
{
  if (text.empty()) {
    return std::nullopt;
  }
  return parse_double(text, column);
}

}  // namespace

CsvTable metrics_table(std::span<const MetricsRow> rows)
{
  CsvTable table;
  table.header = kMetricColumns;
  for (const auto & r : rows) {
    table.rows.push_back({r.scenario_id, r.planner, r.failed ? "1" : "0",
      std::to_string(r.front_collisions), std::to_string(r.rear_collisions),
      std::to_string(r.traffic_light_violations), format_number(r.speed_violation),
      format_number(r.min_time_gap), r.comfortable ? "1" : "0", format_number(r.min_jerk),
      format_number(r.max_jerk), format_number(r.max_abs_jerk), format_number(r.min_accel),
      format_number(r.max_accel), format_number(r.progress), format_number(r.l2_error),
      format_number(r.decel_delay), format_number(r.accel_delay),
      format_number(r.max_speed_error)});
  }
  return table;
}

std::vector<MetricsRow> rows_from_table(const CsvTable & table)
{
  if (table.header != kMetricColumns) {
    throw MetricsError("CSV header does not match the metrics columns");
  }
  std::vector<MetricsRow> rows;
  for (const auto & f : table.rows) {
    MetricsRow r;
    std::size_t i = 0;
    auto next = [&]() -> const std::string & { return f[i++]; };
    auto col = [&]() -> const std::string & { return kMetricColumns[i - 1]; };
    r.scenario_id = next();
    r.planner = next();
    r.failed = next() == "1";
    r.front_collisions = static_cast<int>(parse_double(next(), col()));
    r.rear_collisions = static_cast<int>(parse_double(next(), col()));
    r.traffic_light_violations = static_cast<int>(parse_double(next(), col()));
    r.speed_violation = parse_double(next(), col());
    r.min_time_gap = parse_opt(next(), col());
    r.comfortable = next() == "1";
    r.min_jerk = parse_double(next(), col());
    r.max_jerk = parse_double(next(), col());
    r.max_abs_jerk = parse_double(next(), col());
    r.min_accel = parse_double(next(), col());
    r.max_accel = parse_double(next(), col());
    r.progress = parse_opt(next(), col());
    r.l2_error = parse_opt(next(), col());
    r.decel_delay = parse_opt(next(), col());
    r.accel_delay = parse_opt(next(), col());
    r.max_speed_error = parse_opt(next(), col());
    rows.push_back(std::move(r));
  }
  return rows;
}

CsvTable summary_table(std::span<const MetricsSummary> summaries)
{
  CsvTable table;
  table.header = {"planner", "scenarios", "failures", "front_collision_rate",
    "rear_collision_rate", "traffic_light_violation_rate", "speed_violation", "min_time_gap_s",
    "comfort_rate", "mean_max_abs_jerk", "mean_min_accel", "mean_max_accel", "progress",
    "l2_error_m", "decel_delay_s", "accel_delay_s", "max_speed_error"};
  for (const auto & s : summaries) {
    table.rows.push_back({s.planner, std::to_string(s.scenarios), std::to_string(s.failures),
      format_number(s.front_collision_rate), format_number(s.rear_collision_rate),
      format_number(s.traffic_light_violation_rate), format_number(s.speed_violation),
      format_number(s.min_time_gap), format_number(s.comfort_rate),
      format_number(s.mean_max_abs_jerk), format_number(s.mean_min_accel),
      format_number(s.mean_max_accel), format_number(s.progress), format_number(s.l2_error),
      format_number(s.decel_delay), format_number(s.accel_delay),
      format_number(s.max_speed_error)});
  }
  return table;
}

}  // namespace treeplan
