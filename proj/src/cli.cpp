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

#include "treeplan/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "treeplan/benchmark.hpp"
#include "treeplan/irl_scorer.hpp"
#include "treeplan/metrics.hpp"
#include "treeplan/planners.hpp"
#include "treeplan/scenario.hpp"
#include "treeplan/simulator.hpp"
#include "treeplan/training.hpp"

#ifndef TREEPLAN_VERSION
#define TREEPLAN_VERSION "0.0.0"
#endif

namespace treeplan
{

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace
{

// ---------------------------------------------------------------------------
// Config snapshot <-> JSON

ordered_json to_json(const MdpConfig & c)
{
  ordered_json j;
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["gamma"] = c.gamma;
  j["accel_min"] = c.accel_min;
  j["accel_max"] = c.accel_max;
  j["alpha"] = c.alpha;
  j["delta"] = c.delta;
  j["stop_speed_epsilon"] = c.stop_speed_epsilon;
  j["negate_stop_term"] = c.negate_stop_term;
  j["weights"] = {{"jerk", c.weights.jerk}, {"accel", c.weights.accel},
    {"speed", c.weights.speed}, {"collision", c.weights.collision},
    {"clearance", c.weights.clearance}, {"stop", c.weights.stop}};
  return j;
}

ordered_json to_json(const SearchConfig & c)
{
  ordered_json j;
  j["iterations"] = c.iterations;
  j["top_k"] = c.top_k;
  j["c_puct"] = c.c_puct;
  j["q_max"] = c.q_max;
  j["epsilon_max"] = c.epsilon_max;
  return j;
}

ordered_json to_json(const IdmParams & p)
{
  ordered_json j;
  j["v0"] = p.v0;
  j["time_headway"] = p.time_headway;
  j["a_max"] = p.a_max;
  j["b"] = p.b;
  j["s0"] = p.s0;
  j["exponent"] = p.exponent;
  return j;
}

class JsonReader
{
public:
  explicit JsonReader(std::string what) : what_(std::move(what)) {}

  template<typename T>
  void read(const json & obj, const std::string & path, const char * key, T & target) const
  {
    if (!obj.contains(key)) {
      return;
    }
    const auto & v = obj[key];
    const std::string field = path.empty() ? key : path + "." + key;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) {
          throw UsageError("expected a boolean");
        }
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) {
          throw UsageError("expected a number");
        }
      } else {
        if (!v.is_string()) {
          throw UsageError("expected a string");
        }
      }
      target = v.get<T>();
    } catch (const std::exception & e) {
      throw UsageError(what_ + ": field '" + field + "': " + e.what());
    }
  }

  const json & object(const json & obj, const char * key) const
  {
    static const json empty = json::object();
    if (!obj.contains(key)) {
      return empty;
    }
    if (!obj[key].is_object()) {
      throw UsageError(what_ + ": field '" + key + "': expected an object");
    }
    return obj[key];
  }

private:
  std::string what_;
};

// Applies the "config" section shared by config files and manifests.
void apply_config(const json & cfg, RunManifest & m, const JsonReader & r)
{
  const auto & mdp = r.object(cfg, "mdp");
  r.read(mdp, "mdp", "dt", m.mdp.dt);
  r.read(mdp, "mdp", "horizon", m.mdp.horizon);
  r.read(mdp, "mdp", "gamma", m.mdp.gamma);
  r.read(mdp, "mdp", "accel_min", m.mdp.accel_min);
  r.read(mdp, "mdp", "accel_max", m.mdp.accel_max);
  r.read(mdp, "mdp", "alpha", m.mdp.alpha);
  r.read(mdp, "mdp", "delta", m.mdp.delta);
  r.read(mdp, "mdp", "stop_speed_epsilon", m.mdp.stop_speed_epsilon);
  r.read(mdp, "mdp", "negate_stop_term", m.mdp.negate_stop_term);
  const auto & w = r.object(mdp, "weights");
  r.read(w, "mdp.weights", "jerk", m.mdp.weights.jerk);
  r.read(w, "mdp.weights", "accel", m.mdp.weights.accel);
  r.read(w, "mdp.weights", "speed", m.mdp.weights.speed);
  r.read(w, "mdp.weights", "collision", m.mdp.weights.collision);
  r.read(w, "mdp.weights", "clearance", m.mdp.weights.clearance);
  r.read(w, "mdp.weights", "stop", m.mdp.weights.stop);

  const auto & search = r.object(cfg, "search");
  r.read(search, "search", "iterations", m.search.iterations);
  r.read(search, "search", "top_k", m.search.top_k);
  r.read(search, "search", "c_puct", m.search.c_puct);
  r.read(search, "search", "q_max", m.search.q_max);
  r.read(search, "search", "epsilon_max", m.search.epsilon_max);

  const auto & idm = r.object(cfg, "idm");
  r.read(idm, "idm", "v0", m.idm.v0);
  r.read(idm, "idm", "time_headway", m.idm.time_headway);
  r.read(idm, "idm", "a_max", m.idm.a_max);
  r.read(idm, "idm", "b", m.idm.b);
  r.read(idm, "idm", "s0", m.idm.s0);
  r.read(idm, "idm", "exponent", m.idm.exponent);

  const auto & pol = r.object(cfg, "policies");
  r.read(pol, "policies", "prior", m.prior);
  r.read(pol, "policies", "rollout", m.rollout);
  r.read(pol, "policies", "padding", m.padding);

  const auto & sim = r.object(cfg, "sim");
  if (sim.contains("duration") && !sim["duration"].is_null()) {
    double d = 0.0;
    r.read(sim, "sim", "duration", d);
    m.duration = d;
  }
  r.read(sim, "sim", "replan_hz", m.replan_hz);
}

json parse_json_text(const std::string & text, const std::string & what)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    throw UsageError(what + ": " + e.what());
  }
}

std::string read_file(const fs::path & path, const std::string & what)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingArtifact(what + " not found: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::string default_output(const std::string & command)
{
  const char * root = std::getenv("TREEPLAN_OUTPUT_ROOT");
  return (fs::path(root != nullptr && *root != '\0' ? root : "treeplan-out") / command).string();
}

// Scenario ids become file names; keep them inside the directory.
std::string file_stem(const std::string & id)
{
  std::string out = id;
  for (auto & c : out) {
    if (c == '/' || c == '\\' || c == '\0') {
      c = '_';
    }
  }
  return out == "." || out == ".." ? "_" + out : out;
}

std::vector<Scenario> load_suite_or_missing(const std::string & dir)
{
  if (dir.empty()) {
    throw UsageError("--suite is required");
  }
  if (!fs::exists(fs::path(dir) / "index.json")) {
    throw MissingArtifact("suite index not found: " + (fs::path(dir) / "index.json").string());
  }
  return load_suite(dir);
}

// Runs fn(i) for i in [0, n) on `jobs` threads; the first exception wins.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> & fn)
{
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    threads.emplace_back([&]() {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) {
              error = std::current_exception();
            }
          }
        }
      });
  }
  for (auto & t : threads) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

std::string format_summary(const MetricsSummary & s)
{
  std::ostringstream o;
  auto opt = [](const std::optional<double> & v) { return v ? format_number(*v) : "n/a"; };
  o << "planner " << s.planner << ": " << s.scenarios << " scenarios, " << s.failures
    << " failed\n"
    << "  front collisions/scenario   " << format_number(s.front_collision_rate) << "\n"
    << "  rear collisions/scenario    " << format_number(s.rear_collision_rate) << "\n"
    << "  red-light violations        " << format_number(s.traffic_light_violation_rate) << "\n"
    << "  speed-limit violation       " << format_number(s.speed_violation) << "\n"
    << "  min time gap (s)            " << opt(s.min_time_gap) << "\n"
    << "  comfort pass rate           " << format_number(s.comfort_rate) << "\n"
    << "  mean max |jerk| (m/s^3)     " << format_number(s.mean_max_abs_jerk) << "\n"
    << "  progress vs expert          " << opt(s.progress) << "\n"
    << "  L2 to expert (m)            " << opt(s.l2_error) << "\n"
    << "  decel delay (s)             " << opt(s.decel_delay) << "\n"
    << "  accel delay (s)             " << opt(s.accel_delay) << "\n"
    << "  max speed error (norm.)     " << opt(s.max_speed_error) << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// gen-scenarios

struct GenOptions
{
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<std::string> families;
  double duration = 30.0;
  double warmup = 4.0;
  std::string out;
};

int cmd_gen_scenarios(const GenOptions & o, std::ostream & out)
{
  SuiteSpec spec;
  spec.count = o.count;
  spec.duration = o.duration;
  spec.warmup = o.warmup;
  for (const auto & name : o.families) {
    const auto family = parse_family(name);
    if (!family) {
      throw UsageError("unknown scenario family '" + name + "'");
    }
    spec.families.push_back(*family);
  }
  if (!(o.duration > 0.0) || !(o.warmup >= 0.0) || o.warmup >= o.duration) {
    throw UsageError("need --duration > --warmup >= 0");
  }
  const auto suite = generate_scenario_suite(o.seed, spec);
  const auto index = write_suite(suite, o.out, o.seed);
  out << "wrote " << suite.size() << " scenarios, index " << index.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags
{
  std::string planner;
  std::string suite;
  std::string out;
  std::string model;
  std::string config;
  std::string from_manifest;
  std::uint64_t seed = 0;
  int jobs = 1;
  int iterations = 0;
  int top_k = 0;
  double c_puct = 0.0;
  double delta = 0.0;
  double duration = 0.0;
  double replan_hz = 0.0;
  std::string prior;
  std::string rollout;
  std::string padding;
  bool no_expert = false;
};

struct Given
{
  std::function<bool(const std::string &)> has;
};

RunManifest resolve_manifest(const SimulateFlags & f, const Given & given)
{
  RunManifest m;
  if (!f.from_manifest.empty()) {
    m = parse_manifest(read_file(f.from_manifest, "manifest"));
  }
  if (!f.config.empty()) {
    const auto doc = parse_json_text(read_file(f.config, "config file"), f.config);
    const JsonReader r(f.config);
    apply_config(doc.contains("config") ? doc["config"] : doc, m, r);
  }
  if (given.has("--planner")) {
    m.planner = f.planner;
  }
  if (given.has("--suite")) {
    m.suite = f.suite;
  }
  if (given.has("--seed")) {
    m.seed = f.seed;
  }
  if (given.has("--model")) {
    m.model = f.model;
  }
  if (given.has("--iterations")) {
    m.search.iterations = f.iterations;
  }
  if (given.has("--top-k")) {
    m.search.top_k = f.top_k;
  }
  if (given.has("--c-puct")) {
    m.search.c_puct = f.c_puct;
  }
  if (given.has("--delta")) {
    m.mdp.delta = f.delta;
  }
  if (given.has("--duration")) {
    m.duration = f.duration;
  }
  if (given.has("--replan-hz")) {
    m.replan_hz = f.replan_hz;
  }
  if (given.has("--prior")) {
    m.prior = f.prior;
  }
  if (given.has("--rollout")) {
    m.rollout = f.rollout;
  }
  if (given.has("--padding")) {
    m.padding = f.padding;
  }
  if (given.has("--no-expert")) {
    m.expert = false;
  }
  if (given.has("--out")) {
    m.output_dir = f.out;
  } else if (m.output_dir.empty()) {
    m.output_dir = default_output("simulate");
  }
  m.tool_version = TREEPLAN_VERSION;
  return m;
}

PlannerSpec planner_spec(const RunManifest & m)
{
  const auto kind = parse_planner(m.planner);
  if (!kind) {
    throw UsageError("unknown planner '" + m.planner + "' (expected idm, cs, mcts or tree-irl)");
  }
  PlannerSpec spec;
  spec.kind = *kind;
  spec.mdp = m.mdp;
  spec.search = m.search;
  spec.idm = m.idm;
  spec.prior = m.prior;
  spec.rollout = m.rollout;
  spec.padding = m.padding;
  if (*kind == PlannerKind::kTreeIrl) {
    if (m.model.empty()) {
      throw MissingArtifact("planner tree-irl needs --model FILE (or --model pass-through)");
    }
    if (m.model != "pass-through") {
      if (!fs::exists(m.model)) {
        throw MissingArtifact("model file not found: " + m.model);
      }
      spec.model = load_model(m.model);
    }
  }
  return spec;
}

int cmd_simulate(const SimulateFlags & flags, const Given & given, std::ostream & out)
{
  const auto manifest = resolve_manifest(flags, given);
  try {
    manifest.mdp.validate();
    manifest.search.validate();
    manifest.idm.validate();
  } catch (const std::logic_error & e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  } catch (const ConfigError & e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }
  const auto spec = planner_spec(manifest);
  std::unique_ptr<Planner> planner;
  try {
    planner = make_planner(spec);
  } catch (const ConfigError & e) {
    throw UsageError(e.what());
  }
  SimConfig sim;
  sim.mdp = manifest.mdp;
  sim.duration = manifest.duration;
  sim.replan_hz = manifest.replan_hz;
  sim.seed = manifest.seed;
  try {
    sim.validate();
  } catch (const std::logic_error & e) {
    throw UsageError(e.what());
  }
  const auto suite = load_suite_or_missing(manifest.suite);

  const fs::path dir = manifest.output_dir;
  fs::create_directories(dir / "logs");
  fs::create_directories(dir / "timing");
  write_file(dir / "manifest.json", format_manifest(manifest));

  std::vector<MetricsRow> rows(suite.size());
  parallel_for(suite.size(), flags.jobs, [&](std::size_t i) {
      const auto & scenario = suite[i];
      auto s = sim;
      if (s.duration && *s.duration > scenario.duration) {
        s.duration = scenario.duration;
      }
      const auto log = run_closed_loop(scenario, *planner, s);
      std::optional<RolloutLog> expert;
      if (manifest.expert) {
        expert = expert_oracle(scenario, manifest.mdp);
      }
      rows[i] = compute_metrics(log, expert ? &*expert : nullptr);
      const auto stem = file_stem(scenario.id);
      save_rollout(log, dir / "logs" / (stem + ".jsonl"));
      write_file(dir / "timing" / (stem + ".csv"), format_latency(log));
    });

  emit_csv(metrics_table(rows), dir / "metrics.csv");
  std::size_t failures = 0;
  for (const auto & r : rows) {
    failures += r.failed ? 1 : 0;
  }
  if (!rows.empty()) {
    const std::vector<MetricsSummary> summary{aggregate(rows)};
    emit_csv(summary_table(summary), dir / "summary.csv");
    out << format_summary(summary.front());
  } else {
    emit_csv(summary_table({}), dir / "summary.csv");
    out << "empty suite, nothing simulated\n";
  }
  if (failures > 0) {
    out << failures << " scenario(s) ended with a planner failure; see logs\n";
  }
  out << "outputs in " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train-scorer

struct TrainFlags
{
  std::string suite;
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
  int jobs = 1;
  int stride = 10;
  TrainHyper hyper;
  int iterations = 400;
  int top_k = 100;
  double delta = training_mdp_config().delta;
};

std::string format_dataset_stats(const DatasetStats & s, std::size_t usable)
{
  std::ostringstream o;
  o << "planning cycles " << s.cycles << ", usable samples " << usable
    << ", dropped (all candidates colliding) " << s.dropped_all_colliding
    << ", dropped (expert failed) " << s.dropped_expert_failed << "\n";
  return o.str();
}

int cmd_train_scorer(const TrainFlags & f, std::ostream & out)
{
  if (f.stride < 1 || f.iterations < 0 || f.top_k < 2 || f.hyper.epochs < 0 ||
    !(f.hyper.learning_rate > 0.0) || f.hyper.validation_fraction < 0.0 ||
    f.hyper.validation_fraction >= 1.0 || f.hyper.gamma_focal < 0.0)
  {
    throw UsageError("invalid training options");
  }
  DatasetConfig dc;
  if (!f.config.empty()) {
    RunManifest m;
    m.mdp = dc.mdp;
    m.search = dc.search;
    m.idm = dc.idm;
    const auto doc = parse_json_text(read_file(f.config, "config file"), f.config);
    apply_config(doc.contains("config") ? doc["config"] : doc, m, JsonReader(f.config));
    dc.mdp = m.mdp;
    dc.search = m.search;
    dc.idm = m.idm;
  }
  dc.mdp.delta = f.delta;
  dc.search.iterations = f.iterations;
  dc.search.top_k = f.top_k;
  dc.stride = f.stride;
  dc.seed = f.seed;
  dc.label.decay = f.hyper.decay;
  dc.label.velocity_weight = f.hyper.velocity_weight;
  auto hyper = f.hyper;
  hyper.seed = f.seed;

  const auto suite = load_suite_or_missing(f.suite);
  const fs::path dir = f.out;
  fs::create_directories(dir);

  ordered_json manifest;
  manifest["format"] = "treeplan-train-manifest";
  manifest["version"] = 1;
  manifest["tool_version"] = TREEPLAN_VERSION;
  manifest["suite"] = f.suite;
  manifest["seed"] = f.seed;
  manifest["stride"] = f.stride;
  manifest["config"] = {{"mdp", to_json(dc.mdp)}, {"search", to_json(dc.search)},
    {"idm", to_json(dc.idm)}};
  manifest["hyper"] = {{"epochs", hyper.epochs}, {"learning_rate", hyper.learning_rate},
    {"gamma_focal", hyper.gamma_focal}, {"decay", hyper.decay},
    {"velocity_weight", hyper.velocity_weight},
    {"validation_fraction", hyper.validation_fraction}, {"min_samples", hyper.min_samples}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  // Per-scenario datasets concatenated in suite order match a serial build.
  std::vector<std::vector<TrainSample>> parts(suite.size());
  std::vector<DatasetStats> part_stats(suite.size());
  parallel_for(suite.size(), f.jobs, [&](std::size_t i) {
      parts[i] = build_dataset({suite[i]}, dc, &part_stats[i]);
    });
  std::vector<TrainSample> dataset;
  DatasetStats stats;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (auto & s : parts[i]) {
      dataset.push_back(std::move(s));
    }
    stats.cycles += part_stats[i].cycles;
    stats.dropped_all_colliding += part_stats[i].dropped_all_colliding;
    stats.dropped_expert_failed += part_stats[i].dropped_expert_failed;
  }
  save_dataset(dataset, dir / "dataset.jsonl");
  out << format_dataset_stats(stats, dataset.size());

  if (dataset.size() < hyper.min_samples) {
    throw TrainingError("need at least " + std::to_string(hyper.min_samples) +
            " usable samples, got " + std::to_string(dataset.size()));
  }
  TrainResult result;
  try {
    result = train(dataset, hyper);
  } catch (const TrainingError & e) {
    // Past the sample-count check a training error is not a data shortage.
    throw std::runtime_error(e.what());
  }
  save_model(result.model, dir / "model.txt");

  std::string loss = "epoch,train_loss,validation_loss\n";
  for (std::size_t e = 0; e < result.train_loss.size(); ++e) {
    loss += std::to_string(e) + "," + format_number(result.train_loss[e]) + ",";
    if (e < result.validation_loss.size()) {
      loss += format_number(result.validation_loss[e]);
    }
    loss += "\n";
  }
  write_file(dir / "loss.csv", loss);

  std::ostringstream report;
  report << format_dataset_stats(stats, dataset.size());
  report << "train samples " << result.train_indices.size() << ", validation samples "
         << result.validation_indices.size() << "\n";
  report << "train loss " << format_number(result.train_loss.front()) << " -> "
         << format_number(result.train_loss.back()) << "\n";
  for (std::size_t k : {1, 5}) {
    report << "top-" << k << " accuracy: train "
           << format_number(top_k_accuracy(result.model, dataset, result.train_indices, k));
    if (!result.validation_indices.empty()) {
      report << ", validation "
             << format_number(
        top_k_accuracy(result.model, dataset, result.validation_indices, k));
    }
    report << "\n";
  }
  for (std::size_t d = 0; d < kFeatureCount; ++d) {
    report << "weight " << kFeatureNames[d] << " " << format_number(result.model.weights[d])
           << "\n";
  }
  write_file(dir / "report.txt", report.str());
  out << report.str();
  out << "model written to " << (dir / "model.txt").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchFlags
{
  std::string suite;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t count = 100;
};

int cmd_benchmark(const BenchFlags & f, std::ostream & out)
{
  std::vector<Scenario> suite;
  if (!f.suite.empty()) {
    suite = load_suite_or_missing(f.suite);
  } else {
    SuiteSpec spec;
    spec.count = f.count;
    suite = generate_scenario_suite(f.seed, spec);
  }
  if (suite.empty()) {
    throw UsageError("benchmark needs a nonempty suite");
  }
  pin_to_one_cpu();

  const auto results = run_benchmark(suite, default_bench_configs(), f.seed);
  std::vector<std::pair<std::string, LatencyStats>> columns;
  std::string samples_csv = "config,scenario,latency_ms\n";
  out << "trajectory generation latency over " << suite.size()
      << " scenarios, one thread (ms)\n";
  for (const auto & r : results) {
    for (std::size_t i = 0; i < r.ms.size(); ++i) {
      samples_csv += "\"" + r.config.label + "\"," + suite[i].id + "," +
        format_number(r.ms[i]) + "\n";
    }
    char line[160];
    std::snprintf(line, sizeof(line), "  %-24s %8.3f +- %7.3f  (n=%zu)\n",
      r.config.label.c_str(), r.stats.mean, r.stats.stddev, r.stats.count);
    out << line;
    columns.emplace_back(r.config.label, r.stats);
  }
  out << "\n" << format_latency_table(columns);
  if (!f.out.empty()) {
    fs::create_directories(f.out);
    write_file(fs::path(f.out) / "latency_samples.csv", samples_csv);
    write_file(fs::path(f.out) / "latency_table.txt", format_latency_table(columns));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportFlags
{
  std::vector<std::string> metrics;
  std::string timing;
  std::string out;
};

int cmd_report(const ReportFlags & f, std::ostream & out)
{
  if (f.metrics.empty() && f.timing.empty()) {
    throw UsageError("report needs metrics CSV files and/or --timing DIR");
  }
  std::map<std::string, std::vector<MetricsRow>> by_planner;
  for (const auto & path : f.metrics) {
    if (!fs::exists(path)) {
      throw MissingArtifact("metrics file not found: " + path);
    }
    for (auto & row : rows_from_table(read_csv(path))) {
      by_planner[row.planner].push_back(std::move(row));
    }
  }
  std::vector<MetricsSummary> summaries;
  for (const auto & [planner, rows] : by_planner) {
    summaries.push_back(aggregate(rows));
    out << format_summary(summaries.back());
  }
  if (!f.out.empty()) {
    emit_csv(summary_table(summaries), f.out);
  }
  if (!f.timing.empty()) {
    if (!fs::is_directory(f.timing)) {
      throw MissingArtifact("timing directory not found: " + f.timing);
    }
    std::vector<fs::path> files;
    for (const auto & entry : fs::directory_iterator(f.timing)) {
      if (entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<double> ms;
    for (const auto & file : files) {
      for (const auto & row : read_csv(file).rows) {
        ms.push_back(std::stod(row.at(1)));
      }
    }
    if (ms.empty()) {
      throw MissingArtifact("no latency samples under " + f.timing);
    }
    const auto stats = latency_stats(ms);
    out << "planner latency (ms) over " << stats.count << " cycles\n"
        << format_latency_table({{"latency", stats}});
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

std::string format_manifest(const RunManifest & m)
{
  ordered_json j;
  j["format"] = "treeplan-manifest";
  j["version"] = 1;
  j["tool_version"] = m.tool_version;
  j["command"] = "simulate";
  j["planner"] = m.planner;
  j["suite"] = m.suite;
  j["seed"] = m.seed;
  j["output_dir"] = m.output_dir;
  j["model"] = m.model;
  j["expert"] = m.expert;
  ordered_json cfg;
  cfg["mdp"] = to_json(m.mdp);
  cfg["search"] = to_json(m.search);
  cfg["idm"] = to_json(m.idm);
  cfg["policies"] = {{"prior", m.prior}, {"rollout", m.rollout}, {"padding", m.padding}};
  cfg["sim"] = {{"duration", m.duration ? ordered_json(*m.duration) : ordered_json(nullptr)},
    {"replan_hz", m.replan_hz}};
  j["config"] = cfg;
  return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string & text)
{
  const auto doc = parse_json_text(text, "manifest");
  const JsonReader r("manifest");
  if (!doc.is_object() || doc.value("format", "") != "treeplan-manifest") {
    throw UsageError("manifest: not a treeplan manifest");
  }
  RunManifest m;
  r.read(doc, "", "tool_version", m.tool_version);
  r.read(doc, "", "planner", m.planner);
  r.read(doc, "", "suite", m.suite);
  r.read(doc, "", "seed", m.seed);
  r.read(doc, "", "output_dir", m.output_dir);
  r.read(doc, "", "model", m.model);
  r.read(doc, "", "expert", m.expert);
  apply_config(r.object(doc, "config"), m, r);
  return m;
}

// ---------------------------------------------------------------------------
// Command line

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"treeplan: tree-search longitudinal planning and evaluation", "treeplan"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TREEPLAN_VERSION));

  GenOptions gen;
  gen.out = default_output("scenarios");
  auto * gen_cmd = app.add_subcommand("gen-scenarios", "Write a seeded synthetic scenario suite");
  gen_cmd->add_option("--seed", gen.seed, "Sampler seed");
  gen_cmd->add_option("--count", gen.count, "Number of scenarios")->required();
  gen_cmd->add_option("--family", gen.families,
    "Restrict to families (constant-lead, lead-brake, stop-and-go, cut-in, no-lead, red-light)");
  gen_cmd->add_option("--duration", gen.duration, "Scenario length (s)");
  gen_cmd->add_option("--warmup", gen.warmup, "Warmup excluded from metrics (s)");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  SimulateFlags sim;
  auto * sim_cmd = app.add_subcommand("simulate", "Closed-loop runs of one planner over a suite");
  sim_cmd->add_option("--planner", sim.planner, "idm, cs, mcts or tree-irl");
  sim_cmd->add_option("--suite", sim.suite, "Suite directory (with index.json)");
  sim_cmd->add_option("--out", sim.out, "Output directory");
  sim_cmd->add_option("--seed", sim.seed, "Run seed");
  sim_cmd->add_option("--model", sim.model, "Scorer model file, or pass-through");
  sim_cmd->add_option("--config", sim.config, "JSON config file; flags override it");
  sim_cmd->add_option("--from-manifest", sim.from_manifest, "Re-run from a manifest");
  sim_cmd->add_option("--jobs", sim.jobs, "Scenarios simulated in parallel")
  ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--iterations", sim.iterations, "Search iterations per cycle");
  sim_cmd->add_option("--top-k", sim.top_k, "Candidates kept from the tree");
  sim_cmd->add_option("--c-puct", sim.c_puct, "Exploration constant");
  sim_cmd->add_option("--delta", sim.delta, "Clearance buffer (m)");
  sim_cmd->add_option("--duration", sim.duration, "Simulated time per scenario (s)");
  sim_cmd->add_option("--replan-hz", sim.replan_hz, "Planning rate");
  sim_cmd->add_option("--prior", sim.prior, "Action prior (uniform)");
  sim_cmd->add_option("--rollout", sim.rollout, "Rollout policy (idm, cs)");
  sim_cmd->add_option("--padding", sim.padding, "Padding policy (idm, cs)");
  sim_cmd->add_flag("--no-expert", sim.no_expert, "Skip the expert drive and its metrics");

  TrainFlags train_flags;
  train_flags.out = default_output("scorer");
  auto * train_cmd =
    app.add_subcommand("train-scorer", "Build a labeled dataset and fit the scorer");
  train_cmd->add_option("--suite", train_flags.suite, "Suite directory")->required();
  train_cmd->add_option("--out", train_flags.out, "Output directory");
  train_cmd->add_option("--config", train_flags.config, "JSON config file");
  train_cmd->add_option("--seed", train_flags.seed, "Seed for search and the split");
  train_cmd->add_option("--jobs", train_flags.jobs, "Scenarios processed in parallel")
  ->check(CLI::PositiveNumber);
  train_cmd->add_option("--stride", train_flags.stride, "Ticks between sampled cycles");
  train_cmd->add_option("--iterations", train_flags.iterations, "Search iterations per cycle");
  train_cmd->add_option("--top-k", train_flags.top_k, "Candidates per sample");
  train_cmd->add_option("--delta", train_flags.delta, "Clearance buffer used in training (m)");
  train_cmd->add_option("--epochs", train_flags.hyper.epochs, "Gradient steps");
  train_cmd->add_option("--learning-rate", train_flags.hyper.learning_rate, "Step size");
  train_cmd->add_option("--gamma-focal", train_flags.hyper.gamma_focal, "Focal exponent");
  train_cmd->add_option("--decay", train_flags.hyper.decay, "Label distance decay per step");
  train_cmd->add_option("--velocity-weight", train_flags.hyper.velocity_weight,
    "Label velocity weight");
  train_cmd->add_option("--validation-fraction", train_flags.hyper.validation_fraction,
    "Held-out share of samples");
  train_cmd->add_option("--min-samples", train_flags.hyper.min_samples,
    "Fewest usable samples accepted");

  BenchFlags bench;
  auto * bench_cmd = app.add_subcommand("benchmark", "Single-thread generator latency table");
  bench_cmd->add_option("--suite", bench.suite, "Suite directory (default: generated)");
  bench_cmd->add_option("--count", bench.count, "Generated suite size when --suite is absent");
  bench_cmd->add_option("--seed", bench.seed, "Seed");
  bench_cmd->add_option("--out", bench.out, "Directory for latency samples and table");

  ReportFlags report;
  auto * report_cmd = app.add_subcommand("report", "Aggregate metrics CSVs and latency samples");
  report_cmd->add_option("metrics", report.metrics, "metrics.csv files");
  report_cmd->add_option("--timing", report.timing, "Directory of per-scenario timing CSVs");
  report_cmd->add_option("--out", report.out, "Summary CSV to write");

  std::vector<std::string> argv_store{"treeplan"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto & a : argv_store) {
    argv.push_back(a.data());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion &) {
    out << TREEPLAN_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      return cmd_gen_scenarios(gen, out);
    }
    if (sim_cmd->parsed()) {
      const Given given{[sim_cmd](const std::string & name) {
          return sim_cmd->get_option(name)->count() > 0;
        }};
      if (sim.from_manifest.empty() && sim.planner.empty()) {
        throw UsageError("simulate needs --planner (or --from-manifest)");
      }
      return cmd_simulate(sim, given, out);
    }
    if (train_cmd->parsed()) {
      return cmd_train_scorer(train_flags, out);
    }
    if (bench_cmd->parsed()) {
      return cmd_benchmark(bench, out);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report, out);
    }
  } catch (const UsageError & e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MissingArtifact & e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const ScenarioFormatError & e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const ModelFormatError & e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const TrainingError & e) {
    err << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const std::exception & e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace treeplan
