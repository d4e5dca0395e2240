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

#include "treeplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

namespace treeplan
{

using nlohmann::json;

LightPhase TrafficLight::phase_at(double t) const
{
  if (schedule.empty()) {
    return LightPhase::kGreen;
  }
  LightPhase phase = schedule.front().phase;
  for (const auto & change : schedule) {
    if (change.t <= t) {
      phase = change.phase;
    } else {
      break;
    }
  }
  return phase;
}

void Scenario::validate() const
{
  auto fail = [this](const std::string & field, const std::string & what) {
      throw ScenarioFormatError("scenario '" + id + "': " + field + ": " + what);
    };
  if (id.empty()) {
    fail("id", "must be nonempty");
  }
  if (!(duration > 0.0) || !(warmup >= 0.0) || warmup >= duration) {
    fail("duration", "need duration > warmup >= 0");
  }
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    fail("map.v_max", "must be positive");
  }
  if (!(ego_v >= 0.0) || !std::isfinite(ego_v)) {
    fail("ego.v", "initial speed must be nonnegative");
  }
  if (!std::isfinite(ego_x) || !std::isfinite(ego_a) || !std::isfinite(ego_lateral_offset)) {
    fail("ego", "kinematics must be finite");
  }
  if (!(path_length > 0.0) || goal_offset > path_length || goal_offset < ego_x) {
    fail("map", "need ego.x <= goal_offset <= path_length");
  }
  if (light) {
    if (light->schedule.empty()) {
      fail("traffic_light.schedule", "must be nonempty");
    }
    for (std::size_t i = 1; i < light->schedule.size(); ++i) {
      if (!(light->schedule[i].t > light->schedule[i - 1].t)) {
        fail("traffic_light.schedule[" + std::to_string(i) + "]", "times must increase");
      }
    }
  }
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const auto & trace = agents[a];
    const std::string field = "agents[" + std::to_string(a) + "]";
    if (trace.samples.empty()) {
      fail(field + ".trace", "must be nonempty");
    }
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
      const auto & s = trace.samples[i];
      if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.v)) {
        fail(field + ".trace[" + std::to_string(i) + "]", "values must be finite");
      }
      if (i > 0 && !(s.t > trace.samples[i - 1].t)) {
        fail(field + ".trace[" + std::to_string(i) + "]", "trace is not time-sorted");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// File format

namespace
{

std::string phase_name(LightPhase p)
{
  switch (p) {
    case LightPhase::kGreen: return "green";
    case LightPhase::kYellow: return "yellow";
    case LightPhase::kRed: return "red";
  }
  return "green";
}

std::pair<std::size_t, std::size_t> line_col(const std::string & text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Typed field access that reports the JSON path on failure.
class Reader
{
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string & path, const std::string & what) const
  {
    throw ScenarioFormatError(source_ + ": field '" + path + "': " + what);
  }

  const json & member(const json & obj, const std::string & path, const std::string & key) const
  {
    if (!obj.is_object()) {
      fail(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(join(path, key), "missing");
    }
    return *it;
  }

  double number(const json & obj, const std::string & path, const std::string & key) const
  {
    const auto & v = member(obj, path, key);
    if (!v.is_number()) {
      fail(join(path, key), "expected a number");
    }
    return v.get<double>();
  }

  double number_or(
    const json & obj, const std::string & path, const std::string & key, double fallback) const
  {
    return obj.contains(key) ? number(obj, path, key) : fallback;
  }

  std::string string(const json & obj, const std::string & path, const std::string & key) const
  {
    const auto & v = member(obj, path, key);
    if (!v.is_string()) {
      fail(join(path, key), "expected a string");
    }
    return v.get<std::string>();
  }

  static std::string join(const std::string & path, const std::string & key)
  {
    return path.empty() ? key : path + "." + key;
  }

private:
  std::string source_;
};

}  // namespace

Scenario parse_scenario(const std::string & text, const std::string & source)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioFormatError(
      source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error: " +
      e.what());
  }

  Reader r(source);
  if (r.string(doc, "", "format") != "treeplan-scenario") {
    r.fail("format", "expected \"treeplan-scenario\"");
  }
  const double version = r.number(doc, "", "version");
  if (version != kScenarioFormatVersion) {
    r.fail("version", "unsupported version " + std::to_string(static_cast<int>(version)));
  }

  Scenario s;
  s.id = r.string(doc, "", "id");
  s.family = doc.contains("family") ? r.string(doc, "", "family") : "";
  s.duration = r.number_or(doc, "", "duration", s.duration);
  s.warmup = r.number_or(doc, "", "warmup", s.warmup);

  const auto & ego = r.member(doc, "", "ego");
  s.ego_x = r.number(ego, "ego", "x");
  s.ego_v = r.number(ego, "ego", "v");
  s.ego_a = r.number_or(ego, "ego", "a", 0.0);
  s.ego_lateral_offset = r.number_or(ego, "ego", "lateral_offset", 0.0);

  const auto & map = r.member(doc, "", "map");
  s.path_length = r.number(map, "map", "path_length");
  s.v_max = r.number(map, "map", "v_max");
  s.goal_offset = r.number_or(map, "map", "goal_offset", s.path_length);

  if (doc.contains("prediction") && r.string(doc, "", "prediction") != "playback") {
    r.fail("prediction", "only \"playback\" predictions are supported");
  }

  if (doc.contains("traffic_light") && !doc["traffic_light"].is_null()) {
    const auto & tl = doc["traffic_light"];
    TrafficLight light;
    light.stop_line = r.number(tl, "traffic_light", "stop_line");
    const auto & sched = r.member(tl, "traffic_light", "schedule");
    if (!sched.is_array()) {
      r.fail("traffic_light.schedule", "expected an array");
    }
    for (std::size_t i = 0; i < sched.size(); ++i) {
      const std::string path = "traffic_light.schedule[" + std::to_string(i) + "]";
      PhaseChange change;
      change.t = r.number(sched[i], path, "t");
      const auto phase = r.string(sched[i], path, "phase");
      if (phase == "green") {
        change.phase = LightPhase::kGreen;
      } else if (phase == "yellow") {
        change.phase = LightPhase::kYellow;
      } else if (phase == "red") {
        change.phase = LightPhase::kRed;
      } else {
        r.fail(path + ".phase", "expected green, yellow or red");
      }
      light.schedule.push_back(change);
    }
    s.light = std::move(light);
  }

  if (doc.contains("agents")) {
    const auto & agents = doc["agents"];
    if (!agents.is_array()) {
      r.fail("agents", "expected an array");
    }
    for (std::size_t a = 0; a < agents.size(); ++a) {
      const std::string path = "agents[" + std::to_string(a) + "]";
      AgentTrace trace;
      trace.id = r.string(agents[a], path, "id");
      const auto & samples = r.member(agents[a], path, "trace");
      if (!samples.is_array()) {
        r.fail(path + ".trace", "expected an array of [t, x, v, in_path]");
      }
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto & row = samples[i];
        const std::string rp = path + ".trace[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 4 || !row[0].is_number() || !row[1].is_number() ||
          !row[2].is_number() || !(row[3].is_boolean() || row[3].is_number()))
        {
          r.fail(rp, "expected [t, x, v, in_path]");
        }
        TraceSample sample;
        sample.t = row[0].get<double>();
        sample.x = row[1].get<double>();
        sample.v = row[2].get<double>();
        sample.in_path = row[3].is_boolean() ? row[3].get<bool>() : row[3].get<double>() != 0.0;
        trace.samples.push_back(sample);
      }
      s.agents.push_back(std::move(trace));
    }
  }
  s.validate();
  return s;
}

std::string format_scenario(const Scenario & s)
{
  json doc;
  doc["format"] = "treeplan-scenario";
  doc["version"] = kScenarioFormatVersion;
  doc["id"] = s.id;
  doc["family"] = s.family;
  doc["duration"] = s.duration;
  doc["warmup"] = s.warmup;
  doc["ego"] = {{"x", s.ego_x}, {"v", s.ego_v}, {"a", s.ego_a},
    {"lateral_offset", s.ego_lateral_offset}};
  doc["map"] = {{"path_length", s.path_length}, {"v_max", s.v_max},
    {"goal_offset", s.goal_offset}};
  doc["prediction"] = "playback";
  if (s.light) {
    json sched = json::array();
    for (const auto & c : s.light->schedule) {
      sched.push_back({{"t", c.t}, {"phase", phase_name(c.phase)}});
    }
    doc["traffic_light"] = {{"stop_line", s.light->stop_line}, {"schedule", sched}};
  }
  json agents = json::array();
  for (const auto & a : s.agents) {
    json trace = json::array();
    for (const auto & p : a.samples) {
      trace.push_back(json::array({p.t, p.x, p.v, p.in_path}));
    }
    agents.push_back({{"id", a.id}, {"trace", trace}});
  }
  doc["agents"] = agents;
  return doc.dump(1) + "\n";
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioFormatError("cannot open scenario file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

void save_scenario(const Scenario & scenario, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write scenario file " + path.string());
  }
  out << format_scenario(scenario);
}

// ---------------------------------------------------------------------------
// Log playback

namespace
{

std::optional<AgentWorldState> interpolate(const AgentTrace & trace, double t)
{
  const auto & s = trace.samples;
  constexpr double kEps = 1e-9;
  if (s.empty() || t < s.front().t - kEps || t > s.back().t + kEps) {
    return std::nullopt;
  }
  AgentWorldState out;
  out.id = trace.id;
  if (s.size() == 1) {
    out.x = s[0].x;
    out.v = s[0].v;
    out.in_path = s[0].in_path;
    return out;
  }
  // Segment [i, i + 1] containing t; a sample time belongs to the segment it starts.
  auto it = std::upper_bound(
    s.begin(), s.end(), t, [](double value, const TraceSample & p) { return value < p.t; });
  std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  i = std::min(i, s.size() - 2);
  const auto & p0 = s[i];
  const auto & p1 = s[i + 1];
  const double span = p1.t - p0.t;
  const double w = std::clamp((t - p0.t) / span, 0.0, 1.0);
  out.x = p0.x + w * (p1.x - p0.x);
  out.v = p0.v + w * (p1.v - p0.v);
  out.a = (p1.v - p0.v) / span;
  out.in_path = w >= 1.0 ? p1.in_path : p0.in_path;
  return out;
}

}  // namespace

std::vector<AgentWorldState> step_world(const Scenario & scenario, double t, const MdpConfig & cfg)
{
  if (t < -1e-9 || t > scenario.episode_end(cfg) + 1e-9) {
    throw std::out_of_range("world time " + std::to_string(t) + " outside the episode");
  }
  std::vector<AgentWorldState> out;
  for (const auto & trace : scenario.agents) {
    if (auto state = interpolate(trace, t)) {
      out.push_back(std::move(*state));
    }
  }
  return out;
}

PredictionTable playback_predictions(const Scenario & scenario, double t, const MdpConfig & cfg)
{
  const int steps = cfg.horizon_steps();
  PredictionTable table;
  for (const auto & trace : scenario.agents) {
    std::vector<PredictedAgentState> row(static_cast<std::size_t>(steps) + 1);
    bool any = false;
    for (int j = 0; j <= steps; ++j) {
      if (auto state = interpolate(trace, t + j * cfg.dt)) {
        auto & p = row[static_cast<std::size_t>(j)];
        p.x = state->x;
        p.v = state->v;
        p.a = state->a;
        p.in_path = state->in_path;
        p.present = true;
        any = true;
      }
    }
    if (any) {
      table.agents.push_back(std::move(row));
    }
  }
  return table;
}

PlanningScene build_scene(
  const Scenario & scenario, double t, double x, double v, double a, const MdpConfig & cfg)
{
  PlanningScene scene;
  scene.ego_x = x;
  scene.ego_v = v;
  scene.ego_a = a;
  scene.ego_lateral_offset = scenario.ego_lateral_offset;
  scene.v_max = scenario.v_max;
  scene.goal_offset = scenario.goal_offset;
  if (scenario.light) {
    scene.light = TrafficLightView{scenario.light->stop_line, scenario.light->phase_at(t)};
  }
  scene.predictions = playback_predictions(scenario, t, cfg);
  return scene;
}

// ---------------------------------------------------------------------------
// Suite generation

std::string family_name(ScenarioFamily family)
{
  switch (family) {
    case ScenarioFamily::kConstantLead: return "constant-lead";
    case ScenarioFamily::kLeadBrake: return "lead-brake";
    case ScenarioFamily::kStopAndGo: return "stop-and-go";
    case ScenarioFamily::kCutIn: return "cut-in";
    case ScenarioFamily::kNoLead: return "no-lead";
    case ScenarioFamily::kRedLight: return "red-light";
  }
  return "unknown";
}

std::vector<ScenarioFamily> all_families()
{
  return {ScenarioFamily::kConstantLead, ScenarioFamily::kLeadBrake, ScenarioFamily::kStopAndGo,
    ScenarioFamily::kCutIn, ScenarioFamily::kNoLead, ScenarioFamily::kRedLight};
}

std::optional<ScenarioFamily> parse_family(const std::string & name)
{
  for (auto f : all_families()) {
    if (family_name(f) == name) {
      return f;
    }
  }
  return std::nullopt;
}

namespace
{

class Sampler
{
public:
  explicit Sampler(std::uint64_t seed)
  {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
  }

  double uniform(double lo, double hi)
  {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::size_t index(std::size_t n)
  {
    return std::min(n - 1, static_cast<std::size_t>(uniform(0.0, static_cast<double>(n))));
  }
  bool coin() { return (engine_() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
};

// Quantize sampled parameters so files stay readable. Dividing by the integer
// reciprocal yields the double nearest to the decimal value.
double q(double v, double step = 0.01)
{
  const double per_unit = std::round(1.0 / step);
  return std::round(v * per_unit) / per_unit;
}

// Integrates an agent from (x0, v0) with accel(t, v) on the 0.1 s grid.
AgentTrace simulate_agent(
  const std::string & id, double t0, double t_end, double x0, double v0,
  const std::function<double(double, double)> & accel,
  const std::function<bool(double)> & in_path = [](double) { return true; })
{
  AgentTrace trace;
  trace.id = id;
  const auto n = static_cast<int>(std::lround((t_end - t0) / kTraceResolution));
  double x = x0;
  double v = v0;
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + i * kTraceResolution;
    trace.samples.push_back({q(t, 1e-6), x, v, in_path(t)});
    const double a = accel(t, v);
    const double v_next = std::max(0.0, v + a * kTraceResolution);
    x += 0.5 * (v + v_next) * kTraceResolution;
    v = v_next;
  }
  return trace;
}

// Smallest initial bumper gap that lets the ego stop behind a lead at -4 m/s^2.
double safe_gap(double v_ego, double v_lead)
{
  return std::max(5.0, std::max(0.0, v_ego * v_ego - v_lead * v_lead) / 8.0 + 2.0);
}

Scenario make_scenario(Sampler & rng, ScenarioFamily family, const SuiteSpec & spec, std::size_t n)
{
  const MdpConfig cfg;
  Scenario s;
  char id[64];
  std::snprintf(id, sizeof(id), "%s-%04zu", family_name(family).c_str(), n);
  s.id = id;
  s.family = family_name(family);
  s.duration = spec.duration;
  s.warmup = spec.warmup;
  s.ego_x = 0.0;
  s.v_max = q(rng.uniform(10.0, 15.0));
  const double t_end = spec.duration + cfg.horizon + 1.0;

  auto lead_front = [&s](double gap) { return s.ego_x + gap + kVehicleLength; };

  switch (family) {
    case ScenarioFamily::kNoLead:
      s.ego_v = q(rng.uniform(0.0, s.v_max));
      break;
    case ScenarioFamily::kConstantLead: {
        s.ego_v = q(rng.uniform(0.0, s.v_max));
        const double vl = q(rng.uniform(0.0, s.v_max));
        const double gap = q(rng.uniform(std::min(safe_gap(s.ego_v, vl), 60.0), 60.0));
        s.agents.push_back(simulate_agent(
            "lead", 0.0, t_end, lead_front(gap), vl, [](double, double) { return 0.0; }));
        break;
      }
    case ScenarioFamily::kLeadBrake: {
        s.ego_v = q(rng.uniform(5.0, s.v_max));
        const double vl = q(rng.uniform(std::max(5.0, s.ego_v - 3.0), s.v_max));
        const double gap = q(rng.uniform(std::min(safe_gap(s.ego_v, vl), 60.0), 60.0));
        const double t_brake = q(rng.uniform(spec.warmup + 1.0, spec.warmup + 8.0));
        const double decel = q(rng.uniform(1.0, 4.0));
        s.agents.push_back(simulate_agent(
            "lead", 0.0, t_end, lead_front(gap), vl,
            [=](double t, double) { return t >= t_brake ? -decel : 0.0; }));
        break;
      }
    case ScenarioFamily::kStopAndGo: {
        s.ego_v = q(rng.uniform(0.0, s.v_max));
        const double cruise = q(rng.uniform(5.0, std::min(12.0, s.v_max)));
        const double gap = q(rng.uniform(std::min(safe_gap(s.ego_v, cruise), 60.0), 60.0));
        const double decel = q(rng.uniform(1.0, 4.0));
        const double accel = q(rng.uniform(1.0, 2.0));
        const double wait = q(rng.uniform(1.0, 4.0));
        const double hold = q(rng.uniform(2.0, 6.0));
        // Cruise, brake to a stop, wait, accelerate back, repeat.
        struct Phase
        {
          int mode = 0;  // 0 cruise, 1 brake, 2 stopped, 3 accelerate
          double since = 0.0;
        };
        auto phase = std::make_shared<Phase>();
        s.agents.push_back(simulate_agent(
            "lead", 0.0, t_end, lead_front(gap), cruise,
            [=](double t, double v) {
              switch (phase->mode) {
                case 0:
                  if (t - phase->since >= hold) {
                    *phase = {1, t};
                  }
                  break;
                case 1:
                  if (v <= 0.0) {
                    *phase = {2, t};
                  }
                  break;
                case 2:
                  if (t - phase->since >= wait) {
                    *phase = {3, t};
                  }
                  break;
                default:
                  if (v >= cruise) {
                    *phase = {0, t};
                  }
                  break;
              }
              switch (phase->mode) {
                case 1: return -decel;
                case 3: return std::min(accel, (cruise - v) / kTraceResolution);
                default: return 0.0;
              }
            }));
        break;
      }
    case ScenarioFamily::kCutIn: {
        // The ego cruises at the limit, so the logged insertion gap holds for
        // a planner that keeps its speed.
        s.ego_v = s.v_max;
        const double va = q(rng.uniform(std::max(2.0, s.ego_v - 6.0), s.ego_v - 1.0));
        const double t_insert = q(rng.uniform(spec.warmup + 1.0, spec.warmup + 8.0), 0.1);
        const double gap = q(rng.uniform(3.0, 10.0));
        const double t_appear = t_insert - 2.0;
        const double x_insert = s.ego_x + s.ego_v * t_insert + gap + kVehicleLength;
        const double x_appear = x_insert - va * 2.0;
        s.agents.push_back(simulate_agent(
            "cut-in", t_appear, t_end, x_appear, va, [](double, double) { return 0.0; },
            [t_insert](double t) { return t >= t_insert - 1e-9; }));
        break;
      }
    case ScenarioFamily::kRedLight: {
        s.ego_v = q(rng.uniform(5.0, s.v_max));
        TrafficLight light;
        const double min_d = std::max(40.0, s.ego_v * s.ego_v / 5.0 + 10.0);
        light.stop_line = q(s.ego_x + rng.uniform(min_d, std::max(min_d, 150.0)));
        if (rng.coin()) {
          const double t_green = q(rng.uniform(spec.warmup + 6.0, spec.warmup + 16.0), 0.1);
          light.schedule = {{0.0, LightPhase::kRed}, {t_green, LightPhase::kGreen}};
        } else {
          const double t_yellow = q(rng.uniform(spec.warmup, spec.warmup + 4.0), 0.1);
          light.schedule = {{0.0, LightPhase::kGreen}, {t_yellow, LightPhase::kYellow},
            {t_yellow + 3.0, LightPhase::kRed}, {t_yellow + 18.0, LightPhase::kGreen}};
        }
        s.light = light;
        break;
      }
  }
  s.path_length = std::ceil(s.ego_x + s.v_max * t_end + 200.0);
  s.goal_offset = s.path_length;
  s.validate();
  return s;
}

}  // namespace

std::vector<Scenario> generate_scenario_suite(std::uint64_t seed, const SuiteSpec & spec)
{
  const auto families = spec.families.empty() ? all_families() : spec.families;
  Sampler rng(seed);
  std::vector<Scenario> suite;
  suite.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto family = families[families.size() == 1 ? 0 : rng.index(families.size())];
    suite.push_back(make_scenario(rng, family, spec, i));
  }
  return suite;
}

std::filesystem::path write_suite(
  const std::vector<Scenario> & suite, const std::filesystem::path & dir, std::uint64_t seed)
{
  std::filesystem::create_directories(dir);
  json index;
  index["format"] = "treeplan-suite";
  index["version"] = kScenarioFormatVersion;
  index["seed"] = seed;
  json files = json::array();
  for (const auto & s : suite) {
    const auto name = s.id + ".json";
    save_scenario(s, dir / name);
    files.push_back(name);
  }
  index["scenarios"] = files;
  const auto path = dir / "index.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write suite index " + path.string());
  }
  out << index.dump(1) << "\n";
  return path;
}

std::vector<Scenario> load_suite(const std::filesystem::path & dir)
{
  const auto index_path = dir / "index.json";
  std::ifstream in(index_path, std::ios::binary);
  if (!in) {
    throw ScenarioFormatError("suite index not found: " + index_path.string());
  }
  json index;
  try {
    index = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ScenarioFormatError(index_path.string() + ": " + e.what());
  }
  if (index.value("format", "") != "treeplan-suite" || !index.contains("scenarios") ||
    !index["scenarios"].is_array())
  {
    throw ScenarioFormatError(index_path.string() + ": not a treeplan suite index");
  }
  std::vector<Scenario> suite;
  for (const auto & name : index["scenarios"]) {
    if (!name.is_string()) {
      throw ScenarioFormatError(index_path.string() + ": scenario entries must be strings");
    }
    suite.push_back(load_scenario(dir / name.get<std::string>()));
  }
  return suite;
}

}  // namespace treeplan
