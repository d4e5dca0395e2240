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

#include "treeplan/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace treeplan
{

void SimConfig::validate() const
{
  mdp.validate();
  if (!(replan_hz > 0.0) || replan_hz > 1.0 / kTickDt + 1e-9) {
    throw ContractViolation("replan_hz must lie in (0, 10]");
  }
  if (duration && !(*duration > 0.0)) {
    throw ContractViolation("duration must be positive");
  }
}

KinematicSample integrate_tick(double x, double v, double a, double jerk, bool accel_step,
  double dt)
{
  KinematicSample out;
  out.jerk = jerk;
  if (accel_step) {
    out.a = a + jerk * dt;
    out.v = std::max(0.0, v + out.a * dt);
    out.x = std::max(x, x + v * dt + 0.5 * out.a * dt * dt);
  } else {
    out.a = a + jerk * dt;
    out.v = std::max(0.0, v + a * dt + 0.5 * jerk * dt * dt);
    out.x = std::max(x, x + v * dt + 0.5 * a * dt * dt + jerk * dt * dt * dt / 6.0);
  }
  return out;
}

namespace
{

std::uint64_t splitmix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int tick_count(double duration)
{
  return static_cast<int>(std::lround(duration / kTickDt));
}

RolloutLog start_log(const Scenario & scenario, std::string planner, std::uint64_t seed)
{
  RolloutLog log;
  log.scenario_id = scenario.id;
  log.planner = std::move(planner);
  log.seed = seed;
  log.warmup = scenario.warmup;
  log.v_max = scenario.v_max;
  log.light = scenario.light;
  return log;
}

RolloutTick make_tick(const Scenario & scenario, int k, double x, double v, double a,
  const MdpConfig & mdp)
{
  RolloutTick tick;
  tick.index = k;
  tick.t = k * kTickDt;
  tick.x = x;
  tick.v = v;
  tick.a = a;
  tick.warmup = tick.t < scenario.warmup - 1e-9;
  tick.agents = step_world(scenario, tick.t, mdp);
  return tick;
}

}  // namespace

std::uint64_t cycle_seed(std::uint64_t run_seed, const std::string & scenario_id, int tick)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario_id) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(run_seed ^ h) + static_cast<std::uint64_t>(tick));
}

RolloutLog run_closed_loop(const Scenario & scenario, const Planner & planner,
  const SimConfig & cfg)
{
  cfg.validate();
  const double duration = cfg.duration.value_or(scenario.duration);
  if (duration > scenario.duration + 1e-9) {
    throw ContractViolation("closed-loop duration exceeds the scenario");
  }
  const auto & mdp = cfg.mdp;
  const int n_ticks = tick_count(duration);
  const int replan_every =
    std::max(1, static_cast<int>(std::lround(1.0 / (cfg.replan_hz * kTickDt))));

  RolloutLog log = start_log(scenario, planner.name(), cfg.seed);
  log.ticks.reserve(static_cast<std::size_t>(n_ticks) + 1);

  double x = scenario.ego_x;
  double v = std::max(0.0, scenario.ego_v);
  double a = std::clamp(scenario.ego_a, mdp.accel_min, mdp.accel_max);
  PlanResult plan;
  int plan_tick = -1;

  for (int k = 0; k <= n_ticks; ++k) {
    auto tick = make_tick(scenario, k, x, v, a, mdp);
    if (k == n_ticks) {
      log.ticks.push_back(std::move(tick));
      break;
    }
    if (plan_tick < 0 || (k - plan_tick) >= replan_every) {
      const auto scene = build_scene(scenario, tick.t, x, v, a, mdp);
      const auto start = std::chrono::steady_clock::now();
      try {
        plan = planner.plan(scene, cycle_seed(cfg.seed, scenario.id, k));
      } catch (const std::exception & e) {
        log.ticks.push_back(std::move(tick));
        log.failed = true;
        log.failure = e.what();
        return log;
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      log.latency.push_back(std::max(elapsed.count(), 1e-9));
      plan_tick = k;
      tick.trajectory_id = plan.trajectory_id;
      tick.score = plan.score;
      tick.candidates = plan.candidates;
    }

    // Follow the interval of the plan that contains this tick.
    const auto & traj = plan.trajectory;
    const double tau = (k - plan_tick) * kTickDt;
    const int last_interval = static_cast<int>(traj.points.size()) - 2;
    const int i = std::clamp(static_cast<int>(std::floor(tau / mdp.dt + 1e-9)), 0,
      std::max(0, last_interval));
    double jerk = 0.0;
    bool step = false;
    if (last_interval < 0) {
      jerk = 0.0;
    } else if (i < traj.padding_start) {
      jerk = traj.points[static_cast<std::size_t>(i)].jerk;
    } else if (std::abs(tau - i * mdp.dt) < 1e-9) {
      // Padding intervals hold a constant acceleration reached at their start.
      const double target = traj.points[static_cast<std::size_t>(i) + 1].a;
      if (target != a) {
        jerk = (target - a) / kTickDt;
        step = true;
      }
    }
    tick.jerk = jerk;
    tick.accel_step = step;
    log.ticks.push_back(std::move(tick));

    const auto next = integrate_tick(x, v, a, jerk, step);
    x = next.x;
    v = next.v;
    a = next.a;
  }
  return log;
}

RolloutLog expert_oracle(const Scenario & scenario, const MdpConfig & mdp,
  const ExpertConfig & cfg)
{
  cfg.idm.validate();
  const auto policy = AccelPolicy::idm(cfg.idm);
  RolloutLog log = start_log(scenario, "expert", 0);
  const int n_ticks = tick_count(scenario.episode_end(mdp));
  log.ticks.reserve(static_cast<std::size_t>(n_ticks) + 1);

  double x = scenario.ego_x;
  double v = std::max(0.0, scenario.ego_v);
  double a = std::clamp(scenario.ego_a, mdp.accel_min, mdp.accel_max);
  const double max_step = cfg.jerk_limit * kTickDt;
  for (int k = 0; k <= n_ticks; ++k) {
    auto tick = make_tick(scenario, k, x, v, a, mdp);
    if (k == n_ticks) {
      log.ticks.push_back(std::move(tick));
      break;
    }
    double command = 0.0;
    try {
      const auto scene = build_scene(scenario, tick.t, x, v, a, mdp);
      command = policy.accel(init_state(scene, mdp));
    } catch (const std::exception & e) {
      log.ticks.push_back(std::move(tick));
      log.failed = true;
      log.failure = e.what();
      return log;
    }
    const double target = std::clamp(command, a - max_step, a + max_step);
    const double jerk = (target - a) / kTickDt;
    tick.jerk = jerk;
    log.ticks.push_back(std::move(tick));
    const auto next = integrate_tick(x, v, a, jerk, false);
    x = next.x;
    v = next.v;
    a = next.a;
  }
  return log;
}

Trajectory expert_future(const RolloutLog & expert, int index, const MdpConfig & mdp)
{
  const int stride = static_cast<int>(std::lround(mdp.dt / expert.dt));
  const int steps = mdp.horizon_steps();
  const int last = index + stride * steps;
  if (index < 0 || last >= static_cast<int>(expert.ticks.size())) {
    throw ContractViolation("expert log too short for a full horizon");
  }
  Trajectory traj;
  for (int j = 0; j <= steps; ++j) {
    const auto & tick = expert.ticks[static_cast<std::size_t>(index + stride * j)];
    traj.points.push_back({j * mdp.dt, tick.x, tick.v, tick.a, 0.0, 0.0});
  }
  return traj;
}

std::string format_rollout(const RolloutLog & log)
{
  using nlohmann::ordered_json;
  std::string out;
  ordered_json header;
  header["format"] = "treeplan-rollout";
  header["version"] = 1;
  header["scenario"] = log.scenario_id;
  header["planner"] = log.planner;
  header["seed"] = log.seed;
  header["dt"] = log.dt;
  header["warmup"] = log.warmup;
  header["v_max"] = log.v_max;
  out += header.dump() + "\n";
  for (const auto & tick : log.ticks) {
    ordered_json row;
    row["k"] = tick.index;
    row["t"] = tick.t;
    row["x"] = tick.x;
    row["v"] = tick.v;
    row["a"] = tick.a;
    row["jerk"] = tick.jerk;
    row["accel_step"] = tick.accel_step;
    row["warmup"] = tick.warmup;
    row["traj"] = tick.trajectory_id;
    row["score"] = tick.score;
    row["candidates"] = tick.candidates;
    ordered_json agents = ordered_json::array();
    for (const auto & agent : tick.agents) {
      agents.push_back(ordered_json::array({agent.id, agent.x, agent.v, agent.in_path}));
    }
    row["agents"] = agents;
    out += row.dump() + "\n";
  }
  if (log.failed) {
    ordered_json end;
    end["failure"] = log.failure;
    out += end.dump() + "\n";
  }
  return out;
}

std::string format_latency(const RolloutLog & log)
{
  std::string out = "cycle,latency_ms\n";
  char line[64];
  for (std::size_t i = 0; i < log.latency.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.6f\n", i, log.latency[i] * 1e3);
    out += line;
  }
  return out;
}

void save_rollout(const RolloutLog & log, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write rollout log " + path.string());
  }
  out << format_rollout(log);
}

}  // namespace treeplan
