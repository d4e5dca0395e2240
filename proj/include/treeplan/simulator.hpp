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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "treeplan/planners.hpp"
#include "treeplan/policies.hpp"
#include "treeplan/scenario.hpp"

namespace treeplan
{

inline constexpr double kTickDt = 0.1;

struct RolloutTick
{
  int index = 0;
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
  // Executed over [t, t + 0.1). accel_step marks an acceleration jump at t
  // (padding-policy intervals) rather than a constant jerk.
  double jerk = 0.0;
  bool accel_step = false;
  bool warmup = false;
  int trajectory_id = -1;  // -1 when no plan was made at this tick
  double score = 0.0;
  std::size_t candidates = 0;
  std::vector<AgentWorldState> agents;
};

struct RolloutLog
{
  std::string scenario_id;
  std::string planner;
  std::uint64_t seed = 0;
  double dt = kTickDt;
  double warmup = 0.0;
  double v_max = 0.0;
  std::optional<TrafficLight> light;
  std::vector<RolloutTick> ticks;
  std::vector<double> latency;  // seconds, one per planning cycle
  bool failed = false;
  std::string failure;
};

struct SimConfig
{
  MdpConfig mdp;
  std::optional<double> duration;  // empty: the scenario duration
  double replan_hz = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Integrates one tick from (x, v, a) the way the executor does.
KinematicSample integrate_tick(double x, double v, double a, double jerk, bool accel_step,
  double dt = kTickDt);

/// Per-cycle search seed, a pure function of the run seed, scenario and tick.
std::uint64_t cycle_seed(std::uint64_t run_seed, const std::string & scenario_id, int tick);

/// Closed-loop run with perfect tracking of the selected trajectory. A planner
/// exception ends the log with failed = true.
RolloutLog run_closed_loop(const Scenario & scenario, const Planner & planner,
  const SimConfig & cfg);

/// Comfort-tuned IDM with a jerk limiter driven closed loop over the scenario
/// plus one planning horizon, so every tick has an 8 s expert future.
struct ExpertConfig
{
  IdmParams idm{0.0, 1.5, 1.2, 1.5, 2.0, 4.0};
  double jerk_limit = 4.0;
};

RolloutLog expert_oracle(const Scenario & scenario, const MdpConfig & mdp = {},
  const ExpertConfig & cfg = {});

/// Expert future from tick `index` sampled on the MDP grid, as a trajectory.
Trajectory expert_future(const RolloutLog & expert, int index, const MdpConfig & mdp);

/// Line-delimited JSON. Latency is left out so the file depends only on the
/// seed; see format_latency for the timing sidecar.
std::string format_rollout(const RolloutLog & log);
std::string format_latency(const RolloutLog & log);
void save_rollout(const RolloutLog & log, const std::filesystem::path & path);

}  // namespace treeplan
