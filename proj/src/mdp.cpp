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

#include "treeplan/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treeplan
{

JerkAction JerkAction::from_jerk(double jerk)
{
  const double shifted = jerk + 2.0;
  const double rounded = std::round(shifted);
  if (rounded != shifted || rounded < 0.0 || rounded >= static_cast<double>(kCount)) {
    throw ContractViolation("jerk command must be one of {-2, -1, 0, 1, 2}");
  }
  return from_index(static_cast<std::size_t>(rounded));
}

int MdpConfig::horizon_steps() const
{
  return static_cast<int>(std::lround(horizon / dt));
}

void MdpConfig::validate() const
{
  if (!(dt > 0.0)) {
    throw ContractViolation("dt must be positive");
  }
  const double steps = horizon / dt;
  if (!(horizon > 0.0) || std::abs(steps - std::round(steps)) > 1e-9) {
    throw ContractViolation("horizon must be a positive multiple of dt");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ContractViolation("gamma must lie in (0, 1]");
  }
  if (!(accel_min < 0.0 && accel_max > 0.0)) {
    throw ContractViolation("acceleration bounds must straddle zero");
  }
  const auto & w = weights;
  for (double value : {w.jerk, w.accel, w.speed, w.collision, w.clearance, w.stop, alpha, delta}) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ContractViolation("reward weights, alpha and delta must be finite and nonnegative");
    }
  }
  if (!(stop_speed_epsilon > 0.0)) {
    throw ContractViolation("stop_speed_epsilon must be positive");
  }
}

void PredictionTable::validate(int horizon_steps) const
{
  for (const auto & row : agents) {
    if (static_cast<int>(row.size()) != horizon_steps + 1) {
      throw ContractViolation("prediction rows must hold one entry per timestep");
    }
    for (const auto & p : row) {
      if (p.present && !(std::isfinite(p.x) && std::isfinite(p.v) && std::isfinite(p.a))) {
        throw ContractViolation("predicted agent state is not finite");
      }
    }
  }
}

bool is_terminal(const LongState & s, const MdpConfig & cfg)
{
  // Times are sums of dt, so compare with a small slack below the horizon.
  return s.t >= cfg.horizon - 1e-9;
}

int time_step_index(double t, const MdpConfig & cfg)
{
  return static_cast<int>(std::lround(t / cfg.dt));
}

std::optional<LeadState> lead_lookup(double x_ego, const PredictionTable & pred, int step)
{
  if (step < 0) {
    throw ContractViolation("prediction step must be nonnegative");
  }
  const PredictedAgentState * best = nullptr;
  for (const auto & row : pred.agents) {
    if (step >= static_cast<int>(row.size())) {
      throw ContractViolation("prediction step beyond table");
    }
    const auto & p = row[static_cast<std::size_t>(step)];
    if (!p.present || !p.in_path || !(p.x > x_ego)) {
      continue;
    }
    if (best == nullptr || p.x < best->x) {
      best = &p;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return LeadState{best->x - kVehicleLength, best->v, best->a};
}

namespace
{

void require_live(const LongState & s, const MdpConfig & cfg)
{
  if (is_terminal(s, cfg)) {
    throw ContractViolation("transition from a terminal state");
  }
}

LongState advance_static(const LongState & s, const MdpConfig & cfg)
{
  LongState next;
  next.t = s.t + cfg.dt;
  next.x_max = s.x_max;
  next.v_max = s.v_max;
  return next;
}

}  // namespace

TransitionResult transition(
  const LongState & s, JerkAction a, const PredictionTable & pred, const MdpConfig & cfg)
{
  require_live(s, cfg);
  const double dt = cfg.dt;
  TransitionResult out;
  out.next = advance_static(s, cfg);
  auto & n = out.next;

  n.a_ego = std::clamp(s.a_ego + a.jerk() * dt, cfg.accel_min, cfg.accel_max);
  const double jerk = (n.a_ego - s.a_ego) / dt;
  n.v_ego = std::max(0.0, s.v_ego + s.a_ego * dt + 0.5 * jerk * dt * dt);
  n.x_ego = std::max(
    s.x_ego,
    s.x_ego + s.v_ego * dt + 0.5 * s.a_ego * dt * dt + jerk * dt * dt * dt / 6.0);
  n.lead = lead_lookup(s.x_ego, pred, time_step_index(n.t, cfg));
  out.effective_jerk = jerk;
  return out;
}

TransitionResult transition_accel(
  const LongState & s, double accel_cmd, const PredictionTable & pred, const MdpConfig & cfg)
{
  require_live(s, cfg);
  const double dt = cfg.dt;
  TransitionResult out;
  out.next = advance_static(s, cfg);
  auto & n = out.next;

  n.a_ego = std::clamp(accel_cmd, cfg.accel_min, cfg.accel_max);
  n.v_ego = std::max(0.0, s.v_ego + n.a_ego * dt);
  n.x_ego = std::max(s.x_ego, s.x_ego + s.v_ego * dt + 0.5 * n.a_ego * dt * dt);
  n.lead = lead_lookup(s.x_ego, pred, time_step_index(n.t, cfg));
  out.effective_jerk = (n.a_ego - s.a_ego) / dt;
  return out;
}

double cost(const LongState & s, double effective_jerk, const MdpConfig & cfg)
{
  const auto & w = cfg.weights;
  const double x = s.x_ego;
  const double v = s.v_ego;
  const double speed_error = std::abs(s.v_max - v);
  const bool stopped = std::abs(v) < cfg.stop_speed_epsilon;
  const double stop_sign = cfg.negate_stop_term ? -1.0 : 1.0;

  double c = w.jerk * effective_jerk * effective_jerk;
  c += w.accel * s.a_ego * s.a_ego;
  c += w.speed * speed_error;
  if (speed_error < 0.5) {
    c -= 2.0 * w.speed;
  }

  if (s.lead) {
    const double gap = s.lead->x - x;
    if (x >= s.lead->x) {
      const double dv = s.lead->v - v;
      c += w.collision * dv * dv;
    }
    if (gap > 0.0 && gap < cfg.delta) {
      const double e = gap - cfg.delta;
      c += w.clearance * e * e;
    }
    if (stopped && gap >= cfg.delta && gap < 3.0) {
      c += stop_sign * w.stop * (s.v_max - 2.0 * v);
    }
  }

  const double to_limit = s.x_max - x;
  if (x >= s.x_max) {
    c += w.collision * v * v;
  }
  if (to_limit > 0.0 && to_limit < cfg.delta) {
    c += w.clearance * to_limit * to_limit;
  }
  if (stopped && to_limit >= 0.0 && to_limit < 2.0) {
    c += stop_sign * w.stop * (s.v_max - 2.0 * v);
  }
  return c;
}

double reward(
  const LongState & /*s*/, JerkAction /*a*/, const LongState & s_next, double effective_jerk,
  const MdpConfig & cfg)
{
  return -cfg.alpha * cost(s_next, effective_jerk, cfg);
}

bool can_stop_before(double distance, double speed, const MdpConfig & cfg)
{
  if (distance < 0.0) {
    return false;
  }
  if (speed <= 0.0) {
    return true;
  }
  if (distance == 0.0) {
    return false;
  }
  return speed * speed / (2.0 * distance) <= -cfg.accel_min;
}

LongState init_state(const PlanningScene & scene, const MdpConfig & cfg)
{
  if (!(std::abs(scene.ego_lateral_offset) <= kMaxEgoLateralOffset)) {
    throw ScenarioError("ego is too far from the reference path to project");
  }
  if (!std::isfinite(scene.ego_x) || !std::isfinite(scene.ego_v) || !std::isfinite(scene.ego_a)) {
    throw ScenarioError("ego kinematics are not finite");
  }
  scene.predictions.validate(cfg.horizon_steps());

  LongState s;
  s.x_ego = scene.ego_x;
  s.v_ego = std::max(0.0, scene.ego_v);
  s.a_ego = std::clamp(scene.ego_a, cfg.accel_min, cfg.accel_max);
  s.t = 0.0;
  s.v_max = scene.v_max;
  s.x_max = scene.goal_offset;
  if (scene.light && scene.light->phase != LightPhase::kGreen) {
    const double distance = scene.light->stop_line - s.x_ego;
    if (can_stop_before(distance, s.v_ego, cfg)) {
      s.x_max = std::min(s.x_max, scene.light->stop_line);
    }
  }
  s.lead = lead_lookup(s.x_ego, scene.predictions, 0);
  return s;
}

}  // namespace treeplan
