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

// Reference implementations written independently of the library, used as
// test oracles. They favour plain branches over std::clamp and friends so a
// shared mistake is unlikely.

#pragma once

#include <cmath>
#include <optional>

#include "treeplan/mdp.hpp"

namespace treeplan::oracle
{

struct Step
{
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
  double jerk = 0.0;
  bool clipped_high = false;
  bool clipped_low = false;
  bool speed_floor = false;
  bool position_floor = false;
};

/// Constant-jerk integration over one step with the acceleration clip and the
/// speed and position floors.
inline Step jerk_step(double x0, double v0, double a0, double command, double dt, double a_lo,
  double a_hi)
{
  Step s;
  double a1 = a0 + command * dt;
  if (a1 > a_hi) {
    a1 = a_hi;
    s.clipped_high = true;
  }
  if (a1 < a_lo) {
    a1 = a_lo;
    s.clipped_low = true;
  }
  const double j = (a1 - a0) / dt;
  double v1 = v0 + dt * (a0 + j * dt / 2.0);
  if (v1 < 0.0) {
    v1 = 0.0;
    s.speed_floor = true;
  }
  double x1 = x0 + dt * (v0 + dt * (a0 / 2.0 + j * dt / 6.0));
  if (x1 < x0) {
    x1 = x0;
    s.position_floor = true;
  }
  s.x = x1;
  s.v = v1;
  s.a = a1;
  s.jerk = j;
  return s;
}

/// Nearest in-path agent whose front bumper is ahead of `x`, as a rear-bumper
/// lead state.
inline std::optional<LeadState> lead_at(double x, const PredictionTable & pred, int step)
{
  std::optional<LeadState> lead;
  double best_front = 0.0;
  for (const auto & row : pred.agents) {
    const PredictedAgentState & p = row.at(static_cast<std::size_t>(step));
    if (!p.present || !p.in_path || p.x <= x) {
      continue;
    }
    if (!lead || p.x < best_front) {
      best_front = p.x;
      lead = LeadState{p.x - kVehicleLength, p.v, p.a};
    }
  }
  return lead;
}

inline double indicator(bool condition) { return condition ? 1.0 : 0.0; }

/// Reward as the sum of the ten cost terms, each written out on its own.
inline double reward(const LongState & s, double jerk, const MdpConfig & cfg)
{
  const RewardWeights & w = cfg.weights;
  const double x = s.x_ego;
  const double v = s.v_ego;
  const double a = s.a_ego;
  const bool stopped = std::fabs(v) < cfg.stop_speed_epsilon;

  const double jerk_term = w.jerk * jerk * jerk;
  const double accel_term = w.accel * a * a;
  const double speed_term = w.speed * std::fabs(s.v_max - v);
  const double limit_term = -2.0 * w.speed * indicator(std::fabs(s.v_max - v) < 0.5);

  double lead_collision = 0.0;
  double lead_clearance = 0.0;
  double lead_buffer = 0.0;
  if (s.lead.has_value()) {
    const double xl = s.lead->x;
    const double dv = s.lead->v - v;
    lead_collision = w.collision * indicator(x >= xl) * dv * dv;
    const double d = xl - x;
    lead_clearance = w.clearance * indicator(0.0 < d && d < cfg.delta) * (d - cfg.delta) *
      (d - cfg.delta);
    lead_buffer = w.stop * indicator(stopped && cfg.delta <= d && d < 3.0) *
      (s.v_max - 2.0 * v);
  }
  const double e = s.x_max - x;
  const double station_collision = w.collision * indicator(x >= s.x_max) * v * v;
  const double station_clearance = w.clearance * indicator(0.0 < e && e < cfg.delta) * e * e;
  const double station_buffer =
    w.stop * indicator(stopped && 0.0 <= e && e < 2.0) * (s.v_max - 2.0 * v);

  const double total = jerk_term + accel_term + speed_term + limit_term + lead_collision +
    station_collision + lead_clearance + station_clearance + lead_buffer + station_buffer;
  return -cfg.alpha * total;
}

/// |a - b| within `tol` scaled by max(1, |b|).
inline bool close(double a, double b, double tol)
{
  return std::fabs(a - b) <= tol * std::fmax(1.0, std::fabs(b));
}

}  // namespace treeplan::oracle
