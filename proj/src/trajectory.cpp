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

#include "treeplan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace treeplan
{

KinematicSample Trajectory::sample(double tau, double dt) const
{
  if (points.empty()) {
    throw ContractViolation("sampling an empty trajectory");
  }
  if (points.size() == 1 || tau <= 0.0) {
    const auto & p = points.front();
    return {p.x, p.v, p.a, p.jerk};
  }
  const auto last_interval = static_cast<int>(points.size()) - 2;
  const int i = std::clamp(static_cast<int>(std::floor(tau / dt + 1e-12)), 0, last_interval);
  const double s = std::min(tau - i * dt, dt);
  const auto & p = points[static_cast<std::size_t>(i)];

  KinematicSample out;
  if (i < padding_start) {
    const double j = p.jerk;
    out.a = p.a + j * s;
    out.v = std::max(0.0, p.v + p.a * s + 0.5 * j * s * s);
    out.x = std::max(p.x, p.x + p.v * s + 0.5 * p.a * s * s + j * s * s * s / 6.0);
    out.jerk = j;
  } else {
    // Acceleration steps jump to the commanded value at the interval start.
    const double a = points[static_cast<std::size_t>(i) + 1].a;
    out.a = a;
    out.v = std::max(0.0, p.v + a * s);
    out.x = std::max(p.x, p.x + p.v * s + 0.5 * a * s * s);
    out.jerk = p.jerk;
  }
  return out;
}

void check_trajectory(const Trajectory & traj, const MdpConfig & cfg)
{
  const auto steps = static_cast<std::size_t>(cfg.horizon_steps());
  if (traj.points.size() != steps + 1) {
    throw ContractViolation(
      "trajectory has " + std::to_string(traj.points.size()) + " points, expected " +
      std::to_string(steps + 1));
  }
  if (traj.padding_start < 0 || traj.padding_start > static_cast<int>(steps)) {
    throw ContractViolation("trajectory padding index out of range");
  }
  constexpr double kTol = 1e-9;
  const double dt = cfg.dt;
  for (std::size_t i = 0; i + 1 < traj.points.size(); ++i) {
    const auto & p = traj.points[i];
    const auto & n = traj.points[i + 1];
    if (std::abs(n.t - p.t - dt) > kTol) {
      throw ContractViolation("trajectory times are not on the dt grid");
    }
    double a = 0.0;
    double v = 0.0;
    double x = 0.0;
    if (static_cast<int>(i) < traj.padding_start) {
      a = std::clamp(p.a + p.commanded_jerk * dt, cfg.accel_min, cfg.accel_max);
      const double j = (a - p.a) / dt;
      v = std::max(0.0, p.v + p.a * dt + 0.5 * j * dt * dt);
      x = std::max(p.x, p.x + p.v * dt + 0.5 * p.a * dt * dt + j * dt * dt * dt / 6.0);
    } else {
      a = std::clamp(n.a, cfg.accel_min, cfg.accel_max);
      v = std::max(0.0, p.v + a * dt);
      x = std::max(p.x, p.x + p.v * dt + 0.5 * a * dt * dt);
    }
    if (std::abs(a - n.a) > kTol || std::abs(v - n.v) > kTol || std::abs(x - n.x) > kTol) {
      throw ContractViolation("trajectory step " + std::to_string(i) + " breaks the transition");
    }
  }
}

}  // namespace treeplan
