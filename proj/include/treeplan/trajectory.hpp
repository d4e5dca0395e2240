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

#include <vector>

#include "treeplan/mdp.hpp"

namespace treeplan
{

struct TrajectoryPoint
{
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
  // Jerk over the interval that starts at this point; zero on the last point.
  double commanded_jerk = 0.0;
  double jerk = 0.0;  // effective, after the acceleration clamp

  bool operator==(const TrajectoryPoint &) const = default;
};

struct KinematicSample
{
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
  double jerk = 0.0;
};

/// 1-D plan on the MDP grid. Intervals before `padding_start` come from the
/// search tree and integrate jerk; later ones come from the padding policy
/// and integrate a piecewise-constant acceleration.
struct Trajectory
{
  std::vector<TrajectoryPoint> points;
  int padding_start = 0;

  bool operator==(const Trajectory &) const = default;

  double duration() const { return points.empty() ? 0.0 : points.back().t - points.front().t; }

  /// Kinematics at `tau` seconds after the first point, integrated with the
  /// same closed form as the transition that produced the interval.
  KinematicSample sample(double tau, double dt) const;
};

/// Throws ContractViolation unless `traj` has horizon_steps + 1 points on the
/// dt grid whose ego kinematics are reproduced by re-applying the transitions.
void check_trajectory(const Trajectory & traj, const MdpConfig & cfg);

}  // namespace treeplan
