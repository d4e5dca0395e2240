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

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace treeplan
{

// Geometry convention used everywhere along the reference path: a vehicle's
// longitudinal offset is the position of its front bumper, and every vehicle
// is kVehicleLength long. The lead block of a LongState stores the lead's
// rear bumper, so x_lead - x_ego is the bumper-to-bumper gap.
inline constexpr double kVehicleLength = 4.0;

/// Raised when an operation is called outside its precondition.
class ContractViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Raised when a scene cannot be turned into a planning problem.
class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct LeadState
{
  double x = 0.0;  // rear bumper (m)
  double v = 0.0;
  double a = 0.0;

  bool operator==(const LeadState &) const = default;
};

struct LongState
{
  double x_ego = 0.0;
  double v_ego = 0.0;
  double a_ego = 0.0;
  std::optional<LeadState> lead;
  double t = 0.0;
  double x_max = 0.0;
  double v_max = 0.0;

  bool operator==(const LongState &) const = default;
};

/// Discrete jerk command. Index 0..4 maps to {-2, -1, 0, 1, 2} m/s^3.
class JerkAction
{
public:
  static constexpr std::size_t kCount = 5;

  constexpr JerkAction() = default;
  static constexpr JerkAction from_index(std::size_t index)
  {
    if (index >= kCount) {
      throw ContractViolation("jerk action index out of range");
    }
    JerkAction action;
    action.index_ = index;
    return action;
  }
  static JerkAction from_jerk(double jerk);

  constexpr std::size_t index() const { return index_; }
  constexpr double jerk() const { return static_cast<double>(index_) - 2.0; }

  bool operator==(const JerkAction &) const = default;

private:
  std::size_t index_ = 2;
};

inline constexpr std::array<JerkAction, JerkAction::kCount> kAllJerkActions = {
  JerkAction::from_index(0), JerkAction::from_index(1), JerkAction::from_index(2),
  JerkAction::from_index(3), JerkAction::from_index(4)};

struct RewardWeights
{
  double jerk = 0.05;
  double accel = 0.2;
  double speed = 0.1;
  double collision = 10.0;
  double clearance = 10.0;
  double stop = 0.1;
};

struct MdpConfig
{
  double dt = 0.5;
  double horizon = 8.0;
  double gamma = 0.99;
  double accel_min = -7.0;
  double accel_max = 2.0;
  double alpha = 1.0 / 30.0;
  double delta = 2.0;  // clearance buffer; 1 m when generating training data
  RewardWeights weights;
  double stop_speed_epsilon = 0.1;
  // Flips the sign of the two stopping-band terms. Off reproduces the cost as
  // written, which adds w_stop * (v_max - 2 v) inside the band.
  bool negate_stop_term = false;

  /// Number of transitions in one episode (16 for the default horizon).
  int horizon_steps() const;
  /// Throws ContractViolation when any field is out of range.
  void validate() const;
};

struct PredictedAgentState
{
  double x = 0.0;  // front bumper (m)
  double v = 0.0;
  double a = 0.0;
  bool in_path = false;
  bool present = false;
};

/// Per-agent predicted kinematics on the MDP time grid. Step j holds the
/// prediction for t = j * dt; step 0 is the current (measured) agent state.
struct PredictionTable
{
  std::vector<std::vector<PredictedAgentState>> agents;

  std::size_t agent_count() const { return agents.size(); }
  /// Throws ContractViolation when rows are ragged or contain non-finite values.
  void validate(int horizon_steps) const;
};

enum class LightPhase { kGreen, kYellow, kRed };

struct TrafficLightView
{
  double stop_line = 0.0;
  LightPhase phase = LightPhase::kGreen;
};

/// Scene context consumed by the generator at one planning cycle.
struct PlanningScene
{
  double ego_x = 0.0;
  double ego_v = 0.0;
  double ego_a = 0.0;
  double ego_lateral_offset = 0.0;
  double v_max = 0.0;
  double goal_offset = 0.0;
  std::optional<TrafficLightView> light;
  PredictionTable predictions;
};

struct TransitionResult
{
  LongState next;
  double effective_jerk = 0.0;
};

bool is_terminal(const LongState & s, const MdpConfig & cfg);

/// Grid index of a state's time offset.
int time_step_index(double t, const MdpConfig & cfg);

/// Nearest present, in-path agent at `step` whose front bumper is ahead of
/// `x_ego`. Transitions pass the ego position from the start of the step, so
/// an agent the ego drove through during the step stays the lead and its
/// overlap is charged instead of skipped.
std::optional<LeadState> lead_lookup(double x_ego, const PredictionTable & pred, int step);

TransitionResult transition(
  const LongState & s, JerkAction a, const PredictionTable & pred, const MdpConfig & cfg);

/// Transition variant for acceleration-space policies (rollout and padding).
TransitionResult transition_accel(
  const LongState & s, double accel_cmd, const PredictionTable & pred, const MdpConfig & cfg);

/// Sum of the cost terms evaluated on the post-transition state.
double cost(const LongState & s_next, double effective_jerk, const MdpConfig & cfg);

double reward(
  const LongState & s, JerkAction a, const LongState & s_next, double effective_jerk,
  const MdpConfig & cfg);

/// Reward of an already computed transition, whatever its action space.
inline double reward_of(const TransitionResult & step, const MdpConfig & cfg)
{
  return -cfg.alpha * cost(step.next, step.effective_jerk, cfg);
}

/// True when a constant deceleration of at most |accel_min| stops the ego
/// before the line.
bool can_stop_before(double distance, double speed, const MdpConfig & cfg);

/// Lateral tolerance beyond which an ego pose is not projectable.
inline constexpr double kMaxEgoLateralOffset = 2.0;

LongState init_state(const PlanningScene & scene, const MdpConfig & cfg);

}  // namespace treeplan
