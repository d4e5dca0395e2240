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
#include <functional>
#include <optional>
#include <string>

#include "treeplan/mdp.hpp"

namespace treeplan
{

/// Raised for policy or generator configurations that cannot be built.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct IdmParams
{
  double v0 = 0.0;  // desired speed; 0 means "use the state's speed limit"
  double time_headway = 1.5;
  double a_max = 2.0;
  double b = 2.0;
  double s0 = 2.0;
  double exponent = 4.0;

  void validate() const;
};

/// Intelligent driver model acceleration, clipped to [-7, 2] m/s^2.
/// `gap` is bumper to bumper; a missing gap means free road.
double idm_accel(
  double v_ego, std::optional<double> gap, std::optional<double> v_lead, const IdmParams & params);

inline double constant_speed_accel() { return 0.0; }

using ActionProbabilities = std::array<double, JerkAction::kCount>;

ActionProbabilities uniform_prior(const LongState & s);

/// Prior over the jerk actions used by PUCT selection.
using PriorFn = std::function<ActionProbabilities(const LongState &)>;

/// Deterministic acceleration-space policy used for rollouts and padding.
class AccelPolicy
{
public:
  enum class Kind { kIdm, kConstantSpeed };

  static AccelPolicy idm(IdmParams params = {});
  static AccelPolicy constant_speed();

  /// Commanded acceleration in state `s`. The IDM variant follows the lead
  /// and treats x_max as a stationary obstacle, whichever is more binding.
  double accel(const LongState & s) const;

  Kind kind() const { return kind_; }
  const IdmParams & idm_params() const { return idm_; }
  std::string name() const;

private:
  Kind kind_ = Kind::kIdm;
  IdmParams idm_;
};

/// Everything the generator can be parameterised with. A learned model plugs
/// in through `prior` and `leaf_value`; none ships with this library.
struct PolicySet
{
  PriorFn prior;  // empty: uniform
  AccelPolicy rollout = AccelPolicy::idm();
  AccelPolicy padding = AccelPolicy::idm();
  std::function<double(const LongState &)> leaf_value;  // empty: Monte Carlo rollout
};

/// Parses "idm" or "cs". Learned policy names are rejected with ConfigError.
AccelPolicy parse_accel_policy(const std::string & name, const IdmParams & params);

/// Accepts only "uniform"; learned priors are rejected with ConfigError.
PriorFn parse_prior(const std::string & name);

/// Discounted return of following `policy` from `s` until the horizon.
double rollout_return(
  const LongState & s, const AccelPolicy & policy, const PredictionTable & pred,
  const MdpConfig & cfg);

}  // namespace treeplan
