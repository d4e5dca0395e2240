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

#include "treeplan/policies.hpp"

#include <algorithm>
#include <cmath>

namespace treeplan
{

namespace
{
constexpr double kHardBrake = -7.0;
constexpr double kHardAccel = 2.0;
constexpr double kMinDesiredSpeed = 1e-3;
}  // namespace

void IdmParams::validate() const
{
  if (v0 < 0.0 || !(time_headway > 0.0) || !(a_max > 0.0) || !(b > 0.0) || !(s0 > 0.0) ||
    !(exponent > 0.0))
  {
    throw ConfigError("IDM parameters must be positive");
  }
  if (b > 7.0) {
    throw ConfigError("IDM comfortable deceleration must not exceed 7 m/s^2");
  }
}

double idm_accel(
  double v_ego, std::optional<double> gap, std::optional<double> v_lead, const IdmParams & p)
{
  const double v0 = std::max(p.v0, kMinDesiredSpeed);
  double a = p.a_max * (1.0 - std::pow(v_ego / v0, p.exponent));
  if (gap) {
    if (!(*gap > 0.0)) {
      return kHardBrake;
    }
    const double approach = v_ego - v_lead.value_or(0.0);
    const double dynamic =
      v_ego * p.time_headway + v_ego * approach / (2.0 * std::sqrt(p.a_max * p.b));
    const double desired = p.s0 + std::max(0.0, dynamic);
    const double ratio = desired / *gap;
    a -= p.a_max * ratio * ratio;
  }
  return std::clamp(a, kHardBrake, kHardAccel);
}

ActionProbabilities uniform_prior(const LongState & /*s*/)
{
  ActionProbabilities p;
  p.fill(1.0 / static_cast<double>(JerkAction::kCount));
  return p;
}

AccelPolicy AccelPolicy::idm(IdmParams params)
{
  params.validate();
  AccelPolicy policy;
  policy.kind_ = Kind::kIdm;
  policy.idm_ = params;
  return policy;
}

AccelPolicy AccelPolicy::constant_speed()
{
  AccelPolicy policy;
  policy.kind_ = Kind::kConstantSpeed;
  return policy;
}

double AccelPolicy::accel(const LongState & s) const
{
  if (kind_ == Kind::kConstantSpeed) {
    return constant_speed_accel();
  }
  IdmParams params = idm_;
  if (params.v0 <= 0.0) {
    params.v0 = s.v_max;
  }
  double a = idm_accel(s.v_ego, std::nullopt, std::nullopt, params);
  if (s.lead) {
    a = std::min(a, idm_accel(s.v_ego, s.lead->x - s.x_ego, s.lead->v, params));
  }
  // x_max (goal or red light) behaves like a stopped vehicle at the line.
  a = std::min(a, idm_accel(s.v_ego, s.x_max - s.x_ego, 0.0, params));
  return a;
}

std::string AccelPolicy::name() const
{
  return kind_ == Kind::kIdm ? "idm" : "cs";
}

AccelPolicy parse_accel_policy(const std::string & name, const IdmParams & params)
{
  if (name == "idm") {
    return AccelPolicy::idm(params);
  }
  if (name == "cs") {
    return AccelPolicy::constant_speed();
  }
  if (name == "rl" || name == "critic" || name == "learned") {
    throw ConfigError("no learned policy is available: '" + name + "' cannot be used");
  }
  throw ConfigError("unknown policy '" + name + "' (expected idm or cs)");
}

PriorFn parse_prior(const std::string & name)
{
  if (name == "uniform") {
    return {};
  }
  if (name == "rl" || name == "learned") {
    throw ConfigError("no learned prior is available: '" + name + "' cannot be used");
  }
  throw ConfigError("unknown prior '" + name + "' (expected uniform)");
}

double rollout_return(
  const LongState & s, const AccelPolicy & policy, const PredictionTable & pred,
  const MdpConfig & cfg)
{
  if (is_terminal(s, cfg)) {
    throw ContractViolation("rollout from a terminal state");
  }
  double total = 0.0;
  double discount = 1.0;
  LongState current = s;
  while (!is_terminal(current, cfg)) {
    const auto step = transition_accel(current, policy.accel(current), pred, cfg);
    total += discount * reward_of(step, cfg);
    discount *= cfg.gamma;
    current = step.next;
  }
  return total;
}

}  // namespace treeplan
