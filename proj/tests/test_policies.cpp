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

#include <gtest/gtest.h>

#include <cmath>

#include "treeplan/policies.hpp"

namespace treeplan
{
namespace
{

LongState state(double v, double v_max)
{
  LongState s;
  s.v_ego = v;
  s.v_max = v_max;
  s.x_max = 1e9;
  return s;
}

TEST(Idm, FreeRoadAtDesiredSpeedHolds)
{
  IdmParams p;
  p.v0 = 10.0;
  EXPECT_NEAR(idm_accel(10.0, std::nullopt, std::nullopt, p), 0.0, 1e-12);
  EXPECT_NEAR(idm_accel(0.0, std::nullopt, std::nullopt, p), p.a_max, 1e-12);
  // Half speed: a_max * (1 - 1/16)
  EXPECT_NEAR(idm_accel(5.0, std::nullopt, std::nullopt, p), 2.0 * 15.0 / 16.0, 1e-12);
}

TEST(Idm, InteractionTermByHand)
{
  IdmParams p;
  p.v0 = 20.0;
  // v = 10, lead 8 m/s, gap 30 m:
  // s* = 2 + 10 * 1.5 + 10 * 2 / (2 * 2) = 22
  const double expected = 2.0 * (1.0 - std::pow(0.5, 4.0)) - 2.0 * (22.0 / 30.0) * (22.0 / 30.0);
  EXPECT_NEAR(idm_accel(10.0, 30.0, 8.0, p), expected, 1e-12);
}

TEST(Idm, ClippedAndHardBrakeOnOverlap)
{
  IdmParams p;
  p.v0 = 10.0;
  EXPECT_DOUBLE_EQ(idm_accel(10.0, 0.5, 0.0, p), -7.0);
  EXPECT_DOUBLE_EQ(idm_accel(10.0, 0.0, 10.0, p), -7.0);
  EXPECT_DOUBLE_EQ(idm_accel(10.0, -3.0, 10.0, p), -7.0);
}

TEST(Idm, ParametersAreValidated)
{
  IdmParams p;
  p.time_headway = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_THROW(AccelPolicy::idm(p), ConfigError);
  IdmParams q;
  q.b = 8.0;
  EXPECT_THROW(q.validate(), ConfigError);
}

TEST(AccelPolicy, IdmUsesSpeedLimitWhenDesiredSpeedUnset)
{
  const auto policy = AccelPolicy::idm();
  EXPECT_NEAR(policy.accel(state(10.0, 10.0)), 0.0, 1e-12);
  EXPECT_GT(policy.accel(state(5.0, 10.0)), 0.0);
  EXPECT_EQ(policy.name(), "idm");
}

TEST(AccelPolicy, IdmFollowsLeadAndStopsForLimit)
{
  const auto policy = AccelPolicy::idm();
  LongState s = state(10.0, 10.0);
  s.lead = LeadState{15.0, 0.0, 0.0};
  EXPECT_LT(policy.accel(s), -2.0);
  LongState t = state(10.0, 10.0);
  t.x_max = 15.0;
  EXPECT_LT(policy.accel(t), -2.0);
  t.x_max = 1000.0;  // a distant limit still shaves a little off
  EXPECT_LT(policy.accel(t), 0.0);
  t.x_max = 15.0;
  EXPECT_LT(policy.accel(t), -2.0);
  // The more binding of lead and limit wins.
  LongState both = s;
  both.x_max = 200.0;
  EXPECT_DOUBLE_EQ(policy.accel(both), policy.accel(s));
}

TEST(AccelPolicy, ConstantSpeedIsZero)
{
  const auto policy = AccelPolicy::constant_speed();
  LongState s = state(3.0, 10.0);
  s.lead = LeadState{1.0, 0.0, 0.0};
  EXPECT_EQ(policy.accel(s), 0.0);
  EXPECT_EQ(policy.name(), "cs");
}

TEST(Parsing, PolicyNames)
{
  EXPECT_EQ(parse_accel_policy("idm", {}).kind(), AccelPolicy::Kind::kIdm);
  EXPECT_EQ(parse_accel_policy("cs", {}).kind(), AccelPolicy::Kind::kConstantSpeed);
  EXPECT_THROW(parse_accel_policy("rl", {}), ConfigError);
  // An empty prior function selects the uniform prior.
  EXPECT_NO_THROW(parse_prior("uniform"));
  for (double p : uniform_prior(state(1.0, 1.0))) {
    EXPECT_DOUBLE_EQ(p, 0.2);
  }
  EXPECT_THROW(parse_prior("learned"), ConfigError);
}

TEST(Rollout, ConstantSpeedAtLimitEarnsDiscountedBand)
{
  const MdpConfig cfg;
  const auto policy = AccelPolicy::constant_speed();
  double expected = 0.0;
  for (int j = 0; j < cfg.horizon_steps(); ++j) {
    expected += std::pow(cfg.gamma, j) * cfg.alpha * 0.2;
  }
  EXPECT_NEAR(rollout_return(state(10.0, 10.0), policy, {}, cfg), expected, 1e-12);
}

TEST(Rollout, FromLastStepIsOneReward)
{
  const MdpConfig cfg;
  LongState s = state(10.0, 10.0);
  s.t = cfg.horizon - cfg.dt;
  EXPECT_NEAR(rollout_return(s, AccelPolicy::constant_speed(), {}, cfg), cfg.alpha * 0.2, 1e-15);
  s.t = cfg.horizon;
  EXPECT_THROW(rollout_return(s, AccelPolicy::constant_speed(), {}, cfg), ContractViolation);
}

}  // namespace
}  // namespace treeplan
