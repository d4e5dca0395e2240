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

#include "treeplan/planners.hpp"

#include <utility>

namespace treeplan
{

std::string planner_name(PlannerKind kind)
{
  switch (kind) {
    case PlannerKind::kIdm: return "idm";
    case PlannerKind::kConstantSpeed: return "cs";
    case PlannerKind::kMcts: return "mcts";
    case PlannerKind::kTreeIrl: return "tree-irl";
  }
  return "unknown";
}

std::optional<PlannerKind> parse_planner(const std::string & name)
{
  for (auto kind : {PlannerKind::kIdm, PlannerKind::kConstantSpeed, PlannerKind::kMcts,
      PlannerKind::kTreeIrl})
  {
    if (planner_name(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

PlanResult ConstantSpeedPlanner::plan(const PlanningScene & scene, std::uint64_t /*seed*/) const
{
  const auto root = init_state(scene, cfg_);
  PlanResult out;
  auto & traj = out.trajectory;
  LongState s = root;
  traj.points.push_back({s.t, s.x_ego, s.v_ego, s.a_ego, 0.0, 0.0});
  while (!is_terminal(s, cfg_)) {
    const auto step = transition_accel(s, constant_speed_accel(), scene.predictions, cfg_);
    traj.points.back().commanded_jerk = step.effective_jerk;
    traj.points.back().jerk = step.effective_jerk;
    s = step.next;
    traj.points.push_back({s.t, s.x_ego, s.v_ego, s.a_ego, 0.0, 0.0});
  }
  traj.padding_start = 0;
  return out;
}

TreePlanner::TreePlanner(std::string name, MdpConfig mdp, SearchConfig search,
  PolicySet policies, std::optional<ScoreModel> model)
: name_(std::move(name)), mdp_(mdp), search_(search), policies_(std::move(policies)),
  model_(std::move(model))
{
  mdp_.validate();
  search_.validate();
  if (model_) {
    model_->validate();
  }
}

PlanResult TreePlanner::plan(const PlanningScene & scene, std::uint64_t seed) const
{
  auto search = search_;
  search.seed = seed;
  auto generated = generate(scene, mdp_, search, policies_);
  if (generated.trajectories.empty()) {
    throw ContractViolation("generator returned no trajectories");
  }
  PlanResult out;
  out.candidates = generated.trajectories.size();
  if (model_) {
    std::vector<FeatureVector> features;
    features.reserve(generated.trajectories.size());
    for (const auto & traj : generated.trajectories) {
      features.push_back(extract_features(traj, generated.root, scene.predictions, mdp_));
    }
    const auto scores = score(features, *model_);
    const auto best = select_best(scores);
    out.trajectory_id = static_cast<int>(best);
    out.score = scores[best];
    out.trajectory = std::move(generated.trajectories[best]);
  } else {
    out.trajectory = std::move(generated.trajectories.front());
  }
  return out;
}

std::unique_ptr<Planner> make_planner(const PlannerSpec & spec)
{
  spec.mdp.validate();
  if (spec.kind == PlannerKind::kConstantSpeed) {
    return std::make_unique<ConstantSpeedPlanner>(spec.mdp);
  }
  spec.idm.validate();
  PolicySet policies;
  policies.prior = parse_prior(spec.prior);
  policies.rollout = parse_accel_policy(spec.rollout, spec.idm);
  policies.padding = parse_accel_policy(spec.padding, spec.idm);

  auto search = spec.search;
  std::optional<ScoreModel> model;
  switch (spec.kind) {
    case PlannerKind::kIdm:
      search.iterations = 0;
      search.top_k = 1;
      policies.padding = AccelPolicy::idm(spec.idm);
      break;
    case PlannerKind::kMcts:
      search.top_k = 1;
      break;
    case PlannerKind::kTreeIrl:
      model = spec.model.value_or(ScoreModel::pass_through());
      break;
    case PlannerKind::kConstantSpeed:
      break;
  }
  return std::make_unique<TreePlanner>(
    planner_name(spec.kind), spec.mdp, search, std::move(policies), std::move(model));
}

}  // namespace treeplan
