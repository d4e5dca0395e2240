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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treeplan/irl_scorer.hpp"
#include "treeplan/mcts.hpp"
#include "treeplan/policies.hpp"
#include "treeplan/trajectory.hpp"

namespace treeplan
{

struct PlanResult
{
  Trajectory trajectory;
  int trajectory_id = 0;  // index among the generated candidates
  double score = 0.0;
  std::size_t candidates = 1;
};

/// A planner maps a scene to one trajectory. Implementations are stateless
/// so one instance can serve several simulation threads.
class Planner
{
public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  virtual PlanResult plan(const PlanningScene & scene, std::uint64_t seed) const = 0;
};

enum class PlannerKind { kIdm, kConstantSpeed, kMcts, kTreeIrl };

std::string planner_name(PlannerKind kind);
/// Accepts idm, cs, mcts and tree-irl.
std::optional<PlannerKind> parse_planner(const std::string & name);

struct PlannerSpec
{
  PlannerKind kind = PlannerKind::kMcts;
  MdpConfig mdp;
  SearchConfig search;  // seed is replaced per planning cycle
  IdmParams idm;        // rollout, padding and the IDM baseline
  std::string prior = "uniform";
  std::string rollout = "idm";
  std::string padding = "idm";
  std::optional<ScoreModel> model;  // tree-irl only; empty means pass-through
};

/// Holds acceleration 0 from the current state.
class ConstantSpeedPlanner : public Planner
{
public:
  explicit ConstantSpeedPlanner(MdpConfig cfg) : cfg_(cfg) {}
  std::string name() const override { return "cs"; }
  PlanResult plan(const PlanningScene & scene, std::uint64_t seed) const override;

private:
  MdpConfig cfg_;
};

/// Tree generator followed by selection. With k = 1 this is the vanilla MCTS
/// planner; with n = 0 it degenerates to the padding policy alone.
class TreePlanner : public Planner
{
public:
  TreePlanner(std::string name, MdpConfig mdp, SearchConfig search, PolicySet policies,
    std::optional<ScoreModel> model);
  std::string name() const override { return name_; }
  PlanResult plan(const PlanningScene & scene, std::uint64_t seed) const override;

private:
  std::string name_;
  MdpConfig mdp_;
  SearchConfig search_;
  PolicySet policies_;
  std::optional<ScoreModel> model_;
};

/// Builds the named planner. idm runs the generator with n = 0, k = 1; mcts
/// forces k = 1; tree-irl scores every candidate with the model.
std::unique_ptr<Planner> make_planner(const PlannerSpec & spec);

}  // namespace treeplan
