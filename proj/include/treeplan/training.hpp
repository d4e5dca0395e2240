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
#include <vector>

#include "treeplan/irl_scorer.hpp"
#include "treeplan/mcts.hpp"
#include "treeplan/scenario.hpp"
#include "treeplan/simulator.hpp"

namespace treeplan
{

/// Training uses a tighter clearance buffer than evaluation.
inline MdpConfig training_mdp_config()
{
  MdpConfig cfg;
  cfg.delta = 1.0;
  return cfg;
}

struct DatasetConfig
{
  MdpConfig mdp = training_mdp_config();
  SearchConfig search;  // k = 100 candidates by default
  IdmParams idm;
  LabelConfig label;
  ExpertConfig expert;
  int stride = 10;  // ticks between sampled planning cycles
  std::uint64_t seed = 0;
};

struct DatasetStats
{
  std::size_t cycles = 0;
  std::size_t dropped_all_colliding = 0;
  std::size_t dropped_expert_failed = 0;
};

/// Plans from the expert's state every `stride` ticks after warmup, labels the
/// expert-nearest collision-free candidate and keeps its features.
std::vector<TrainSample> build_dataset(const std::vector<Scenario> & suite,
  const DatasetConfig & cfg, DatasetStats * stats = nullptr);

}  // namespace treeplan
