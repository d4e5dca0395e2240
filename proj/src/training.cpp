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

#include "treeplan/training.hpp"

#include <cmath>

namespace treeplan
{

std::vector<TrainSample> build_dataset(const std::vector<Scenario> & suite,
  const DatasetConfig & cfg, DatasetStats * stats)
{
  if (cfg.stride < 1) {
    throw ConfigError("dataset stride must be at least 1");
  }
  cfg.mdp.validate();
  cfg.search.validate();
  PolicySet policies;
  policies.rollout = AccelPolicy::idm(cfg.idm);
  policies.padding = AccelPolicy::idm(cfg.idm);

  DatasetStats local;
  std::vector<TrainSample> dataset;
  for (const auto & scenario : suite) {
    const auto expert = expert_oracle(scenario, cfg.mdp, cfg.expert);
    if (expert.failed) {
      ++local.dropped_expert_failed;
      continue;
    }
    const int last = static_cast<int>(std::lround(scenario.duration / kTickDt));
    for (int k = 0; k < last; k += cfg.stride) {
      const auto & tick = expert.ticks[static_cast<std::size_t>(k)];
      if (tick.warmup) {
        continue;
      }
      ++local.cycles;
      const auto scene = build_scene(scenario, tick.t, tick.x, tick.v, tick.a, cfg.mdp);
      auto search = cfg.search;
      search.seed = cycle_seed(cfg.seed, scenario.id, k);
      const auto generated = generate(scene, cfg.mdp, search, policies);
      const auto future = expert_future(expert, k, cfg.mdp);
      const auto label =
        label_expert_nearest(generated.trajectories, future, scene.predictions, cfg.label);
      if (!label) {
        ++local.dropped_all_colliding;
        continue;
      }
      TrainSample sample;
      sample.scenario_id = scenario.id;
      sample.time = tick.t;
      sample.label = *label;
      sample.candidates.reserve(generated.trajectories.size());
      for (const auto & traj : generated.trajectories) {
        sample.candidates.push_back(
          extract_features(traj, generated.root, scene.predictions, cfg.mdp));
      }
      dataset.push_back(std::move(sample));
    }
  }
  if (stats != nullptr) {
    *stats = local;
  }
  return dataset;
}

}  // namespace treeplan
