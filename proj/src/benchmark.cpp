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

#include "treeplan/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#ifdef __linux__
#include <sched.h>
#endif

#include "treeplan/mcts.hpp"
#include "treeplan/simulator.hpp"

namespace treeplan
{

std::vector<BenchConfig> default_bench_configs()
{
  return {
    {"n=400 k=100 idm/idm *", 400, 100, "idm", "idm"},
    {"n=200 k=100 idm/idm", 200, 100, "idm", "idm"},
    {"n=800 k=100 idm/idm", 800, 100, "idm", "idm"},
    {"n=400 k=100 cs/idm", 400, 100, "cs", "idm"},
    {"n=400 k=100 idm/cs", 400, 100, "idm", "cs"},
    {"n=400 k=1 idm/idm", 400, 1, "idm", "idm"},
    {"n=0 k=1 pad idm", 0, 1, "idm", "idm"},
    {"n=0 k=1 pad cs", 0, 1, "idm", "cs"},
  };
}

std::vector<BenchResult> run_benchmark(const std::vector<Scenario> & suite,
  const std::vector<BenchConfig> & configs, std::uint64_t seed)
{
  if (suite.empty()) {
    throw ContractViolation("benchmark needs at least one scenario");
  }
  const MdpConfig mdp;
  std::vector<PlanningScene> scenes;
  scenes.reserve(suite.size());
  for (const auto & s : suite) {
    scenes.push_back(build_scene(s, 0.0, s.ego_x, s.ego_v, s.ego_a, mdp));
  }

  std::vector<BenchResult> results;
  for (const auto & bc : configs) {
    SearchConfig search;
    search.iterations = bc.iterations;
    search.top_k = bc.top_k;
    PolicySet policies;
    policies.rollout = parse_accel_policy(bc.rollout, {});
    policies.padding = parse_accel_policy(bc.padding, {});
    // One untimed call warms caches and the allocator.
    generate(scenes.front(), mdp, search, policies);

    BenchResult r;
    r.config = bc;
    r.ms.reserve(scenes.size());
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      search.seed = cycle_seed(seed, suite[i].id, 0);
      const auto start = std::chrono::steady_clock::now();
      const auto generated = generate(scenes[i], mdp, search, policies);
      const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
      if (generated.trajectories.empty()) {
        throw std::runtime_error("generator returned no trajectories");
      }
      r.ms.push_back(std::max(elapsed.count(), 1e-6));
    }
    r.stats = latency_stats(r.ms);
    results.push_back(std::move(r));
  }
  return results;
}

void pin_to_one_cpu()
{
#ifdef __linux__
  cpu_set_t current;
  CPU_ZERO(&current);
  if (sched_getaffinity(0, sizeof(current), &current) != 0) {
    return;
  }
  for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
    if (CPU_ISSET(cpu, &current)) {
      cpu_set_t one;
      CPU_ZERO(&one);
      CPU_SET(cpu, &one);
      sched_setaffinity(0, sizeof(one), &one);
      return;
    }
  }
#endif
}

}  // namespace treeplan
