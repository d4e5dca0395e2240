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
#include <string>
#include <vector>

#include "treeplan/metrics.hpp"
#include "treeplan/scenario.hpp"

namespace treeplan
{

struct BenchConfig
{
  std::string label;
  int iterations = 400;
  int top_k = 100;
  std::string rollout = "idm";
  std::string padding = "idm";
};

/// Generator configurations timed by the benchmark command; the first entry
/// is the default planner setting.
std::vector<BenchConfig> default_bench_configs();

struct BenchResult
{
  BenchConfig config;
  std::vector<double> ms;  // one trajectory-generation call per scenario
  LatencyStats stats;
};

/// Times one generate() call per scenario at its initial state, on the
/// calling thread only.
std::vector<BenchResult> run_benchmark(const std::vector<Scenario> & suite,
  const std::vector<BenchConfig> & configs, std::uint64_t seed);

/// Restricts the calling process to one CPU where the platform allows it.
void pin_to_one_cpu();

}  // namespace treeplan
