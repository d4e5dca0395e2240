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
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeplan/mcts.hpp"
#include "treeplan/policies.hpp"

namespace treeplan
{

enum ExitCode : int
{
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitMissingArtifact = 3,
  kExitInsufficientData = 4,
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class MissingArtifact : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Everything that determines the outputs of a simulate run.
struct RunManifest
{
  std::string tool_version;
  std::string planner = "mcts";
  MdpConfig mdp;
  SearchConfig search;
  IdmParams idm;
  std::string prior = "uniform";
  std::string rollout = "idm";
  std::string padding = "idm";
  std::optional<double> duration;
  double replan_hz = 10.0;
  std::string suite;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string model;  // path, "pass-through" or empty
  bool expert = true;
};

std::string format_manifest(const RunManifest & manifest);
/// Throws UsageError on malformed input.
RunManifest parse_manifest(const std::string & text);

/// Entry point behind the treeplan binary; returns the process exit code.
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace treeplan
