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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeplan/mdp.hpp"

namespace treeplan
{

/// Scenario file could not be parsed or violates an invariant. The message
/// carries the line (for syntax errors) or the field path.
class ScenarioFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kScenarioFormatVersion = 1;
inline constexpr double kTraceResolution = 0.1;

struct TraceSample
{
  double t = 0.0;
  double x = 0.0;  // front bumper
  double v = 0.0;
  bool in_path = true;

  bool operator==(const TraceSample &) const = default;
};

/// Logged agent trajectory. The agent exists only between its first and last
/// sample.
struct AgentTrace
{
  std::string id;
  std::vector<TraceSample> samples;

  bool operator==(const AgentTrace &) const = default;
};

struct PhaseChange
{
  double t = 0.0;
  LightPhase phase = LightPhase::kGreen;

  bool operator==(const PhaseChange &) const = default;
};

struct TrafficLight
{
  double stop_line = 0.0;
  std::vector<PhaseChange> schedule;  // sorted by t; the first entry holds before its time too

  LightPhase phase_at(double t) const;
  bool operator==(const TrafficLight &) const = default;
};

struct Scenario
{
  std::string id;
  std::string family;
  double duration = 30.0;
  double warmup = 4.0;
  double ego_x = 0.0;
  double ego_v = 0.0;
  double ego_a = 0.0;
  double ego_lateral_offset = 0.0;
  double path_length = 1000.0;
  double v_max = 10.0;
  double goal_offset = 1000.0;
  std::optional<TrafficLight> light;
  std::vector<AgentTrace> agents;

  /// Latest time that can be queried: the episode plus one planning horizon.
  double episode_end(const MdpConfig & cfg) const { return duration + cfg.horizon; }

  /// Throws ScenarioFormatError naming the offending field.
  void validate() const;
  bool operator==(const Scenario &) const = default;
};

struct AgentWorldState
{
  std::string id;
  double x = 0.0;
  double v = 0.0;
  double a = 0.0;
  bool in_path = false;
};

Scenario parse_scenario(const std::string & text, const std::string & source = "<memory>");
std::string format_scenario(const Scenario & scenario);
Scenario load_scenario(const std::filesystem::path & path);
void save_scenario(const Scenario & scenario, const std::filesystem::path & path);

/// Agents present at `t`, linearly interpolated between trace samples. Throws
/// std::out_of_range when t is outside [0, episode_end].
std::vector<AgentWorldState> step_world(const Scenario & scenario, double t, const MdpConfig & cfg);

/// Playback predictions on the MDP grid starting at `t`.
PredictionTable playback_predictions(const Scenario & scenario, double t, const MdpConfig & cfg);

/// Scene context for a planner at time `t` with the ego at (x, v, a).
PlanningScene build_scene(
  const Scenario & scenario, double t, double x, double v, double a, const MdpConfig & cfg);

enum class ScenarioFamily { kConstantLead, kLeadBrake, kStopAndGo, kCutIn, kNoLead, kRedLight };

std::string family_name(ScenarioFamily family);
std::optional<ScenarioFamily> parse_family(const std::string & name);
std::vector<ScenarioFamily> all_families();

struct SuiteSpec
{
  std::size_t count = 0;
  std::vector<ScenarioFamily> families;  // sampled uniformly; empty means all
  double duration = 30.0;
  double warmup = 4.0;
};

std::vector<Scenario> generate_scenario_suite(std::uint64_t seed, const SuiteSpec & spec);

/// Writes one file per scenario plus index.json; returns the index path.
std::filesystem::path write_suite(
  const std::vector<Scenario> & suite, const std::filesystem::path & dir, std::uint64_t seed);
std::vector<Scenario> load_suite(const std::filesystem::path & dir);

}  // namespace treeplan
