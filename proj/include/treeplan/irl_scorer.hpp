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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treeplan/mdp.hpp"
#include "treeplan/trajectory.hpp"

namespace treeplan
{

inline constexpr std::size_t kFeatureCount = 8;
using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
  "mean_abs_jerk",       "mean_abs_accel",          "mean_speed_deviation", "progress",
  "min_lead_gap",        "clearance_violation",     "stop_distance_error",  "frac_over_limit"};

/// Value of min_lead_gap when no lead is ever present.
inline constexpr double kNoLeadGap = 1e6;

class TrainingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Hand-crafted trajectory features. `root` supplies the speed limit and x_max
/// of the planning cycle; `pred` must be the table the trajectory was planned
/// against (step j of the trajectory is looked up at prediction step j).
FeatureVector extract_features(const Trajectory & traj, const LongState & root,
  const PredictionTable & pred, const MdpConfig & cfg);

struct ScoreModel
{
  FeatureVector weights{};
  double bias = 0.0;
  FeatureVector norm_mean{};
  FeatureVector norm_scale{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double gamma_focal = 2.0;
  double decay = 0.9;
  double velocity_weight = 5.0;

  /// Zero weights: every candidate scores the same, so selection keeps the
  /// generator's order.
  static ScoreModel pass_through() { return {}; }

  FeatureVector normalize(const FeatureVector & f) const;
  double score(const FeatureVector & f) const;
  void validate() const;

  bool operator==(const ScoreModel &) const = default;
};

std::vector<double> score(std::span<const FeatureVector> features, const ScoreModel & model);

/// argmax of `scores`, lowest index on ties. Throws ContractViolation when
/// empty.
std::size_t select_best(std::span<const double> scores);
std::size_t select_best(std::span<const Trajectory> trajs, std::span<const double> scores);

struct LabelConfig
{
  double decay = 0.9;  // per 0.5 s step
  double velocity_weight = 5.0;
};

/// Decayed position + weighted velocity squared error between two trajectories.
double expert_distance(const Trajectory & candidate, const Trajectory & expert,
  const LabelConfig & cfg);

/// True when the candidate's front bumper lies inside the body of any
/// in-path predicted agent at some step, or passed through it since the
/// previous step.
bool in_collision(const Trajectory & candidate, const PredictionTable & pred);

/// Index of the candidate nearest to the expert among collision-free ones;
/// nullopt when every candidate collides (the sample is dropped).
std::optional<std::size_t> label_expert_nearest(std::span<const Trajectory> candidates,
  const Trajectory & expert, const PredictionTable & pred, const LabelConfig & cfg);

std::vector<double> softmax(std::span<const double> scores);

struct FocalLoss
{
  double loss = 0.0;
  std::vector<double> gradient;  // d loss / d score_i
};

/// -(1 - p)^gamma * log p with p the softmax probability of `label`.
FocalLoss focal_loss(std::span<const double> scores, std::size_t label, double gamma_focal);

struct TrainSample
{
  std::string scenario_id;
  double time = 0.0;
  std::vector<FeatureVector> candidates;
  std::size_t label = 0;
};

struct TrainHyper
{
  int epochs = 500;
  double learning_rate = 0.1;
  double gamma_focal = 2.0;
  double decay = 0.9;
  double velocity_weight = 5.0;
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  std::size_t min_samples = 100;
};

struct TrainResult
{
  ScoreModel model;
  std::vector<double> train_loss;       // epochs + 1 entries, first is the initial loss
  std::vector<double> validation_loss;  // empty when there is no validation split
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
};

/// Full-batch gradient descent on the mean focal loss of a linear scorer.
TrainResult train(const std::vector<TrainSample> & dataset, const TrainHyper & hyper);

/// Mean focal loss of `model` over the selected samples.
double mean_loss(const ScoreModel & model, const std::vector<TrainSample> & dataset,
  std::span<const std::size_t> indices);

/// Fraction of selected samples whose label ranks within the top `k` scores.
double top_k_accuracy(const ScoreModel & model, const std::vector<TrainSample> & dataset,
  std::span<const std::size_t> indices, std::size_t k);

void save_model(const ScoreModel & model, const std::filesystem::path & path);
ScoreModel load_model(const std::filesystem::path & path);
std::string format_model(const ScoreModel & model);
ScoreModel parse_model(const std::string & text);

void save_dataset(const std::vector<TrainSample> & dataset, const std::filesystem::path & path);
std::vector<TrainSample> load_dataset(const std::filesystem::path & path);

}  // namespace treeplan
