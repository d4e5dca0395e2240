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

#include "treeplan/irl_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace treeplan
{

namespace
{

constexpr double kStoppedSpeed = 0.1;
constexpr double kStopErrorRange = 10.0;

std::string fmt_double(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

FeatureVector extract_features(
  const Trajectory & traj, const LongState & root, const PredictionTable & pred,
  const MdpConfig & cfg)
{
  const auto & pts = traj.points;
  if (pts.size() < 2) {
    throw ContractViolation("feature extraction needs at least two trajectory points");
  }
  const double n_points = static_cast<double>(pts.size());
  const double n_intervals = n_points - 1.0;

  FeatureVector f{};
  double min_gap = kNoLeadGap;
  double clearance = 0.0;
  std::size_t over_limit = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto & p = pts[j];
    if (j + 1 < pts.size()) {
      f[0] += std::abs(p.jerk);
    }
    f[1] += std::abs(p.a);
    f[2] += std::abs(p.v - root.v_max);
    if (p.v > root.v_max) {
      ++over_limit;
    }
    const auto lead = lead_lookup(p.x, pred, static_cast<int>(j));
    if (lead) {
      const double gap = lead->x - p.x;
      min_gap = std::min(min_gap, gap);
      clearance += cfg.dt * std::max(0.0, cfg.delta - gap);
    }
    clearance += cfg.dt * std::max(0.0, cfg.delta - (root.x_max - p.x));
  }
  f[0] /= n_intervals;
  f[1] /= n_points;
  f[2] /= n_points;
  f[3] = pts.back().x - pts.front().x;
  f[4] = min_gap;
  f[5] = clearance;

  const auto & last = pts.back();
  if (last.v < kStoppedSpeed) {
    double obstacle = root.x_max - last.x;
    const auto lead = lead_lookup(last.x, pred, static_cast<int>(pts.size()) - 1);
    if (lead) {
      obstacle = std::min(obstacle, lead->x - last.x);
    }
    if (obstacle < kStopErrorRange) {
      f[6] = std::abs(obstacle - cfg.delta);
    }
  }
  f[7] = static_cast<double>(over_limit) / n_points;
  return f;
}

FeatureVector ScoreModel::normalize(const FeatureVector & f) const
{
  FeatureVector out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out[i] = (f[i] - norm_mean[i]) / norm_scale[i];
  }
  return out;
}

double ScoreModel::score(const FeatureVector & f) const
{
  const auto z = normalize(f);
  double s = bias;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    s += weights[i] * z[i];
  }
  return s;
}

void ScoreModel::validate() const
{
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!(norm_scale[i] > 0.0) || !std::isfinite(norm_scale[i])) {
      throw ModelFormatError("normalization scales must be positive");
    }
    if (!std::isfinite(weights[i]) || !std::isfinite(norm_mean[i])) {
      throw ModelFormatError("model parameters must be finite");
    }
  }
  if (!std::isfinite(bias) || !(gamma_focal >= 0.0) || !(decay > 0.0 && decay <= 1.0) ||
    !(velocity_weight >= 0.0))
  {
    throw ModelFormatError("model hyperparameters out of range");
  }
}

std::vector<double> score(std::span<const FeatureVector> features, const ScoreModel & model)
{
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto & f : features) {
    out.push_back(model.score(f));
  }
  return out;
}

std::size_t select_best(std::span<const double> scores)
{
  if (scores.empty()) {
    throw ContractViolation("cannot select from an empty candidate set");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    }
  }
  return best;
}

std::size_t select_best(std::span<const Trajectory> trajs, std::span<const double> scores)
{
  if (trajs.size() != scores.size()) {
    throw ContractViolation("one score per trajectory is required");
  }
  return select_best(scores);
}

double expert_distance(
  const Trajectory & candidate, const Trajectory & expert, const LabelConfig & cfg)
{
  const auto n = std::min(candidate.points.size(), expert.points.size());
  double total = 0.0;
  double weight = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = candidate.points[j].x - expert.points[j].x;
    const double dv = candidate.points[j].v - expert.points[j].v;
    total += weight * (dx * dx + cfg.velocity_weight * dv * dv);
    weight *= cfg.decay;
  }
  return total;
}

bool in_collision(const Trajectory & candidate, const PredictionTable & pred)
{
  for (std::size_t j = 0; j < candidate.points.size(); ++j) {
    const double x = candidate.points[j].x;
    // The front bumper sweeps [previous x, x] during the step.
    const double swept_from = j > 0 ? candidate.points[j - 1].x : x;
    for (const auto & row : pred.agents) {
      if (j >= row.size()) {
        continue;
      }
      const auto & agent = row[j];
      if (agent.present && agent.in_path && x >= agent.x - kVehicleLength &&
        swept_from <= agent.x)
      {
        return true;
      }
    }
  }
  return false;
}

std::optional<std::size_t> label_expert_nearest(
  std::span<const Trajectory> candidates, const Trajectory & expert, const PredictionTable & pred,
  const LabelConfig & cfg)
{
  if (candidates.empty()) {
    throw ContractViolation("labeling needs at least one candidate");
  }
  std::optional<std::size_t> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (in_collision(candidates[i], pred)) {
      continue;
    }
    const double d = expert_distance(candidates[i], expert, cfg);
    if (!best || d < best_distance) {
      best = i;
      best_distance = d;
    }
  }
  return best;
}

std::vector<double> softmax(std::span<const double> scores)
{
  std::vector<double> p(scores.begin(), scores.end());
  if (p.empty()) {
    return p;
  }
  const double m = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (auto & v : p) {
    v = std::exp(v - m);
    total += v;
  }
  for (auto & v : p) {
    v /= total;
  }
  return p;
}

FocalLoss focal_loss(std::span<const double> scores, std::size_t label, double gamma_focal)
{
  if (label >= scores.size()) {
    throw ContractViolation("label index out of range");
  }
  const double m = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double z : scores) {
    total += std::exp(z - m);
  }
  const double log_p = scores[label] - m - std::log(total);
  const double p = std::exp(log_p);
  const double miss = -std::expm1(log_p);  // 1 - p without cancellation

  FocalLoss out;
  out.loss = miss > 0.0 ? -std::pow(miss, gamma_focal) * log_p : 0.0;
  // dL/dz_i = g * (1[i == label] - p_i), with g = dL/dp * p.
  double g = -std::pow(miss, gamma_focal);
  if (miss > 0.0 && gamma_focal > 0.0) {
    g += gamma_focal * std::pow(miss, gamma_focal - 1.0) * p * log_p;
  }
  out.gradient.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p_i = std::exp(scores[i] - m) / total;
    out.gradient[i] = g * ((i == label ? 1.0 : 0.0) - p_i);
  }
  return out;
}

namespace
{

void check_sample(const TrainSample & s)
{
  if (s.candidates.size() < 2) {
    throw TrainingError("sample '" + s.scenario_id + "' has fewer than two candidates");
  }
  if (s.label >= s.candidates.size()) {
    throw TrainingError("sample '" + s.scenario_id + "' has an out-of-range label");
  }
}

std::vector<double> sample_scores(const ScoreModel & model, const TrainSample & s)
{
  return score(std::span<const FeatureVector>(s.candidates), model);
}

}  // namespace

double mean_loss(
  const ScoreModel & model, const std::vector<TrainSample> & dataset,
  std::span<const std::size_t> indices)
{
  if (indices.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (auto i : indices) {
    const auto & s = dataset.at(i);
    total += focal_loss(sample_scores(model, s), s.label, model.gamma_focal).loss;
  }
  return total / static_cast<double>(indices.size());
}

double top_k_accuracy(
  const ScoreModel & model, const std::vector<TrainSample> & dataset,
  std::span<const std::size_t> indices, std::size_t k)
{
  if (indices.empty()) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (auto i : indices) {
    const auto & s = dataset.at(i);
    const auto z = sample_scores(model, s);
    // Rank of the label: candidates strictly better, or equal with a lower index.
    std::size_t ahead = 0;
    for (std::size_t c = 0; c < z.size(); ++c) {
      if (z[c] > z[s.label] || (z[c] == z[s.label] && c < s.label)) {
        ++ahead;
      }
    }
    if (ahead < k) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(indices.size());
}

TrainResult train(const std::vector<TrainSample> & dataset, const TrainHyper & hyper)
{
  if (dataset.size() < hyper.min_samples) {
    throw TrainingError(
      "need at least " + std::to_string(hyper.min_samples) + " usable samples, got " +
      std::to_string(dataset.size()));
  }
  if (hyper.epochs < 0 || !(hyper.learning_rate > 0.0) || hyper.validation_fraction < 0.0 ||
    hyper.validation_fraction >= 1.0)
  {
    throw TrainingError("invalid training hyperparameters");
  }
  for (const auto & s : dataset) {
    check_sample(s);
  }

  TrainResult result;
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(hyper.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[engine() % i]);
  }
  const auto n_val = static_cast<std::size_t>(
    std::floor(hyper.validation_fraction * static_cast<double>(dataset.size())));
  result.validation_indices.assign(order.begin(), order.begin() + static_cast<long>(n_val));
  result.train_indices.assign(order.begin() + static_cast<long>(n_val), order.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  std::sort(result.validation_indices.begin(), result.validation_indices.end());

  auto & model = result.model;
  model.gamma_focal = hyper.gamma_focal;
  model.decay = hyper.decay;
  model.velocity_weight = hyper.velocity_weight;

  // Normalization statistics over every training candidate.
  FeatureVector sum{};
  FeatureVector sum_sq{};
  double count = 0.0;
  for (auto i : result.train_indices) {
    for (const auto & f : dataset[i].candidates) {
      for (std::size_t d = 0; d < kFeatureCount; ++d) {
        sum[d] += f[d];
      }
      count += 1.0;
    }
  }
  for (std::size_t d = 0; d < kFeatureCount; ++d) {
    model.norm_mean[d] = sum[d] / count;
  }
  for (auto i : result.train_indices) {
    for (const auto & f : dataset[i].candidates) {
      for (std::size_t d = 0; d < kFeatureCount; ++d) {
        const double e = f[d] - model.norm_mean[d];
        sum_sq[d] += e * e;
      }
    }
  }
  for (std::size_t d = 0; d < kFeatureCount; ++d) {
    const double sd = std::sqrt(sum_sq[d] / count);
    model.norm_scale[d] = sd > 1e-12 ? sd : 1.0;
  }

  // Normalized features are fixed for the whole run.
  std::vector<std::vector<FeatureVector>> normalized(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (const auto & f : dataset[i].candidates) {
      normalized[i].push_back(model.normalize(f));
    }
  }

  const double n_train = static_cast<double>(result.train_indices.size());
  std::vector<double> z;
  for (int epoch = 0; epoch <= hyper.epochs; ++epoch) {
    double loss = 0.0;
    FeatureVector grad{};
    for (auto i : result.train_indices) {
      const auto & feats = normalized[i];
      z.assign(feats.size(), model.bias);
      for (std::size_t c = 0; c < feats.size(); ++c) {
        for (std::size_t d = 0; d < kFeatureCount; ++d) {
          z[c] += model.weights[d] * feats[c][d];
        }
      }
      const auto fl = focal_loss(z, dataset[i].label, hyper.gamma_focal);
      if (!std::isfinite(fl.loss)) {
        throw TrainingError(
          "non-finite loss at epoch " + std::to_string(epoch) + " on sample " + std::to_string(i) +
          " ('" + dataset[i].scenario_id + "')");
      }
      loss += fl.loss;
      for (std::size_t c = 0; c < feats.size(); ++c) {
        for (std::size_t d = 0; d < kFeatureCount; ++d) {
          grad[d] += fl.gradient[c] * feats[c][d];
        }
      }
    }
    result.train_loss.push_back(loss / n_train);
    if (!result.validation_indices.empty()) {
      result.validation_loss.push_back(mean_loss(model, dataset, result.validation_indices));
    }
    if (epoch == hyper.epochs) {
      break;
    }
    for (std::size_t d = 0; d < kFeatureCount; ++d) {
      model.weights[d] -= hyper.learning_rate * grad[d] / n_train;
    }
  }
  return result;
}

std::string format_model(const ScoreModel & model)
{
  auto join = [](const FeatureVector & v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? " " : "") + fmt_double(v[i]);
      }
      return out;
    };
  std::string names;
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    names += (i ? " " : "") + std::string(kFeatureNames[i]);
  }
  std::ostringstream os;
  os << "# treeplan linear trajectory score model\n"
     << "# score = bias + sum_i weights[i] * (feature[i] - norm_mean[i]) / norm_scale[i]\n"
     << "format = treeplan-score-model\n"
     << "version = 1\n"
     << "features = " << names << "\n"
     << "weights = " << join(model.weights) << "\n"
     << "bias = " << fmt_double(model.bias) << "\n"
     << "norm_mean = " << join(model.norm_mean) << "\n"
     << "norm_scale = " << join(model.norm_scale) << "\n"
     << "gamma_focal = " << fmt_double(model.gamma_focal) << "\n"
     << "decay = " << fmt_double(model.decay) << "\n"
     << "velocity_weight = " << fmt_double(model.velocity_weight) << "\n";
  return os.str();
}

ScoreModel parse_model(const std::string & text)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ModelFormatError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto get = [&kv](const std::string & key) -> const std::string & {
      auto it = kv.find(key);
      if (it == kv.end()) {
        throw ModelFormatError("missing key '" + key + "'");
      }
      return it->second;
    };
  auto scalar = [&get](const std::string & key) {
      try {
        std::size_t used = 0;
        const auto & s = get(key);
        const double v = std::stod(s, &used);
        if (used != s.size()) {
          throw std::invalid_argument(key);
        }
        return v;
      } catch (const std::logic_error &) {
        throw ModelFormatError("key '" + key + "' is not a number");
      }
    };
  auto vec = [&get](const std::string & key) {
      std::istringstream is(get(key));
      FeatureVector v{};
      std::size_t n = 0;
      std::string tok;
      while (is >> tok) {
        if (n >= kFeatureCount) {
          throw ModelFormatError("key '" + key + "' has too many entries");
        }
        try {
          v[n++] = std::stod(tok);
        } catch (const std::logic_error &) {
          throw ModelFormatError("key '" + key + "' has a non-numeric entry");
        }
      }
      if (n != kFeatureCount) {
        throw ModelFormatError(
          "key '" + key + "' has " + std::to_string(n) + " entries, expected " +
          std::to_string(kFeatureCount));
      }
      return v;
    };

  if (get("format") != "treeplan-score-model") {
    throw ModelFormatError("not a treeplan score model");
  }
  if (get("version") != "1") {
    throw ModelFormatError("unsupported model version " + get("version"));
  }
  {
    std::istringstream is(get("features"));
    std::string tok;
    std::size_t n = 0;
    while (is >> tok) {
      if (n >= kFeatureCount || tok != kFeatureNames[n]) {
        throw ModelFormatError("feature list does not match this build (at '" + tok + "')");
      }
      ++n;
    }
    if (n != kFeatureCount) {
      throw ModelFormatError("feature list has the wrong dimension");
    }
  }
  ScoreModel m;
  m.weights = vec("weights");
  m.bias = scalar("bias");
  m.norm_mean = vec("norm_mean");
  m.norm_scale = vec("norm_scale");
  m.gamma_focal = scalar("gamma_focal");
  m.decay = scalar("decay");
  m.velocity_weight = scalar("velocity_weight");
  m.validate();
  return m;
}

void save_model(const ScoreModel & model, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write model file " + path.string());
  }
  out << format_model(model);
}

ScoreModel load_model(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read model file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void save_dataset(const std::vector<TrainSample> & dataset, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write dataset file " + path.string());
  }
  for (const auto & s : dataset) {
    nlohmann::json j;
    j["scenario"] = s.scenario_id;
    j["t"] = s.time;
    j["label"] = s.label;
    j["features"] = s.candidates;
    out << j.dump() << '\n';
  }
}

std::vector<TrainSample> load_dataset(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read dataset file " + path.string());
  }
  std::vector<TrainSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      TrainSample s;
      s.scenario_id = j.at("scenario").get<std::string>();
      s.time = j.at("t").get<double>();
      s.label = j.at("label").get<std::size_t>();
      s.candidates = j.at("features").get<std::vector<FeatureVector>>();
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception & e) {
      throw std::runtime_error(
        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace treeplan
