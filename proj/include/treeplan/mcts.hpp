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
#include <random>
#include <vector>

#include "treeplan/mdp.hpp"
#include "treeplan/policies.hpp"
#include "treeplan/trajectory.hpp"

namespace treeplan
{

struct SearchConfig
{
  int iterations = 400;
  int top_k = 100;
  double c_puct = 1.0;
  double q_max = 1.0;
  double epsilon_max = 0.001;  // tie-breaking noise is drawn from U(0, epsilon_max)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Seeded uniform source for the UCB tie-breaking noise. Bits come straight
/// from mt19937_64 so sequences are identical across standard libraries.
class SearchRng
{
public:
  explicit SearchRng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

/// One tree node. Children are keyed by action: the tree is exactly the tree
/// of action sequences from the root, since transitions are deterministic.
struct SearchNode
{
  static constexpr int kNoChild = -1;

  LongState state;
  int parent = kNoChild;
  int parent_action = kNoChild;
  int depth = 0;
  std::array<int, JerkAction::kCount> child{kNoChild, kNoChild, kNoChild, kNoChild, kNoChild};
  std::array<std::uint32_t, JerkAction::kCount> visits{};
  std::array<double, JerkAction::kCount> q{};
  // Cached per-edge results; meaningful once the child exists.
  std::array<double, JerkAction::kCount> edge_reward{};
  std::array<double, JerkAction::kCount> edge_jerk{};
  ActionProbabilities prior{};
  bool prior_ready = false;

  std::uint64_t total_visits() const;
  bool is_leaf() const;
};

class SearchTree
{
public:
  explicit SearchTree(const LongState & root);

  static constexpr int kRoot = 0;

  const SearchNode & node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  SearchNode & mutable_node(int id) { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<SearchNode> & nodes() const { return nodes_; }

  int add_child(int parent, JerkAction action, const TransitionResult & step, double edge_reward);

  /// Actions from the root to `id`.
  std::vector<JerkAction> action_path(int id) const;
  /// Node ids from the root to `id`, inclusive.
  std::vector<int> node_path(int id) const;

private:
  std::vector<SearchNode> nodes_;
};

/// PUCT score of every action at `node` (noise excluded).
ActionProbabilities ucb_scores(const SearchNode & node, const ActionProbabilities & prior,
  const SearchConfig & cfg);

/// argmax over actions of the PUCT score plus fresh U(0, epsilon_max) noise
/// drawn once per action.
JerkAction select_ucb(const SearchNode & node, const ActionProbabilities & prior,
  const SearchConfig & cfg, SearchRng & rng);

SearchTree search(const LongState & root, const PredictionTable & pred, const MdpConfig & mdp_cfg,
  const SearchConfig & search_cfg, const PolicySet & policies);

/// First `k` leaves of a depth-first walk that visits children in decreasing
/// visit count, ties broken by ascending action index.
std::vector<int> top_k_leaves(const SearchTree & tree, int k);

/// States and actions along a tree path.
struct LeafPath
{
  std::vector<LongState> states;  // root first
  std::vector<JerkAction> actions;  // states.size() - 1 entries
  std::vector<double> effective_jerks;
};

LeafPath leaf_path(const SearchTree & tree, int leaf);

/// Extends a tree path to the horizon with `padding` and returns the full
/// trajectory.
Trajectory pad_trajectory(const LeafPath & path, const AccelPolicy & padding,
  const PredictionTable & pred, const MdpConfig & cfg);

struct GenerateResult
{
  LongState root;
  std::vector<Trajectory> trajectories;
  std::size_t tree_size = 0;
};

GenerateResult generate(const PlanningScene & scene, const MdpConfig & mdp_cfg,
  const SearchConfig & search_cfg, const PolicySet & policies);

}  // namespace treeplan
