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

#include "treeplan/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace treeplan
{

void SearchConfig::validate() const
{
  if (iterations < 0) {
    throw ConfigError("iterations must be nonnegative");
  }
  if (top_k < 1) {
    throw ConfigError("top_k must be at least 1");
  }
  if (!(c_puct > 0.0)) {
    throw ConfigError("c_puct must be positive");
  }
  if (!(q_max > 0.0)) {
    throw ConfigError("q_max must be positive");
  }
  if (!(epsilon_max >= 0.0)) {
    throw ConfigError("epsilon_max must be nonnegative");
  }
}

std::uint64_t SearchNode::total_visits() const
{
  return std::accumulate(visits.begin(), visits.end(), std::uint64_t{0});
}

bool SearchNode::is_leaf() const
{
  return std::all_of(child.begin(), child.end(), [](int c) { return c == kNoChild; });
}

SearchTree::SearchTree(const LongState & root)
{
  nodes_.emplace_back();
  nodes_.front().state = root;
}

int SearchTree::add_child(
  int parent, JerkAction action, const TransitionResult & step, double edge_reward)
{
  const auto a = action.index();
  auto & p = nodes_.at(static_cast<std::size_t>(parent));
  if (p.child[a] != SearchNode::kNoChild) {
    throw ContractViolation("child already exists");
  }
  const int id = static_cast<int>(nodes_.size());
  const int depth = p.depth + 1;
  p.child[a] = id;
  p.edge_reward[a] = edge_reward;
  p.edge_jerk[a] = step.effective_jerk;

  SearchNode child;
  child.state = step.next;
  child.parent = parent;
  child.parent_action = static_cast<int>(a);
  child.depth = depth;
  nodes_.push_back(std::move(child));
  return id;
}

std::vector<int> SearchTree::node_path(int id) const
{
  std::vector<int> path;
  for (int cur = id; cur != SearchNode::kNoChild; cur = node(cur).parent) {
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<JerkAction> SearchTree::action_path(int id) const
{
  std::vector<JerkAction> actions;
  const auto ids = node_path(id);
  for (std::size_t i = 1; i < ids.size(); ++i) {
    actions.push_back(
      JerkAction::from_index(static_cast<std::size_t>(node(ids[i]).parent_action)));
  }
  return actions;
}

ActionProbabilities ucb_scores(
  const SearchNode & node, const ActionProbabilities & prior, const SearchConfig & cfg)
{
  const double total = static_cast<double>(node.total_visits());
  ActionProbabilities scores{};
  for (std::size_t a = 0; a < JerkAction::kCount; ++a) {
    const double n = static_cast<double>(node.visits[a]);
    const double explore = std::sqrt((total + 1.0) / (n + 1.0));
    scores[a] = node.q[a] / cfg.q_max + cfg.c_puct * prior[a] * explore;
  }
  return scores;
}

JerkAction select_ucb(
  const SearchNode & node, const ActionProbabilities & prior, const SearchConfig & cfg,
  SearchRng & rng)
{
  const auto scores = ucb_scores(node, prior, cfg);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < JerkAction::kCount; ++a) {
    const double score = scores[a] + cfg.epsilon_max * rng.uniform01();
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return JerkAction::from_index(best);
}

SearchTree search(
  const LongState & root, const PredictionTable & pred, const MdpConfig & mdp_cfg,
  const SearchConfig & search_cfg, const PolicySet & policies)
{
  search_cfg.validate();
  if (is_terminal(root, mdp_cfg)) {
    throw ContractViolation("search from a terminal root");
  }

  SearchTree tree(root);
  SearchRng rng(search_cfg.seed);
  const auto uniform = uniform_prior(root);

  struct Edge
  {
    int node;
    std::size_t action;
  };
  std::vector<Edge> path;
  path.reserve(static_cast<std::size_t>(mdp_cfg.horizon_steps()) + 1);

  for (int iteration = 0; iteration < search_cfg.iterations; ++iteration) {
    path.clear();
    int id = SearchTree::kRoot;
    double value = 0.0;
    while (true) {
      auto & node = tree.mutable_node(id);
      if (is_terminal(node.state, mdp_cfg)) {
        value = 0.0;
        break;
      }
      if (!node.prior_ready) {
        node.prior = policies.prior ? policies.prior(node.state) : uniform;
        node.prior_ready = true;
      }
      const auto action = select_ucb(node, node.prior, search_cfg, rng);
      const auto a = action.index();
      path.push_back({id, a});
      if (node.visits[a] == 0) {
        const auto step = transition(node.state, action, pred, mdp_cfg);
        // add_child may reallocate; `node` is not used past this point.
        tree.add_child(id, action, step, reward_of(step, mdp_cfg));
        if (is_terminal(step.next, mdp_cfg)) {
          value = 0.0;
        } else if (policies.leaf_value) {
          value = policies.leaf_value(step.next);
        } else {
          value = rollout_return(step.next, policies.rollout, pred, mdp_cfg);
        }
        break;
      }
      id = node.child[a];
    }

    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      auto & node = tree.mutable_node(it->node);
      const double q = node.edge_reward[it->action] + mdp_cfg.gamma * value;
      const auto n = ++node.visits[it->action];
      node.q[it->action] += (q - node.q[it->action]) / static_cast<double>(n);
      value = q;
    }
  }
  return tree;
}

std::vector<int> top_k_leaves(const SearchTree & tree, int k)
{
  if (k < 1) {
    throw ContractViolation("top_k_leaves needs k >= 1");
  }
  std::vector<int> leaves;
  std::vector<int> stack{SearchTree::kRoot};
  while (!stack.empty() && static_cast<int>(leaves.size()) < k) {
    const int id = stack.back();
    stack.pop_back();
    const auto & node = tree.node(id);
    if (node.is_leaf()) {
      leaves.push_back(id);
      continue;
    }
    std::array<std::size_t, JerkAction::kCount> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&node](std::size_t l, std::size_t r) {
      return node.visits[l] > node.visits[r];
    });
    // Push in reverse so the most visited child is expanded first.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (node.child[*it] != SearchNode::kNoChild) {
        stack.push_back(node.child[*it]);
      }
    }
  }
  return leaves;
}

LeafPath leaf_path(const SearchTree & tree, int leaf)
{
  LeafPath path;
  const auto ids = tree.node_path(leaf);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto & node = tree.node(ids[i]);
    path.states.push_back(node.state);
    if (i > 0) {
      const auto a = static_cast<std::size_t>(node.parent_action);
      path.actions.push_back(JerkAction::from_index(a));
      path.effective_jerks.push_back(tree.node(ids[i - 1]).edge_jerk[a]);
    }
  }
  return path;
}

Trajectory pad_trajectory(
  const LeafPath & path, const AccelPolicy & padding, const PredictionTable & pred,
  const MdpConfig & cfg)
{
  if (path.states.empty() || path.actions.size() + 1 != path.states.size() ||
    path.effective_jerks.size() != path.actions.size())
  {
    throw ContractViolation("malformed leaf path");
  }
  if (static_cast<int>(path.actions.size()) > cfg.horizon_steps()) {
    throw ContractViolation("leaf path deeper than the horizon");
  }

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(cfg.horizon_steps()) + 1);
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    const auto & s = path.states[i];
    TrajectoryPoint p{s.t, s.x_ego, s.v_ego, s.a_ego, 0.0, 0.0};
    if (i < path.actions.size()) {
      p.commanded_jerk = path.actions[i].jerk();
      p.jerk = path.effective_jerks[i];
    }
    traj.points.push_back(p);
  }
  traj.padding_start = static_cast<int>(path.actions.size());

  LongState current = path.states.back();
  while (!is_terminal(current, cfg)) {
    const auto step = transition_accel(current, padding.accel(current), pred, cfg);
    auto & last = traj.points.back();
    last.commanded_jerk = step.effective_jerk;
    last.jerk = step.effective_jerk;
    const auto & n = step.next;
    traj.points.push_back({n.t, n.x_ego, n.v_ego, n.a_ego, 0.0, 0.0});
    current = n;
  }
  return traj;
}

GenerateResult generate(
  const PlanningScene & scene, const MdpConfig & mdp_cfg, const SearchConfig & search_cfg,
  const PolicySet & policies)
{
  mdp_cfg.validate();
  search_cfg.validate();
  GenerateResult result;
  result.root = init_state(scene, mdp_cfg);
  const auto tree = search(result.root, scene.predictions, mdp_cfg, search_cfg, policies);
  result.tree_size = tree.size();
  const auto leaves = top_k_leaves(tree, search_cfg.top_k);
  result.trajectories.reserve(leaves.size());
  for (int leaf : leaves) {
    result.trajectories.push_back(
      pad_trajectory(leaf_path(tree, leaf), policies.padding, scene.predictions, mdp_cfg));
  }
  return result;
}

}  // namespace treeplan
