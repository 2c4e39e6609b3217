#include "imitanet/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imitanet/errors.hpp"

namespace imitanet {

char to_char(Strategy s) { return s == Strategy::A ? 'A' : 'B'; }

Strategy strategy_from_char(char c) {
  if (c == 'A') return Strategy::A;
  if (c == 'B') return Strategy::B;
  throw ArgumentError(std::string("strategy must be 'A' or 'B', got '") + c +
                      "'");
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) {
      throw ArgumentError("edge (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") out of range for n = " +
                          std::to_string(n));
    }
    if (i == j) throw ArgumentError("self-loop at agent " + std::to_string(i));
    g.adjacency_[i].push_back(j);
    g.adjacency_[j].push_back(i);
  }
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw ArgumentError("duplicate edge");
    }
  }
  g.num_edges_ = edges.size();
  return g;
}

bool Graph::has_edge(AgentId i, AgentId j) const {
  const auto& nbrs = adjacency_.at(i);
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (AgentId i = 0; i < size(); ++i) {
    for (AgentId j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<std::size_t> Graph::component_labels() const {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(size(), kUnset);
  std::vector<AgentId> stack;
  std::size_t next = 0;
  for (AgentId root = 0; root < size(); ++root) {
    if (label[root] != kUnset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      AgentId v = stack.back();
      stack.pop_back();
      for (AgentId w : adjacency_[v]) {
        if (label[w] == kUnset) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t Graph::component_count() const {
  auto labels = component_labels();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_opponent_coordinating(const PayoffMatrix& pm) {
  return pm.a > pm.b && pm.d > pm.c;
}

StrategyState StrategyState::from_string(std::string_view s) {
  std::vector<Strategy> x;
  x.reserve(s.size());
  for (char c : s) x.push_back(strategy_from_char(c));
  return StrategyState(std::move(x));
}

std::string StrategyState::to_string() const {
  std::string s;
  s.reserve(x_.size());
  for (Strategy v : x_) s.push_back(to_char(v));
  return s;
}

std::size_t StrategyState::count(Strategy s) const {
  return static_cast<std::size_t>(std::count(x_.begin(), x_.end(), s));
}

RewardVector::RewardVector(std::vector<double> r) : r_(std::move(r)) {
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!std::isfinite(r_[i]) || r_[i] < 0.0) {
      throw ArgumentError("reward for agent " + std::to_string(i) +
                          " must be finite and non-negative");
    }
  }
}

RewardVector RewardVector::uniform(std::size_t n, double r0) {
  return RewardVector(std::vector<double>(n, r0));
}

void RewardVector::add(AgentId i, double amount) {
  if (!std::isfinite(amount) || amount < 0.0) {
    throw ArgumentError("reward increment must be finite and non-negative");
  }
  r_.at(i) += amount;
}

double RewardVector::total() const {
  return std::accumulate(r_.begin(), r_.end(), 0.0);
}

NetworkGame::NetworkGame(Graph graph, std::vector<PayoffMatrix> payoffs)
    : NetworkGame(std::make_shared<const Graph>(std::move(graph)),
                  std::move(payoffs)) {}

NetworkGame::NetworkGame(std::shared_ptr<const Graph> graph,
                         std::vector<PayoffMatrix> payoffs)
    : graph_(std::move(graph)), payoffs_(std::move(payoffs)) {
  if (!graph_) throw ArgumentError("null graph");
  if (payoffs_.size() != graph_->size()) {
    throw ArgumentError("payoff count " + std::to_string(payoffs_.size()) +
                        " does not match agent count " +
                        std::to_string(graph_->size()));
  }
  for (const auto& pm : payoffs_) {
    if (!std::isfinite(pm.a) || !std::isfinite(pm.b) || !std::isfinite(pm.c) ||
        !std::isfinite(pm.d)) {
      throw ArgumentError("payoff entries must be finite");
    }
  }
}

bool NetworkGame::all_opponent_coordinating() const {
  return std::all_of(payoffs_.begin(), payoffs_.end(),
                     [](const PayoffMatrix& pm) {
                       return is_opponent_coordinating(pm);
                     });
}

void check_state(const NetworkGame& game, const StrategyState& state) {
  if (state.size() != game.size()) {
    throw ArgumentError("state length " + std::to_string(state.size()) +
                        " does not match agent count " +
                        std::to_string(game.size()));
  }
}

void check_agent(const NetworkGame& game, AgentId i) {
  if (i >= game.size()) {
    throw ArgumentError("agent id " + std::to_string(i) + " out of range");
  }
}

double agent_payoff(const NetworkGame& game, const StrategyState& state,
                    AgentId i) {
  check_agent(game, i);
  const PayoffMatrix& pm = game.payoff(i);
  const Strategy self = state.at(i);
  double u = 0.0;
  for (AgentId j : game.graph().neighbors(i)) u += pm.entry(self, state[j]);
  return u;
}

std::vector<double> all_payoffs(const NetworkGame& game,
                                const StrategyState& state) {
  check_state(game, state);
  std::vector<double> u(game.size());
  for (AgentId i = 0; i < game.size(); ++i) u[i] = agent_payoff(game, state, i);
  return u;
}

std::size_t count_A_neighbors(const NetworkGame& game,
                              const StrategyState& state, AgentId i) {
  check_agent(game, i);
  std::size_t k = 0;
  for (AgentId j : game.graph().neighbors(i)) {
    if (state.at(j) == Strategy::A) ++k;
  }
  return k;
}

NetworkGame apply_rewards(const NetworkGame& game, const RewardVector& r) {
  if (r.size() != game.size()) {
    throw ArgumentError("reward vector length does not match agent count");
  }
  std::vector<PayoffMatrix> shifted = game.payoffs();
  for (AgentId i = 0; i < shifted.size(); ++i) {
    if (r[i] < 0.0) throw ArgumentError("negative reward");
    shifted[i].a += r[i];
    shifted[i].b += r[i];
  }
  return NetworkGame(game.shared_graph(), std::move(shifted));
}

}  // namespace imitanet
