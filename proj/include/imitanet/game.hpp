#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imitanet {

using AgentId = std::size_t;
using Edge = std::pair<AgentId, AgentId>;

/// A indexes payoff row/column 1, B row/column 2.
enum class Strategy : std::uint8_t { A = 0, B = 1 };

constexpr Strategy other(Strategy s) {
  return s == Strategy::A ? Strategy::B : Strategy::A;
}
char to_char(Strategy s);
Strategy strategy_from_char(char c);

/// Undirected simple graph with sorted adjacency lists. Ids are 0-based.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adjacency_(n) {}

  /// Rejects self-loops, duplicate edges (in either orientation) and
  /// out-of-range endpoints with ArgumentError.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t degree(AgentId i) const { return adjacency_.at(i).size(); }
  std::span<const AgentId> neighbors(AgentId i) const {
    return adjacency_.at(i);
  }
  bool has_edge(AgentId i, AgentId j) const;

  /// Edges as (i, j) with i < j in lexicographic order.
  std::vector<Edge> edges() const;

  /// Component label per agent; labels are 0..k-1 in order of lowest member.
  std::vector<std::size_t> component_labels() const;
  std::size_t component_count() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<AgentId>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Per-agent 2x2 payoffs: a = A vs A, b = A vs B, c = B vs A, d = B vs B.
struct PayoffMatrix {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double entry(Strategy self, Strategy opponent) const {
    if (self == Strategy::A) return opponent == Strategy::A ? a : b;
    return opponent == Strategy::A ? c : d;
  }

  bool operator==(const PayoffMatrix&) const = default;
};

/// a > b and d > c, strictly.
bool is_opponent_coordinating(const PayoffMatrix& pm);

class StrategyState {
 public:
  StrategyState() = default;
  StrategyState(std::size_t n, Strategy fill) : x_(n, fill) {}
  explicit StrategyState(std::vector<Strategy> x) : x_(std::move(x)) {}

  /// Parses e.g. "AABBA".
  static StrategyState from_string(std::string_view s);
  std::string to_string() const;

  std::size_t size() const { return x_.size(); }
  Strategy operator[](AgentId i) const { return x_[i]; }
  Strategy at(AgentId i) const { return x_.at(i); }
  void set(AgentId i, Strategy s) { x_.at(i) = s; }

  std::size_t count(Strategy s) const;
  bool all(Strategy s) const { return count(s) == x_.size(); }

  auto begin() const { return x_.begin(); }
  auto end() const { return x_.end(); }
  const std::vector<Strategy>& values() const { return x_; }

  bool operator==(const StrategyState&) const = default;

 private:
  std::vector<Strategy> x_;
};

/// Non-negative per-agent rewards added to both entries of the A row.
class RewardVector {
 public:
  RewardVector() = default;
  explicit RewardVector(std::size_t n) : r_(n, 0.0) {}
  /// Throws ArgumentError on a negative or non-finite entry.
  explicit RewardVector(std::vector<double> r);
  static RewardVector uniform(std::size_t n, double r0);

  std::size_t size() const { return r_.size(); }
  double operator[](AgentId i) const { return r_[i]; }
  /// Adds a non-negative amount to agent i.
  void add(AgentId i, double amount);
  double total() const;
  const std::vector<double>& values() const { return r_; }

  bool operator==(const RewardVector&) const = default;

 private:
  std::vector<double> r_;
};

/// Graph plus one payoff matrix per agent. The graph is shared between
/// copies, so apply_rewards and friends stay cheap.
class NetworkGame {
 public:
  NetworkGame() = default;
  NetworkGame(Graph graph, std::vector<PayoffMatrix> payoffs);
  NetworkGame(std::shared_ptr<const Graph> graph,
              std::vector<PayoffMatrix> payoffs);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& shared_graph() const { return graph_; }
  std::size_t size() const { return payoffs_.size(); }
  const PayoffMatrix& payoff(AgentId i) const { return payoffs_.at(i); }
  const std::vector<PayoffMatrix>& payoffs() const { return payoffs_; }

  bool all_opponent_coordinating() const;

 private:
  std::shared_ptr<const Graph> graph_ = std::make_shared<const Graph>();
  std::vector<PayoffMatrix> payoffs_;
};

/// Sum over neighbours j of pi^i[x_i][x_j]; zero for an isolated agent.
double agent_payoff(const NetworkGame& game, const StrategyState& state,
                    AgentId i);
std::vector<double> all_payoffs(const NetworkGame& game,
                                const StrategyState& state);

std::size_t count_A_neighbors(const NetworkGame& game,
                              const StrategyState& state, AgentId i);

/// New game with agent i's A row shifted by r_i. Pure.
NetworkGame apply_rewards(const NetworkGame& game, const RewardVector& r);

// Throws ArgumentError unless state.size() == game.size() and i < size.
void check_state(const NetworkGame& game, const StrategyState& state);
void check_agent(const NetworkGame& game, AgentId i);

}  // namespace imitanet
