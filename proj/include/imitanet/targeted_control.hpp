#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imitanet/game.hpp"
#include "imitanet/parallel.hpp"
#include "imitanet/rng.hpp"

namespace imitanet {

/// How iterative targeting picks the next agent.
struct TargetingPolicy {
  enum class Kind { Rand, Deg, IME, IPO, IRO, IPRO };

  Kind kind = Kind::IPRO;
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t seed = 0;  // Rand only

  static TargetingPolicy rand(std::uint64_t seed) {
    return {Kind::Rand, 0.0, 0.0, seed};
  }
  static TargetingPolicy deg() { return {Kind::Deg, 0.0, 0.0, 0}; }
  static TargetingPolicy ime() { return {Kind::IME, 0.0, 0.0, 0}; }
  static TargetingPolicy ipo() { return {Kind::IPO, 1.0, 0.0, 0}; }
  static TargetingPolicy iro() { return {Kind::IRO, 0.0, 1.0, 0}; }
  static TargetingPolicy ipro(double alpha = 1.0, double beta = 1.0);

  /// Parses rand|deg|ime|ipo|iro|ipro (case-insensitive).
  static TargetingPolicy parse(std::string_view name, double alpha = 1.0,
                               double beta = 1.0, std::uint64_t seed = 0);
  std::string name() const;

  bool uses_potential() const {
    return kind == Kind::IPO || kind == Kind::IRO || kind == Kind::IPRO;
  }
};

inline constexpr double kDefaultEpsilon = 1e-9;

struct ControlOutcome {
  RewardVector rewards;
  StrategyState final_state;
  double total_cost = 0.0;
  std::size_t num_A = 0;
  std::size_t iterations = 0;
  std::vector<AgentId> targeted_order;
};

/// A-players with at least one B-playing neighbour, ascending.
std::vector<AgentId> eligible_set(const NetworkGame& game,
                                  const StrategyState& xbar);

/// Infimum reward for agent i that makes at least one B-playing neighbour
/// switch: max over B-neighbours j of the top payoff among B-players in j's
/// closed neighbourhood, minus u_i, divided by deg_i (the reward is earned
/// once per neighbour). `game` already carries the current rewards.
double min_switch_reward(const NetworkGame& game, const StrategyState& xbar,
                         AgentId i);

/// Sum over agents of their A-playing neighbour count.
double potential(const NetworkGame& game, const StrategyState& state);

struct CandidateEvaluation {
  AgentId agent = 0;
  double r_check = 0.0;
  double delta_phi = 0.0;
  StrategyState xprime;
};

/// Tentatively raises agent j's reward by r_check + epsilon on top of
/// `rewards`, relaxes from xbar, and reports the potential gain. Nothing is
/// committed.
CandidateEvaluation evaluate_candidate(const NetworkGame& game,
                                       const RewardVector& rewards,
                                       const StrategyState& xbar, AgentId j,
                                       double epsilon);

/// evaluate_candidate over `agents`, in input order. The Parallel path spreads
/// agents over OpenMP threads; both paths return identical results.
std::vector<CandidateEvaluation> evaluate_candidates(
    const NetworkGame& game, const RewardVector& rewards,
    const StrategyState& xbar, const std::vector<AgentId>& agents,
    double epsilon, Execution exec = Execution::Parallel);

/// Index into `evals` of the IPO/IRO/IPRO choice: argmax dphi^alpha/r^beta.
/// r = 0 with beta > 0 ranks above every finite ratio (ties: larger dphi,
/// then lower id). If every dphi is 0 the cheapest candidate wins.
std::size_t ratio_argmax(const std::vector<CandidateEvaluation>& evals,
                         double alpha, double beta);

/// Chooses among eligible_set(game, xbar). Throws StateError when empty.
AgentId select_target(const TargetingPolicy& policy, const NetworkGame& game,
                      const RewardVector& rewards, const StrategyState& xbar,
                      Rng& rng, double epsilon = kDefaultEpsilon,
                      Execution exec = Execution::Parallel);

/// Iterates target / reward / relax until every agent plays A.
ControlOutcome targeted_control(const NetworkGame& game,
                                const StrategyState& x0,
                                const TargetingPolicy& policy,
                                double epsilon = kDefaultEpsilon,
                                Execution exec = Execution::Parallel);

/// As targeted_control, but only agents whose increment fits in the
/// remaining budget are eligible; stops when none does.
ControlOutcome budgeted_control(const NetworkGame& game,
                                const StrategyState& x0,
                                const TargetingPolicy& policy, double rho,
                                double epsilon = kDefaultEpsilon,
                                Execution exec = Execution::Parallel);

struct ExhaustiveOptions {
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct ExhaustiveStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
};

/// Minimum-cost reward vector over every targeting sequence of the iterative
/// family, via depth-first branch and bound. Throws SearchBudgetExceeded when
/// a budget in `options` runs out.
ControlOutcome exhaustive_optimal(const NetworkGame& game,
                                  const StrategyState& x0,
                                  double epsilon = kDefaultEpsilon,
                                  const ExhaustiveOptions& options = {},
                                  ExhaustiveStats* stats = nullptr);

}  // namespace imitanet
