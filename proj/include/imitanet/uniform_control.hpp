#pragma once

#include <cstddef>
#include <vector>

#include "imitanet/game.hpp"

namespace imitanet {

/// Payoffs agent i can earn while the network evolves A-monotonically from
/// x0: one entry per delta in {0, ..., deg_i - n^A_i}, in delta order (not
/// deduplicated).
struct PayoffSupport {
  std::vector<double> pi_A;
  std::vector<double> pi_B;
};

PayoffSupport payoff_support(const NetworkGame& game, const StrategyState& x0,
                             AgentId i);

/// Sorted, deduplicated candidate infimum rewards; always contains 0.
struct CandidateRewards {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::size_t index_of_zero() const;
  bool contains(double v) const;
};

/// All (y^B_i - y^A_j) / deg_j for s initially B, j a neighbour of s, i in
/// the closed neighbourhood of s with x0_i = B, y^B in Pi^B_i, y^A in Pi^A_j;
/// plus 0. Negative values are kept. Throws PreconditionError on all-B x0.
CandidateRewards candidate_rewards(const NetworkGame& game,
                                   const StrategyState& x0);

/// Offers r0 to every agent, relaxes from x0 and reports whether all agents
/// end at A. Throws PreconditionError unless x0 is an imitation equilibrium of
/// the unrewarded game.
bool succeeds_all_A(const NetworkGame& game, const StrategyState& x0,
                    double r0);

struct UniformSolution {
  double r0_star = 0.0;
  std::size_t candidates = 0;
  std::size_t simulations = 0;
};

/// Binary search over the non-negative candidates followed by a midpoint test
/// deciding which bracket endpoint is the infimum.
///
/// Preconditions (PreconditionError): every agent opponent-coordinating, x0 an
/// equilibrium, x0 not all-B, and every connected component holds an A-player.
UniformSolution solve_uniform(const NetworkGame& game, const StrategyState& x0);

double optimal_uniform_reward(const NetworkGame& game, const StrategyState& x0);

// Shared precondition checks, also used by targeted control.
void require_opponent_coordinating(const NetworkGame& game);
void require_equilibrium(const NetworkGame& game, const StrategyState& x0);
void require_reachable_all_A(const NetworkGame& game, const StrategyState& x0);

}  // namespace imitanet
