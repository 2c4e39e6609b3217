#pragma once

#include "imitanet/game.hpp"

namespace imitanet::oracle {

/// Infimum uniform reward by linear scan. Every non-negative candidate v and
/// v + eta (eta = half the smallest gap between candidates) is simulated; the
/// answer is the smallest non-negative candidate above which every tested
/// point succeeds. O(|R| n m); tests only.
double brute_force_uniform_reward(const NetworkGame& game,
                                  const StrategyState& x0);

/// Sum of degrees over A-players.
double potential_closed_form(const NetworkGame& game,
                             const StrategyState& state);

/// Payoff of agent i straight from the edge list.
double payoff_by_edges(const NetworkGame& game, const StrategyState& state,
                       AgentId i);

}  // namespace imitanet::oracle
