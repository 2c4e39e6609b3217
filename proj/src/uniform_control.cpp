#include "imitanet/uniform_control.hpp"

#include <algorithm>
#include <string>

#include "imitanet/dynamics.hpp"
#include "imitanet/errors.hpp"

namespace imitanet {

namespace {

bool relaxes_to_all_A(const NetworkGame& game, const StrategyState& x0,
                      double r0) {
  const NetworkGame rewarded =
      apply_rewards(game, RewardVector::uniform(game.size(), r0));
  return relax_switchers_only(imitation_rule(), rewarded, x0)
      .all(Strategy::A);
}

}  // namespace

std::size_t CandidateRewards::index_of_zero() const {
  return static_cast<std::size_t>(
      std::lower_bound(values.begin(), values.end(), 0.0) - values.begin());
}

bool CandidateRewards::contains(double v) const {
  return std::binary_search(values.begin(), values.end(), v);
}

void require_opponent_coordinating(const NetworkGame& game) {
  for (AgentId i = 0; i < game.size(); ++i) {
    if (!is_opponent_coordinating(game.payoff(i))) {
      throw PreconditionError("agent " + std::to_string(i + 1) +
                              " is not opponent-coordinating");
    }
  }
}

void require_equilibrium(const NetworkGame& game, const StrategyState& x0) {
  check_state(game, x0);
  if (!is_equilibrium(imitation_rule(), game, x0)) {
    throw PreconditionError("initial state is not an equilibrium");
  }
}

void require_reachable_all_A(const NetworkGame& game, const StrategyState& x0) {
  check_state(game, x0);
  if (x0.all(Strategy::B)) {
    throw PreconditionError("initial state is all-B");
  }
  const auto labels = game.graph().component_labels();
  std::vector<char> has_a(game.graph().component_count(), 0);
  for (AgentId i = 0; i < x0.size(); ++i) {
    if (x0[i] == Strategy::A) has_a[labels[i]] = 1;
  }
  for (AgentId i = 0; i < x0.size(); ++i) {
    if (!has_a[labels[i]]) {
      throw PreconditionError("agent " + std::to_string(i + 1) +
                              " lies in a component with no A-player");
    }
  }
}

PayoffSupport payoff_support(const NetworkGame& game, const StrategyState& x0,
                             AgentId i) {
  check_state(game, x0);
  check_agent(game, i);
  const PayoffMatrix& pm = game.payoff(i);
  const double deg = static_cast<double>(game.graph().degree(i));
  const std::size_t n_a = count_A_neighbors(game, x0, i);
  const std::size_t free = game.graph().degree(i) - n_a;
  PayoffSupport out;
  out.pi_A.reserve(free + 1);
  out.pi_B.reserve(free + 1);
  for (std::size_t delta = 0; delta <= free; ++delta) {
    const double with_a = static_cast<double>(n_a + delta);
    const double with_b = deg - with_a;
    out.pi_A.push_back(pm.a * with_a + pm.b * with_b);
    out.pi_B.push_back(pm.c * with_a + pm.d * with_b);
  }
  return out;
}

CandidateRewards candidate_rewards(const NetworkGame& game,
                                   const StrategyState& x0) {
  check_state(game, x0);
  if (x0.size() > 0 && x0.all(Strategy::B)) {
    throw PreconditionError("candidate rewards need an initial A-player");
  }
  const Graph& g = game.graph();
  std::vector<PayoffSupport> support;
  support.reserve(game.size());
  for (AgentId i = 0; i < game.size(); ++i) {
    support.push_back(payoff_support(game, x0, i));
  }

  std::vector<double> values{0.0};
  std::vector<AgentId> b_closed;
  for (AgentId s = 0; s < game.size(); ++s) {
    if (x0[s] != Strategy::B) continue;
    b_closed.assign(1, s);
    for (AgentId i : g.neighbors(s)) {
      if (x0[i] == Strategy::B) b_closed.push_back(i);
    }
    for (AgentId j : g.neighbors(s)) {
      const double deg_j = static_cast<double>(g.degree(j));
      for (AgentId i : b_closed) {
        for (double y_b : support[i].pi_B) {
          for (double y_a : support[j].pi_A) {
            values.push_back((y_b - y_a) / deg_j);
          }
        }
      }
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return CandidateRewards{std::move(values)};
}

bool succeeds_all_A(const NetworkGame& game, const StrategyState& x0,
                    double r0) {
  require_equilibrium(game, x0);
  if (!(r0 >= 0.0)) throw ArgumentError("uniform reward must be >= 0");
  return relaxes_to_all_A(game, x0, r0);
}

UniformSolution solve_uniform(const NetworkGame& game,
                              const StrategyState& x0) {
  require_opponent_coordinating(game);
  require_equilibrium(game, x0);
  require_reachable_all_A(game, x0);

  const CandidateRewards cands = candidate_rewards(game, x0);
  const auto& v = cands.values;
  UniformSolution sol{0.0, cands.size(), 0};
  if (cands.size() == 1) return sol;

  auto test = [&](double r) {
    ++sol.simulations;
    return relaxes_to_all_A(game, x0, r);
  };

  std::size_t lo = cands.index_of_zero();
  std::size_t hi = v.size() - 1;

  if (test(v[lo])) {
    sol.r0_star = v[lo];
    return sol;
  }
  if (lo == hi || !test(v[hi])) {
    // Every candidate fails; the infimum must then be the largest one.
    if (!test(v[hi] + 1.0)) {
      throw InternalError("uniform reward above every candidate fails");
    }
    sol.r0_star = v[hi];
    return sol;
  }
  // Invariant: v[lo] fails, v[hi] succeeds.
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (test(v[mid])) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Success exactly at v[hi] may hide an infimum at v[lo] whose threshold is
  // strict; the open interval between them decides.
  sol.r0_star = test(0.5 * (v[lo] + v[hi])) ? v[lo] : v[hi];
  return sol;
}

double optimal_uniform_reward(const NetworkGame& game,
                              const StrategyState& x0) {
  return solve_uniform(game, x0).r0_star;
}

}  // namespace imitanet
