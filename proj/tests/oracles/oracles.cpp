#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "imitanet/errors.hpp"
#include "imitanet/uniform_control.hpp"

namespace imitanet::oracle {

double brute_force_uniform_reward(const NetworkGame& game,
                                  const StrategyState& x0) {
  const std::vector<double> values = candidate_rewards(game, x0).values;

  double eta = 0.5;
  for (std::size_t k = 1; k < values.size(); ++k) {
    eta = std::min(eta, 0.5 * (values[k] - values[k - 1]));
  }

  std::vector<double> points;
  for (double v : values) {
    if (v < 0.0) continue;
    points.push_back(v);
    points.push_back(v + eta);
  }
  std::vector<char> ok(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    ok[k] = succeeds_all_A(game, x0, points[k]);
  }

  for (double v : values) {
    if (v < 0.0) continue;
    bool all_above = true;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points[k] > v && !ok[k]) {
        all_above = false;
        break;
      }
    }
    if (all_above) return v;
  }
  throw InternalError("oracle: no candidate above which every probe succeeds");
}

double potential_closed_form(const NetworkGame& game,
                             const StrategyState& state) {
  double phi = 0.0;
  for (AgentId j = 0; j < game.size(); ++j) {
    if (state[j] == Strategy::A) phi += static_cast<double>(game.graph().degree(j));
  }
  return phi;
}

double payoff_by_edges(const NetworkGame& game, const StrategyState& state,
                       AgentId i) {
  double u = 0.0;
  for (const auto& [a, b] : game.graph().edges()) {
    if (a == i) u += game.payoff(i).entry(state[i], state[b]);
    if (b == i) u += game.payoff(i).entry(state[i], state[a]);
  }
  return u;
}

}  // namespace imitanet::oracle
