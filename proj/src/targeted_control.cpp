#include "imitanet/targeted_control.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>

#include "imitanet/dynamics.hpp"
#include "imitanet/errors.hpp"
#include "imitanet/uniform_control.hpp"

namespace imitanet {

namespace {

bool has_B_neighbor(const Graph& g, const StrategyState& x, AgentId i) {
  for (AgentId j : g.neighbors(i)) {
    if (x[j] == Strategy::B) return true;
  }
  return false;
}

// Sum of rewards after adding `amount` to agent j, summed in agent order so
// that it matches RewardVector::total() bit for bit.
double total_with_increment(const RewardVector& r, AgentId j, double amount) {
  double sum = 0.0;
  for (AgentId i = 0; i < r.size(); ++i) sum += i == j ? r[i] + amount : r[i];
  return sum;
}

void require_control_preconditions(const NetworkGame& game,
                                   const StrategyState& x0) {
  require_opponent_coordinating(game);
  require_equilibrium(game, x0);
  require_reachable_all_A(game, x0);
}

struct Choice {
  AgentId agent = 0;
  std::optional<CandidateEvaluation> eval;
};

Choice choose_among(const TargetingPolicy& policy, const NetworkGame& game,
                    const RewardVector& rewards, const StrategyState& xbar,
                    const std::vector<AgentId>& candidates, Rng& rng,
                    double epsilon, Execution exec) {
  if (candidates.empty()) throw StateError("no eligible agent to target");
  using Kind = TargetingPolicy::Kind;
  switch (policy.kind) {
    case Kind::Rand:
      return {candidates[rng.uniform_index(candidates.size())], std::nullopt};
    case Kind::Deg: {
      AgentId best = candidates.front();
      for (AgentId j : candidates) {
        if (game.graph().degree(j) > game.graph().degree(best)) best = j;
      }
      return {best, std::nullopt};
    }
    case Kind::IME: {
      const NetworkGame rewarded = apply_rewards(game, rewards);
      AgentId best = candidates.front();
      double best_u = agent_payoff(rewarded, xbar, best);
      for (AgentId j : candidates) {
        const double u = agent_payoff(rewarded, xbar, j);
        if (u > best_u) {
          best = j;
          best_u = u;
        }
      }
      return {best, std::nullopt};
    }
    case Kind::IPO:
    case Kind::IRO:
    case Kind::IPRO: {
      auto evals =
          evaluate_candidates(game, rewards, xbar, candidates, epsilon, exec);
      const std::size_t k = ratio_argmax(evals, policy.alpha, policy.beta);
      return {evals[k].agent, std::move(evals[k])};
    }
  }
  throw InternalError("unknown targeting policy");
}

ControlOutcome run_iterative(const NetworkGame& game, const StrategyState& x0,
                             const TargetingPolicy& policy,
                             std::optional<double> rho, double epsilon,
                             Execution exec) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("epsilon must be positive and finite");
  }
  require_control_preconditions(game, x0);

  const std::size_t n = game.size();
  const std::size_t guard = std::max<std::size_t>(1, n * n);
  Rng rng(policy.seed);
  ControlOutcome out{RewardVector(n), x0, 0.0, 0, 0, {}};
  StrategyState& x = out.final_state;

  while (!x.all(Strategy::A)) {
    if (rho && !(out.rewards.total() < *rho)) break;
    std::vector<AgentId> candidates = eligible_set(game, x);
    if (rho) {
      const NetworkGame rewarded = apply_rewards(game, out.rewards);
      std::erase_if(candidates, [&](AgentId i) {
        const double inc = min_switch_reward(rewarded, x, i) + epsilon;
        return !(total_with_increment(out.rewards, i, inc) <= *rho);
      });
      if (candidates.empty()) break;
    }
    Choice choice = choose_among(policy, game, out.rewards, x, candidates, rng,
                                 epsilon, exec);
    if (!choice.eval) {
      choice.eval =
          evaluate_candidate(game, out.rewards, x, choice.agent, epsilon);
    }
    out.rewards.add(choice.agent, choice.eval->r_check + epsilon);
    x = std::move(choice.eval->xprime);
    out.targeted_order.push_back(choice.agent);
    if (++out.iterations > guard) {
      throw InternalError("targeting did not terminate within n^2 iterations");
    }
  }
  out.total_cost = out.rewards.total();
  out.num_A = x.count(Strategy::A);
  return out;
}

}  // namespace

TargetingPolicy TargetingPolicy::ipro(double alpha, double beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw ArgumentError("IPRO exponents must be non-negative");
  }
  return {Kind::IPRO, alpha, beta, 0};
}

TargetingPolicy TargetingPolicy::parse(std::string_view name, double alpha,
                                       double beta, std::uint64_t seed) {
  std::string s(name);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "rand") return rand(seed);
  if (s == "deg") return deg();
  if (s == "ime") return ime();
  if (s == "ipo") return ipo();
  if (s == "iro") return iro();
  if (s == "ipro") return ipro(alpha, beta);
  throw ArgumentError("unknown policy '" + std::string(name) + "'");
}

std::string TargetingPolicy::name() const {
  switch (kind) {
    case Kind::Rand: return "rand";
    case Kind::Deg: return "deg";
    case Kind::IME: return "ime";
    case Kind::IPO: return "ipo";
    case Kind::IRO: return "iro";
    case Kind::IPRO: return "ipro";
  }
  return "?";
}

std::vector<AgentId> eligible_set(const NetworkGame& game,
                                  const StrategyState& xbar) {
  check_state(game, xbar);
  std::vector<AgentId> out;
  for (AgentId i = 0; i < game.size(); ++i) {
    if (xbar[i] == Strategy::A && has_B_neighbor(game.graph(), xbar, i)) {
      out.push_back(i);
    }
  }
  return out;
}

double min_switch_reward(const NetworkGame& game, const StrategyState& xbar,
                         AgentId i) {
  check_state(game, xbar);
  check_agent(game, i);
  const Graph& g = game.graph();
  if (xbar[i] != Strategy::A || !has_B_neighbor(g, xbar, i)) {
    throw ArgumentError("agent " + std::to_string(i + 1) +
                        " is not eligible for targeting");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (AgentId j : g.neighbors(i)) {
    if (xbar[j] != Strategy::B) continue;
    top = std::max(top, agent_payoff(game, xbar, j));
    for (AgentId k : g.neighbors(j)) {
      if (xbar[k] == Strategy::B) top = std::max(top, agent_payoff(game, xbar, k));
    }
  }
  return (top - agent_payoff(game, xbar, i)) /
         static_cast<double>(g.degree(i));
}

double potential(const NetworkGame& game, const StrategyState& state) {
  check_state(game, state);
  double phi = 0.0;
  for (AgentId i = 0; i < game.size(); ++i) {
    phi += static_cast<double>(count_A_neighbors(game, state, i));
  }
  return phi;
}

CandidateEvaluation evaluate_candidate(const NetworkGame& game,
                                       const RewardVector& rewards,
                                       const StrategyState& xbar, AgentId j,
                                       double epsilon) {
  const double r_check =
      min_switch_reward(apply_rewards(game, rewards), xbar, j);
  RewardVector tentative = rewards;
  tentative.add(j, r_check + epsilon);
  std::vector<AgentId> seeds{j};
  for (AgentId k : game.graph().neighbors(j)) seeds.push_back(k);
  Relaxation relaxed =
      relax_from(imitation_rule(), apply_rewards(game, tentative), xbar, seeds);
  for (const auto& e : relaxed.events) {
    if (e.from == Strategy::A) {
      throw InternalError("agent " + std::to_string(e.agent + 1) +
                          " switched A->B after a reward was offered");
    }
  }
  const double delta_phi =
      potential(game, relaxed.state) - potential(game, xbar);
  return {j, r_check, delta_phi, std::move(relaxed.state)};
}

std::vector<CandidateEvaluation> evaluate_candidates(
    const NetworkGame& game, const RewardVector& rewards,
    const StrategyState& xbar, const std::vector<AgentId>& agents,
    double epsilon, Execution exec) {
  return map_indices<CandidateEvaluation>(
      agents.size(),
      [&](std::size_t k) {
        return evaluate_candidate(game, rewards, xbar, agents[k], epsilon);
      },
      exec);
}

std::size_t ratio_argmax(const std::vector<CandidateEvaluation>& evals,
                         double alpha, double beta) {
  if (evals.empty()) throw StateError("no candidates to rank");
  const bool all_flat =
      std::all_of(evals.begin(), evals.end(),
                  [](const CandidateEvaluation& e) { return e.delta_phi == 0.0; });
  auto better_cheapest = [&](std::size_t a, std::size_t b) {
    if (evals[a].r_check != evals[b].r_check) {
      return evals[a].r_check < evals[b].r_check;
    }
    return evals[a].agent < evals[b].agent;
  };
  // (infinite?, score, dphi) compared lexicographically, lower id on ties.
  auto rank = [&](const CandidateEvaluation& e) {
    const bool infinite = beta > 0.0 && e.r_check == 0.0;
    const double score =
        infinite ? e.delta_phi
                 : std::pow(e.delta_phi, alpha) / std::pow(e.r_check, beta);
    return std::tuple<bool, double>(infinite, score);
  };
  auto better_ratio = [&](std::size_t a, std::size_t b) {
    const auto ra = rank(evals[a]);
    const auto rb = rank(evals[b]);
    if (ra != rb) return ra > rb;
    if (evals[a].delta_phi != evals[b].delta_phi) {
      return evals[a].delta_phi > evals[b].delta_phi;
    }
    return evals[a].agent < evals[b].agent;
  };
  std::size_t best = 0;
  for (std::size_t k = 1; k < evals.size(); ++k) {
    if (all_flat ? better_cheapest(k, best) : better_ratio(k, best)) best = k;
  }
  return best;
}

AgentId select_target(const TargetingPolicy& policy, const NetworkGame& game,
                      const RewardVector& rewards, const StrategyState& xbar,
                      Rng& rng, double epsilon, Execution exec) {
  const auto candidates = eligible_set(game, xbar);
  if (candidates.empty()) throw StateError("eligible set is empty");
  return choose_among(policy, game, rewards, xbar, candidates, rng, epsilon,
                      exec)
      .agent;
}

ControlOutcome targeted_control(const NetworkGame& game,
                                const StrategyState& x0,
                                const TargetingPolicy& policy, double epsilon,
                                Execution exec) {
  return run_iterative(game, x0, policy, std::nullopt, epsilon, exec);
}

ControlOutcome budgeted_control(const NetworkGame& game,
                                const StrategyState& x0,
                                const TargetingPolicy& policy, double rho,
                                double epsilon, Execution exec) {
  if (!(rho >= 0.0)) throw ArgumentError("budget must be non-negative");
  return run_iterative(game, x0, policy, rho, epsilon, exec);
}

namespace {

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const NetworkGame& game, double epsilon,
                   const ExhaustiveOptions& options)
      : game_(game), epsilon_(epsilon), options_(options),
        depth_cap_(std::max<std::size_t>(1, game.size() * game.size())) {}

  void seed_incumbent(ControlOutcome incumbent) {
    best_ = std::move(incumbent);
  }

  void run(const StrategyState& x0) {
    std::vector<AgentId> order;
    visit(x0, RewardVector(game_.size()), order);
  }

  ControlOutcome take_best() { return std::move(*best_); }
  const ExhaustiveStats& stats() const { return stats_; }

 private:
  void visit(const StrategyState& x, const RewardVector& rewards,
             std::vector<AgentId>& order) {
    ++stats_.nodes;
    if (stats_.nodes > options_.max_nodes) {
      throw SearchBudgetExceeded("exhaustive search node budget exhausted");
    }
    if (options_.deadline && (stats_.nodes & 0xff) == 1 &&
        std::chrono::steady_clock::now() > *options_.deadline) {
      throw SearchBudgetExceeded("exhaustive search deadline passed");
    }
    const double spent = rewards.total();
    if (x.all(Strategy::A)) {
      if (!best_ || spent < best_->total_cost) {
        best_ = ControlOutcome{rewards, x,           spent,
                               x.size(), order.size(), order};
      }
      return;
    }
    if (best_ && spent >= best_->total_cost) return;
    if (order.size() >= depth_cap_) {
      throw InternalError("exhaustive search exceeded n^2 depth");
    }

    std::string key = memo_key(x, rewards);
    auto [it, inserted] = memo_.try_emplace(std::move(key), spent);
    if (!inserted) {
      if (it->second <= spent) {
        ++stats_.memo_hits;
        return;
      }
      it->second = spent;
    }

    auto evals = evaluate_candidates(game_, rewards, x, eligible_set(game_, x),
                                     epsilon_, Execution::Serial);
    // Most promising first, so good incumbents appear early.
    std::vector<std::size_t> idx(evals.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::vector<std::size_t> ranked;
    while (!idx.empty()) {
      std::vector<CandidateEvaluation> rest;
      for (std::size_t k : idx) rest.push_back(evals[k]);
      const std::size_t pick = ratio_argmax(rest, 1.0, 1.0);
      ranked.push_back(idx[pick]);
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    for (std::size_t k : ranked) {
      const auto& e = evals[k];
      const double inc = e.r_check + epsilon_;
      if (best_ && total_with_increment(rewards, e.agent, inc) >=
                       best_->total_cost) {
        continue;
      }
      RewardVector next = rewards;
      next.add(e.agent, inc);
      order.push_back(e.agent);
      visit(e.xprime, next, order);
      order.pop_back();
    }
  }

  // Strategies plus the rewards of A-players that still border a B-player.
  // Rewards of other A-players can never matter again: no agent leaves A.
  std::string memo_key(const StrategyState& x, const RewardVector& r) const {
    std::string key = x.to_string();
    for (AgentId i = 0; i < x.size(); ++i) {
      if (x[i] == Strategy::A && has_B_neighbor(game_.graph(), x, i)) {
        char bytes[sizeof(double)];
        const double v = r[i];
        std::memcpy(bytes, &v, sizeof v);
        key.append(bytes, sizeof bytes);
      }
    }
    return key;
  }

  const NetworkGame& game_;
  double epsilon_;
  ExhaustiveOptions options_;
  std::size_t depth_cap_;
  std::optional<ControlOutcome> best_;
  std::unordered_map<std::string, double> memo_;
  ExhaustiveStats stats_;
};

}  // namespace

ControlOutcome exhaustive_optimal(const NetworkGame& game,
                                  const StrategyState& x0, double epsilon,
                                  const ExhaustiveOptions& options,
                                  ExhaustiveStats* stats) {
  ControlOutcome ipro =
      targeted_control(game, x0, TargetingPolicy::ipro(), epsilon,
                       Execution::Serial);
  ExhaustiveSearch search(game, epsilon, options);
  search.seed_incumbent(std::move(ipro));
  search.run(x0);
  if (stats) *stats = search.stats();
  return search.take_best();
}

}  // namespace imitanet
