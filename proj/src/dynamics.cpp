#include "imitanet/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "imitanet/errors.hpp"

namespace imitanet {

namespace {

// Agents whose rule outcome may have changed since they were last checked.
class DirtySet {
 public:
  DirtySet(const Graph& graph, std::optional<std::size_t> radius, bool all)
      : graph_(graph), radius_(radius), flag_(graph.size(), all ? 1 : 0),
        count_(all ? graph.size() : 0), seen_(graph.size(), 0) {}

  bool test(AgentId i) const { return flag_[i] != 0; }
  bool empty() const { return count_ == 0; }

  void mark(AgentId i) {
    if (!flag_[i]) {
      flag_[i] = 1;
      ++count_;
    }
  }
  void clear(AgentId i) {
    if (flag_[i]) {
      flag_[i] = 0;
      --count_;
    }
  }

  // Marks every agent within the rule's influence radius of v.
  void mark_around(AgentId v) {
    if (!radius_) {
      for (AgentId i = 0; i < flag_.size(); ++i) mark(i);
      return;
    }
    if (++stamp_ == 0) {
      std::fill(seen_.begin(), seen_.end(), 0);
      stamp_ = 1;
    }
    seen_[v] = stamp_;
    mark(v);
    frontier_.assign(1, v);
    for (std::size_t d = 0; d < *radius_ && !frontier_.empty(); ++d) {
      next_.clear();
      for (AgentId u : frontier_) {
        for (AgentId w : graph_.neighbors(u)) {
          if (seen_[w] == stamp_) continue;
          seen_[w] = stamp_;
          mark(w);
          next_.push_back(w);
        }
      }
      frontier_.swap(next_);
    }
  }

 private:
  const Graph& graph_;
  std::optional<std::size_t> radius_;
  std::vector<char> flag_;
  std::size_t count_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
  std::vector<AgentId> frontier_;
  std::vector<AgentId> next_;
};

// Re-checks dirty agents; clears the stable ones. True iff none remain.
bool settle(const UpdateRule& rule, const NetworkGame& game,
            const StrategyState& x, DirtySet& dirty) {
  if (dirty.empty()) return true;
  for (AgentId i = 0; i < x.size(); ++i) {
    if (dirty.test(i) && update_agent(rule, game, x, i) == x[i]) dirty.clear(i);
  }
  return dirty.empty();
}

Relaxation relax_impl(const UpdateRule& rule, const NetworkGame& game,
                      const StrategyState& state, DirtySet& dirty) {
  const std::size_t n = state.size();
  const std::size_t cap = std::max<std::size_t>(1, n * n);
  Relaxation out{state, {}};
  StrategyState& x = out.state;
  bool swept_clean = false;
  while (!swept_clean && !dirty.empty()) {
    swept_clean = true;
    for (AgentId i = 0; i < n; ++i) {
      if (!dirty.test(i)) continue;
      dirty.clear(i);
      const Strategy next = update_agent(rule, game, x, i);
      if (next == x[i]) continue;
      if (out.events.size() >= cap) {
        throw NonConvergenceError(
            "relaxation exceeded " + std::to_string(cap) +
            " switches; the game is not A-coordinating from this state");
      }
      out.events.push_back({out.events.size() + 1, i, x[i], next});
      x.set(i, next);
      dirty.mark_around(i);
      swept_clean = false;
    }
  }
  return out;
}

}  // namespace

const char* to_string(RuleOutcome o) {
  switch (o) {
    case RuleOutcome::OnlyA: return "OnlyA";
    case RuleOutcome::OnlyB: return "OnlyB";
    case RuleOutcome::Both: return "Both";
  }
  return "?";
}

RuleOutcome ImitationRule::evaluate(const NetworkGame& game,
                                    const StrategyState& state,
                                    AgentId i) const {
  return imitation_outcome(game, state, i);
}

const ImitationRule& imitation_rule() {
  static const ImitationRule rule;
  return rule;
}

RuleOutcome imitation_outcome(const NetworkGame& game,
                              const StrategyState& state, AgentId i) {
  check_agent(game, i);
  check_state(game, state);
  double best = agent_payoff(game, state, i);
  bool has_a = state[i] == Strategy::A;
  bool has_b = !has_a;
  for (AgentId j : game.graph().neighbors(i)) {
    const double u = agent_payoff(game, state, j);
    if (u > best) {
      best = u;
      has_a = state[j] == Strategy::A;
      has_b = !has_a;
    } else if (u == best) {
      (state[j] == Strategy::A ? has_a : has_b) = true;
    }
  }
  if (has_a && has_b) return RuleOutcome::Both;
  return has_a ? RuleOutcome::OnlyA : RuleOutcome::OnlyB;
}

Strategy update_agent(const UpdateRule& rule, const NetworkGame& game,
                      const StrategyState& state, AgentId i) {
  switch (rule.evaluate(game, state, i)) {
    case RuleOutcome::OnlyA: return Strategy::A;
    case RuleOutcome::OnlyB: return Strategy::B;
    case RuleOutcome::Both: break;
  }
  switch (rule.tie_policy(i)) {
    case TiePolicy::FixA: return Strategy::A;
    case TiePolicy::FixB: return Strategy::B;
    case TiePolicy::Keep: break;
  }
  return state.at(i);
}

StepResult step(const UpdateRule& rule, const NetworkGame& game,
                const StrategyState& state, AgentId i) {
  StepResult out{state, false};
  const Strategy next = update_agent(rule, game, state, i);
  if (next != state[i]) {
    out.state.set(i, next);
    out.switched = true;
  }
  return out;
}

bool is_equilibrium(const UpdateRule& rule, const NetworkGame& game,
                    const StrategyState& state) {
  check_state(game, state);
  for (AgentId i = 0; i < state.size(); ++i) {
    if (update_agent(rule, game, state, i) != state[i]) return false;
  }
  return true;
}

Activator::Activator(const ActivationSequence& seq, std::size_t n)
    : seq_(seq), n_(n),
      rng_(std::holds_alternative<RandomUniform>(seq)
               ? std::get<RandomUniform>(seq).seed
               : 0) {
  if (n_ == 0) throw ArgumentError("activation sequence over zero agents");
  if (const auto* e = std::get_if<Explicit>(&seq_)) {
    for (AgentId i : e->agents) {
      if (i >= n_) throw ArgumentError("explicit sequence id out of range");
    }
  }
}

std::optional<AgentId> Activator::next() {
  if (std::holds_alternative<RandomUniform>(seq_)) {
    return rng_.uniform_index(n_);
  }
  if (std::holds_alternative<RoundRobin>(seq_)) return pos_++ % n_;
  const auto& agents = std::get<Explicit>(seq_).agents;
  if (pos_ >= agents.size()) return std::nullopt;
  return agents[pos_++];
}

Trajectory simulate(const UpdateRule& rule, const NetworkGame& game,
                    const StrategyState& state, const ActivationSequence& seq,
                    std::uint64_t max_activations) {
  if (max_activations == 0) throw ArgumentError("max_activations must be > 0");
  check_state(game, state);
  Trajectory traj{state, {}, state, false, 0};
  StrategyState& x = traj.final_state;
  DirtySet dirty(game.graph(), rule.influence_radius(), true);
  if (settle(rule, game, x, dirty)) {
    traj.converged = true;
    return traj;
  }
  Activator activator(seq, state.size());
  while (traj.activations < max_activations) {
    const auto i = activator.next();
    if (!i) break;
    ++traj.activations;
    const Strategy next = update_agent(rule, game, x, *i);
    if (next == x[*i]) continue;
    traj.events.push_back({traj.activations, *i, x[*i], next});
    x.set(*i, next);
    dirty.mark_around(*i);
    if (settle(rule, game, x, dirty)) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

StrategyState replay(const Trajectory& trajectory) {
  StrategyState x = trajectory.initial;
  for (const auto& e : trajectory.events) x.set(e.agent, e.to);
  return x;
}

StrategyState relax_switchers_only(const UpdateRule& rule,
                                   const NetworkGame& game,
                                   const StrategyState& state) {
  return relax_traced(rule, game, state).state;
}

Relaxation relax_traced(const UpdateRule& rule, const NetworkGame& game,
                        const StrategyState& state) {
  check_state(game, state);
  DirtySet dirty(game.graph(), rule.influence_radius(), true);
  return relax_impl(rule, game, state, dirty);
}

Relaxation relax_from(const UpdateRule& rule, const NetworkGame& game,
                      const StrategyState& state,
                      std::span<const AgentId> seeds) {
  check_state(game, state);
  DirtySet dirty(game.graph(), rule.influence_radius(), false);
  if (!rule.influence_radius()) {
    for (AgentId i = 0; i < state.size(); ++i) dirty.mark(i);
  }
  for (AgentId i : seeds) {
    check_agent(game, i);
    dirty.mark(i);
  }
  return relax_impl(rule, game, state, dirty);
}

}  // namespace imitanet
