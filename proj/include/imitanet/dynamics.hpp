#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "imitanet/game.hpp"
#include "imitanet/rng.hpp"

namespace imitanet {

/// Value of f_i(x): which strategies the rule admits for the active agent.
enum class RuleOutcome : std::uint8_t { OnlyA, OnlyB, Both };

/// What an agent does when its rule admits both strategies.
enum class TiePolicy : std::uint8_t { FixA, FixB, Keep };

const char* to_string(RuleOutcome o);

/// Asynchronous update rule: deterministic in (game, state, agent).
class UpdateRule {
 public:
  virtual ~UpdateRule() = default;

  virtual RuleOutcome evaluate(const NetworkGame& game,
                               const StrategyState& state, AgentId i) const = 0;

  virtual TiePolicy tie_policy(AgentId /*i*/) const { return TiePolicy::Keep; }

  // Graph distance beyond which a switch cannot change this rule's outcome.
  // nullopt: any switch may affect any agent.
  virtual std::optional<std::size_t> influence_radius() const {
    return std::nullopt;
  }
};

/// Imitate the highest earner in the closed neighbourhood; keep on ties.
class ImitationRule final : public UpdateRule {
 public:
  RuleOutcome evaluate(const NetworkGame& game, const StrategyState& state,
                       AgentId i) const override;
  std::optional<std::size_t> influence_radius() const override { return 2; }
};

/// Rule backed by an arbitrary callable, for exercising the generic
/// properties on rules other than imitation.
class FunctionRule final : public UpdateRule {
 public:
  using Fn = std::function<RuleOutcome(const NetworkGame&,
                                       const StrategyState&, AgentId)>;

  explicit FunctionRule(Fn fn, std::vector<TiePolicy> ties = {})
      : fn_(std::move(fn)), ties_(std::move(ties)) {}

  RuleOutcome evaluate(const NetworkGame& game, const StrategyState& state,
                       AgentId i) const override {
    return fn_(game, state, i);
  }
  TiePolicy tie_policy(AgentId i) const override {
    return i < ties_.size() ? ties_[i] : TiePolicy::Keep;
  }

 private:
  Fn fn_;
  std::vector<TiePolicy> ties_;
};

const ImitationRule& imitation_rule();

RuleOutcome imitation_outcome(const NetworkGame& game,
                              const StrategyState& state, AgentId i);

Strategy update_agent(const UpdateRule& rule, const NetworkGame& game,
                      const StrategyState& state, AgentId i);

struct StepResult {
  StrategyState state;
  bool switched = false;
};

StepResult step(const UpdateRule& rule, const NetworkGame& game,
                const StrategyState& state, AgentId i);

bool is_equilibrium(const UpdateRule& rule, const NetworkGame& game,
                    const StrategyState& state);

// Activation sequences. RandomUniform draws i.i.d. ids with
// Rng(seed).uniform_index(n); RoundRobin cycles 0..n-1; Explicit is finite.
struct RandomUniform {
  std::uint64_t seed = 0;
};
struct RoundRobin {};
struct Explicit {
  std::vector<AgentId> agents;
};
using ActivationSequence = std::variant<RandomUniform, RoundRobin, Explicit>;

class Activator {
 public:
  Activator(const ActivationSequence& seq, std::size_t n);
  /// Next active agent, or nullopt once an explicit sequence is exhausted.
  std::optional<AgentId> next();

 private:
  ActivationSequence seq_;
  std::size_t n_;
  std::size_t pos_ = 0;
  Rng rng_;
};

struct SwitchEvent {
  std::uint64_t t = 0;  // 1-based activation count at which the switch happened
  AgentId agent = 0;
  Strategy from = Strategy::B;
  Strategy to = Strategy::A;

  bool operator==(const SwitchEvent&) const = default;
};

struct Trajectory {
  StrategyState initial;
  std::vector<SwitchEvent> events;
  StrategyState final_state;
  bool converged = false;
  std::uint64_t activations = 0;
};

/// Activates agents per `seq` until equilibrium (checked initially and after
/// every switch) or `max_activations` activations.
Trajectory simulate(const UpdateRule& rule, const NetworkGame& game,
                    const StrategyState& state, const ActivationSequence& seq,
                    std::uint64_t max_activations);

/// Replays events onto the initial state.
StrategyState replay(const Trajectory& trajectory);

struct Relaxation {
  StrategyState state;
  std::vector<SwitchEvent> events;  // t counts switches, 1-based
};

/// Fixed point reached by repeatedly sweeping agents in ascending id order and
/// activating only those whose update differs from their strategy. Throws
/// NonConvergenceError after n^2 switches.
StrategyState relax_switchers_only(const UpdateRule& rule,
                                   const NetworkGame& game,
                                   const StrategyState& state);

/// Same, recording switch events.
Relaxation relax_traced(const UpdateRule& rule, const NetworkGame& game,
                        const StrategyState& state);

/// Same, but only the agents in `seeds` are initially assumed unstable. The
/// caller guarantees every other agent is stable in `state` under `game`.
Relaxation relax_from(const UpdateRule& rule, const NetworkGame& game,
                      const StrategyState& state,
                      std::span<const AgentId> seeds);

}  // namespace imitanet
