#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "imitanet/dynamics.hpp"
#include "imitanet/game.hpp"
#include "imitanet/parallel.hpp"
#include "imitanet/rng.hpp"

namespace imitanet {

struct Violation {
  std::uint64_t seed = 0;  // instance seed that reproduces the witness
  std::string witness;
};

struct PropertyReport {
  std::string property;
  std::size_t instances = 0;  // games checked
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  /// Appends other's instances and violations.
  void merge(const PropertyReport& other);
};

nlohmann::json report_to_json(const PropertyReport& report);

/// Samples `samples` pairs y <= z (every A in y is A in z) and checks, for
/// every agent, f(y)={A} => f(z)={A} and f(y)={A,B} => A in f(z).
PropertyReport check_a_coordinating(const UpdateRule& rule,
                                    const NetworkGame& game,
                                    std::size_t samples, Rng& rng,
                                    std::uint64_t seed = 0);

/// Same check over all 3^n ordered pairs. Requires n <= 12.
PropertyReport check_a_coordinating_exhaustive(const UpdateRule& rule,
                                               const NetworkGame& game,
                                               std::uint64_t seed = 0);

/// Applies `rewards` at the equilibrium x0 and simulates `sequences` random
/// activation sequences; any A->B switch or failure to settle is a violation.
PropertyReport check_a_monotone(const NetworkGame& game,
                                const StrategyState& x0,
                                const RewardVector& rewards,
                                std::size_t sequences, Rng& rng,
                                std::uint64_t seed = 0);

/// Relaxes under `sequences` random sequences, RoundRobin and the
/// switchers-only sweep; all must reach the same equilibrium through the same
/// switch set within n switches.
PropertyReport check_unique_convergence(const NetworkGame& game,
                                        const StrategyState& x0,
                                        const RewardVector& rewards,
                                        std::size_t sequences, Rng& rng,
                                        std::uint64_t seed = 0);

/// r0* must lie in the candidate set, and probes just around every
/// non-negative candidate must fail below r0* and succeed above it.
PropertyReport check_candidate_membership(const NetworkGame& game,
                                          const StrategyState& x0,
                                          std::uint64_t seed = 0);

/// Every connected labelled graph on n agents (edge subsets of K_n).
std::vector<Graph> connected_graphs(std::size_t n);

/// Opponent-coordinating matrix with entries in [-1, 2): two uniform draws
/// per row, the larger placed on the diagonal.
PayoffMatrix random_coordinating_matrix(Rng& rng);

struct SuiteConfig {
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  std::size_t n_min = 5;
  std::size_t n_max = 30;
  double deg_exp = 4.0;
  double p = 1.0;
  double v = 0.5;
  std::size_t sequences = 20;
  std::size_t pair_samples = 1000;
  std::size_t candidate_n = 15;
  std::size_t exhaustive_max_n = 4;
  std::size_t exhaustive_draws = 20;
};

/// Random rewards for the suites: each agent independently rewarded with
/// probability 1/2, amount U[0, s) with s ~ U[0, 2) per instance.
RewardVector random_rewards(std::size_t n, Rng& rng);

PropertyReport run_acoord_sampled_suite(const SuiteConfig& cfg,
                                        Execution exec = Execution::Parallel);
PropertyReport run_acoord_exhaustive_suite(const SuiteConfig& cfg,
                                           Execution exec = Execution::Parallel);
PropertyReport run_monotone_suite(const SuiteConfig& cfg,
                                  Execution exec = Execution::Parallel);
PropertyReport run_unique_suite(const SuiteConfig& cfg,
                                Execution exec = Execution::Parallel);
PropertyReport run_candidates_suite(const SuiteConfig& cfg,
                                    Execution exec = Execution::Parallel);

/// suite in {acoord, monotone, unique, candidates, all}.
std::vector<PropertyReport> run_suites(const std::string& suite,
                                       const SuiteConfig& cfg,
                                       Execution exec = Execution::Parallel);

}  // namespace imitanet
