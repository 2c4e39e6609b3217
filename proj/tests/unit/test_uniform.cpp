#include <doctest.h>

#include <algorithm>

#include "../oracles/oracles.hpp"
#include "helpers.hpp"
#include "imitanet/errors.hpp"
#include "imitanet/uniform_control.hpp"

using namespace imitanet;
using namespace imitanet::test;

namespace {

NetworkGame two_node() { return same_payoffs(path_graph(2), {2, 0, 0, 2}); }

}  // namespace

TEST_CASE("payoff support examples") {
  auto game = same_payoffs(path_graph(2), {1, 0, 0, 1});
  auto s = payoff_support(game, StrategyState::from_string("AB"), 0);
  CHECK(s.pi_A == std::vector<double>{0, 1});
  CHECK(s.pi_B == std::vector<double>{1, 0});

  PayoffMatrix pm{3, 1, 0.5, 2};
  auto star = same_payoffs(star_graph(2), pm);
  auto full = payoff_support(star, StrategyState::from_string("AAA"), 0);
  CHECK(full.pi_A == std::vector<double>{6});
  CHECK(full.pi_B == std::vector<double>{1});

  auto pair = payoff_support(two_node(), StrategyState::from_string("AB"), 0);
  CHECK(pair.pi_A == std::vector<double>{0, 2});
}

TEST_CASE("payoff support sizes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = random_instance(15, seed);
    for (AgentId i = 0; i < 15; ++i) {
      auto s = payoff_support(inst.game, inst.x0, i);
      const std::size_t expected =
          inst.game.graph().degree(i) - count_A_neighbors(inst.game, inst.x0, i) + 1;
      CHECK(s.pi_A.size() == expected);
      CHECK(s.pi_B.size() == expected);
    }
  }
}

TEST_CASE("candidate reward examples") {
  auto game = two_node();
  CHECK(candidate_rewards(game, StrategyState::from_string("AA")).values ==
        std::vector<double>{0});
  // Agent 2's B-payoffs are taken with its one A-neighbour fixed, so only
  // 0 - {0, 2} arises.
  auto c = candidate_rewards(game, StrategyState::from_string("AB"));
  CHECK(c.values == std::vector<double>{-2, 0});
  CHECK(c.index_of_zero() == 1);
  CHECK(c.contains(-2));
  CHECK_FALSE(c.contains(2));
  CHECK_THROWS_AS(candidate_rewards(game, StrategyState::from_string("BB")),
                  PreconditionError);
}

TEST_CASE("candidate set is sorted, distinct, holds zero and respects the count bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = random_instance(15, 300 + seed);
    const auto& g = inst.game.graph();
    auto c = candidate_rewards(inst.game, inst.x0);
    CHECK(std::adjacent_find(c.values.begin(), c.values.end(),
                             [](double a, double b) { return !(a < b); }) == c.values.end());
    CHECK(c.contains(0.0));

    std::size_t bound = 1;
    for (AgentId s = 0; s < 15; ++s) {
      if (inst.x0[s] != Strategy::B) continue;
      std::vector<AgentId> closed{s};
      for (AgentId i : g.neighbors(s)) closed.push_back(i);
      for (AgentId j : g.neighbors(s)) {
        const std::size_t pa = payoff_support(inst.game, inst.x0, j).pi_A.size();
        for (AgentId i : closed) {
          if (inst.x0[i] == Strategy::B)
            bound += payoff_support(inst.game, inst.x0, i).pi_B.size() * pa;
        }
      }
    }
    CHECK(c.size() <= bound);
  }
}

TEST_CASE("succeeds all A examples") {
  auto game = two_node();
  auto x = StrategyState::from_string("AB");
  CHECK_FALSE(succeeds_all_A(game, x, 0.0));
  for (double r : {1e-12, 1e-6, 0.5, 3.0}) CHECK(succeeds_all_A(game, x, r));
  CHECK_THROWS_AS(succeeds_all_A(game, x, -1.0), ArgumentError);

  auto path = same_payoffs(path_graph(3), {2, 0, 0, 2});
  CHECK_THROWS_AS(succeeds_all_A(path, StrategyState::from_string("AAB"), 1.0),
                  PreconditionError);

  auto inst = random_instance(20, 77);
  CHECK(succeeds_all_A(inst.game, inst.x0, 10.0));
}

TEST_CASE("optimal uniform reward examples") {
  auto game = two_node();
  CHECK(optimal_uniform_reward(game, StrategyState::from_string("AA")) == 0.0);
  CHECK(optimal_uniform_reward(game, StrategyState::from_string("AB")) == 0.0);
  CHECK(oracle::brute_force_uniform_reward(game, StrategyState::from_string("AB")) == 0.0);
  CHECK(oracle::brute_force_uniform_reward(game, StrategyState::from_string("AA")) == 0.0);

  auto bad = NetworkGame(path_graph(2), {{1, 0, 0, 1}, {0, 1, 0, 1}});
  CHECK_THROWS_AS(optimal_uniform_reward(bad, StrategyState::from_string("AB")),
                  PreconditionError);
}

TEST_CASE("components without an A-player are rejected") {
  const std::vector<Edge> e{{0, 1}, {2, 3}};
  auto game = same_payoffs(Graph::from_edges(4, e), {1, 0, 0, 1});
  CHECK_THROWS_AS(optimal_uniform_reward(game, StrategyState::from_string("AABB")),
                  PreconditionError);
}

TEST_CASE("property: optimum is a candidate, matches the oracle and splits success") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = random_instance(12, 500 + seed);
    auto sol = solve_uniform(inst.game, inst.x0);
    auto cands = candidate_rewards(inst.game, inst.x0);
    CHECK(cands.contains(sol.r0_star));
    CHECK(sol.candidates == cands.size());
    CHECK(sol.r0_star == oracle::brute_force_uniform_reward(inst.game, inst.x0));

    // Success is monotone in r0 over a 50-point grid.
    const double hi = std::max(1.0, 2.0 * sol.r0_star);
    bool seen_success = false;
    for (int k = 0; k < 50; ++k) {
      const double r = hi * k / 49.0;
      const bool ok = succeeds_all_A(inst.game, inst.x0, r);
      if (seen_success) CHECK(ok);
      seen_success = seen_success || ok;
      if (r > sol.r0_star) CHECK(ok);
      if (r < sol.r0_star) CHECK_FALSE(ok);
    }
  }
}
