#pragma once

#include <vector>

#include "imitanet/game.hpp"
#include "imitanet/netgen.hpp"

namespace imitanet::test {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (AgentId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (AgentId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

inline NetworkGame same_payoffs(Graph g, PayoffMatrix pm) {
  const std::size_t n = g.size();
  return NetworkGame(std::move(g), std::vector<PayoffMatrix>(n, pm));
}

// The default experiment setting at a given size.
inline Instance random_instance(std::size_t n, std::uint64_t seed,
                                double deg_exp = 4.0) {
  return generate_instance({n, radius_for_mean_degree(n, deg_exp), 1.0, 0.5, false},
                           seed);
}

}  // namespace imitanet::test
