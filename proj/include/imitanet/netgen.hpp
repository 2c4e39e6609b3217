#pragma once

#include <cstdint>
#include <vector>

#include "imitanet/game.hpp"
#include "imitanet/rng.hpp"

namespace imitanet {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// n points uniform in the unit square (x then y per agent); an edge joins
/// every pair at Euclidean distance <= radius.
Graph geometric_random_graph(std::size_t n, double radius, Rng& rng,
                             std::vector<Point>* points = nullptr);

/// sqrt((1 + deg_exp) / (pi * n)).
double radius_for_mean_degree(std::size_t n, double deg_exp);

/// (p + v*w11, v*w12, v*w21, p + v*w22) per agent, w i.i.d. U[0,1) drawn in
/// that order.
std::vector<PayoffMatrix> random_payoffs(std::size_t n, double p, double v,
                                         Rng& rng);

/// Uniform random state relaxed under imitation with a random activation
/// sequence. Components that end with no A-player are redrawn and relaxed
/// again (up to 20 times); the whole state is redrawn if it ends all-A or
/// components stay A-free (up to 1000 times, then GenerationError).
StrategyState random_equilibrium_state(const NetworkGame& game, Rng& rng);

struct InstanceSpec {
  std::size_t n = 20;
  double radius = 0.0;
  double p = 1.0;
  double v = 0.5;
  bool require_connected = false;
};

struct Instance {
  NetworkGame game;
  StrategyState x0;
  double radius = 0.0;
  std::size_t components = 0;
  std::uint64_t seed = 0;
};

/// Graph, payoffs and initial equilibrium from one seed, in that order. When
/// no admissible initial state exists for the drawn graph and payoffs, both
/// are redrawn (up to 50 times).
Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed);

}  // namespace imitanet
