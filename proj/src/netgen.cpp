#include "imitanet/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imitanet/dynamics.hpp"
#include "imitanet/errors.hpp"

namespace imitanet {

namespace {

constexpr int kMaxAttempts = 1000;
constexpr int kComponentRedraws = 20;
constexpr int kGraphRedraws = 50;

}  // namespace

Graph geometric_random_graph(std::size_t n, double radius, Rng& rng,
                             std::vector<Point>* points) {
  if (n == 0) throw ArgumentError("graph needs at least one agent");
  if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
  std::vector<Point> pts(n);
  for (auto& pt : pts) {
    pt.x = rng.uniform01();
    pt.y = rng.uniform01();
  }
  std::vector<Edge> edges;
  const double r2 = radius * radius;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
    }
  }
  if (points) *points = std::move(pts);
  return Graph::from_edges(n, edges);
}

double radius_for_mean_degree(std::size_t n, double deg_exp) {
  if (n == 0) throw ArgumentError("n must be >= 1");
  return std::sqrt((1.0 + deg_exp) / (std::numbers::pi * static_cast<double>(n)));
}

std::vector<PayoffMatrix> random_payoffs(std::size_t n, double p, double v,
                                         Rng& rng) {
  if (!(p >= 1.0)) throw ArgumentError("coordination level p must be >= 1");
  if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("variance v must be in [0,1]");
  std::vector<PayoffMatrix> out(n);
  for (auto& pm : out) {
    pm.a = p + v * rng.uniform01();
    pm.b = v * rng.uniform01();
    pm.c = v * rng.uniform01();
    pm.d = p + v * rng.uniform01();
  }
  return out;
}

StrategyState random_equilibrium_state(const NetworkGame& game, Rng& rng) {
  const std::size_t n = game.size();
  if (n < 2) throw GenerationError("need at least two agents for a mixed state");
  const Graph& g = game.graph();
  const auto labels = g.component_labels();
  const std::size_t k = g.component_count();
  const std::uint64_t budget = 10000 * static_cast<std::uint64_t>(n) + 1000;

  // Components evolve independently, so redrawing only the components left
  // without an A-player samples the same conditional distribution as
  // rejecting whole states.
  auto redraw = [&](StrategyState& x, const std::vector<char>& which) {
    for (AgentId i = 0; i < n; ++i) {
      if (which[labels[i]]) x.set(i, rng.bernoulli(0.5) ? Strategy::B : Strategy::A);
    }
    Trajectory t = simulate(imitation_rule(), game, x, RandomUniform{rng.next()}, budget);
    if (!t.converged) return false;
    x = std::move(t.final_state);
    return true;
  };

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    StrategyState x(n, Strategy::A);
    std::vector<char> pending(k, 1);
    bool ok = false;
    for (int tries = 0; tries < kComponentRedraws; ++tries) {
      if (!redraw(x, pending)) break;
      std::fill(pending.begin(), pending.end(), 1);
      for (AgentId i = 0; i < n; ++i) {
        if (x[i] == Strategy::A) pending[labels[i]] = 0;
      }
      if (std::find(pending.begin(), pending.end(), 1) == pending.end()) {
        ok = true;
        break;
      }
    }
    if (!ok || x.all(Strategy::A)) continue;
    return x;
  }
  throw GenerationError("no admissible equilibrium after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

Instance generate_instance(const InstanceSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  // Some sparse graphs admit no mixed equilibrium in which every component
  // holds an A-player; those graphs are redrawn.
  for (int draw = 0; draw < kGraphRedraws; ++draw) {
    Graph graph = geometric_random_graph(spec.n, spec.radius, rng);
    if (spec.require_connected) {
      int tries = 1;
      while (graph.component_count() != 1) {
        if (++tries > kMaxAttempts) {
          throw GenerationError("no connected graph after " +
                                std::to_string(kMaxAttempts) + " attempts");
        }
        graph = geometric_random_graph(spec.n, spec.radius, rng);
      }
    }
    const std::size_t components = graph.component_count();
    NetworkGame game(std::move(graph),
                     random_payoffs(spec.n, spec.p, spec.v, rng));
    try {
      StrategyState x0 = random_equilibrium_state(game, rng);
      return Instance{std::move(game), std::move(x0), spec.radius, components,
                      seed};
    } catch (const GenerationError&) {
    }
  }
  throw GenerationError("no admissible instance after " +
                        std::to_string(kGraphRedraws) + " graph draws");
}

}  // namespace imitanet
