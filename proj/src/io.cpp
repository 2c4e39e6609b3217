#include "imitanet/io.hpp"

#include <fstream>

#include "imitanet/errors.hpp"

namespace imitanet {

using nlohmann::json;

nlohmann::json state_to_json(const StrategyState& state) {
  json arr = json::array();
  for (Strategy s : state) arr.push_back(std::string(1, to_char(s)));
  return arr;
}

StrategyState state_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ArgumentError("state must be an array");
  std::vector<Strategy> x;
  for (const auto& v : j) {
    if (!v.is_string() || v.get<std::string>().size() != 1) {
      throw ArgumentError("state entries must be \"A\" or \"B\"");
    }
    x.push_back(strategy_from_char(v.get<std::string>()[0]));
  }
  return StrategyState(std::move(x));
}

nlohmann::json game_to_json(const NetworkGame& game,
                            const std::optional<StrategyState>& state) {
  json edges = json::array();
  for (auto [i, j] : game.graph().edges()) edges.push_back({i + 1, j + 1});
  json payoffs = json::array();
  for (const auto& pm : game.payoffs()) {
    payoffs.push_back({pm.a, pm.b, pm.c, pm.d});
  }
  json out = {{"n", game.size()}, {"edges", edges}, {"payoffs", payoffs}};
  if (state) {
    check_state(game, *state);
    out["state"] = state_to_json(*state);
  }
  return out;
}

GameDocument game_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw ArgumentError("each edge must be a pair [i, j]");
      }
      const auto a = e[0].get<long long>();
      const auto b = e[1].get<long long>();
      if (a < 1 || b < 1) throw ArgumentError("edge ids are 1-based");
      edges.emplace_back(static_cast<AgentId>(a - 1), static_cast<AgentId>(b - 1));
    }
    std::vector<PayoffMatrix> payoffs;
    for (const auto& p : j.at("payoffs")) {
      if (!p.is_array() || p.size() != 4) {
        throw ArgumentError("each payoff entry must be [a, b, c, d]");
      }
      payoffs.push_back({p[0].get<double>(), p[1].get<double>(),
                         p[2].get<double>(), p[3].get<double>()});
    }
    GameDocument doc{NetworkGame(Graph::from_edges(n, edges), std::move(payoffs)),
                     std::nullopt};
    if (j.contains("state")) {
      doc.state = state_from_json(j.at("state"));
      check_state(doc.game, *doc.state);
    }
    return doc;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed game JSON: ") + e.what());
  }
}

GameDocument read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ArgumentError(path + ": " + e.what());
  }
  return game_from_json(j);
}

void write_game_file(const std::string& path, const NetworkGame& game,
                     const std::optional<StrategyState>& state) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << game_to_json(game, state).dump() << '\n';
}

nlohmann::json event_to_json(const SwitchEvent& e) {
  return {{"t", e.t},
          {"agent", e.agent + 1},
          {"from", std::string(1, to_char(e.from))},
          {"to", std::string(1, to_char(e.to))}};
}

void write_trajectory_jsonl(std::ostream& os, const Trajectory& trajectory) {
  for (const auto& e : trajectory.events) os << event_to_json(e).dump() << '\n';
}

nlohmann::json outcome_to_json(const ControlOutcome& outcome) {
  json order = json::array();
  for (AgentId i : outcome.targeted_order) order.push_back(i + 1);
  return {{"rewards", outcome.rewards.values()},
          {"final_state", state_to_json(outcome.final_state)},
          {"total_cost", outcome.total_cost},
          {"num_A", outcome.num_A},
          {"iterations", outcome.iterations},
          {"targeted_order", order}};
}

}  // namespace imitanet
