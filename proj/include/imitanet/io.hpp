#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "imitanet/dynamics.hpp"
#include "imitanet/game.hpp"
#include "imitanet/targeted_control.hpp"

namespace imitanet {

/// Game file: {"n", "edges": [[i,j],...] 1-based with i<j,
/// "payoffs": [[a,b,c,d],...], "state": ["A"|"B",...]}; "state" optional.
struct GameDocument {
  NetworkGame game;
  std::optional<StrategyState> state;
};

nlohmann::json game_to_json(const NetworkGame& game,
                            const std::optional<StrategyState>& state = {});
/// Throws ArgumentError on schema violations.
GameDocument game_from_json(const nlohmann::json& j);

GameDocument read_game_file(const std::string& path);
void write_game_file(const std::string& path, const NetworkGame& game,
                     const std::optional<StrategyState>& state = {});

nlohmann::json state_to_json(const StrategyState& state);
StrategyState state_from_json(const nlohmann::json& j);

/// {"t", "agent" (1-based), "from", "to"}.
nlohmann::json event_to_json(const SwitchEvent& e);
/// One JSON object per line.
void write_trajectory_jsonl(std::ostream& os, const Trajectory& trajectory);

/// ControlOutcome with 1-based agent ids in targeted_order.
nlohmann::json outcome_to_json(const ControlOutcome& outcome);

}  // namespace imitanet
