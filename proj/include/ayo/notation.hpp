#pragma once

#include <optional>
#include <string>

#include "ayo/game.hpp"

namespace ayo {

// "<p0>,...,<p5>/<p6>,...,<p11> <S|N> <capS> <capN>"
std::string format_state(const GameState& state);

// Throws std::invalid_argument on malformed notation. When expected_total is
// given, seed conservation against it is enforced.
GameState parse_state(const std::string& text,
                      std::optional<int> expected_total = std::nullopt);

GameState parse_state(const std::string& text, const GameConfig& config);

}  // namespace ayo
