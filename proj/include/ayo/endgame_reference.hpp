#pragma once

#include <vector>

#include "ayo/endgame.hpp"
#include "ayo/game.hpp"

namespace ayo {

// Independent re-computation of endgame values, used to cross-check solve().
// Enumerates boards directly (no Godel ranks, no packing) and resolves each
// level over a board-keyed table.
class ReferenceSolver {
 public:
  explicit ReferenceSolver(const GameConfig& config);

  struct Entry {
    int value = 0;
    bool converged = false;  // bound iteration closed
    bool stable = false;     // value satisfies the negamax equation
  };

  void ensure_level(int n_seeds);
  const std::vector<Board>& boards(int n_seeds);
  Entry lookup(const Board& board);

 private:
  struct Level {
    bool done = false;
    std::vector<Board> boards;  // lexicographically sorted
    std::vector<Entry> entries;
  };
  std::size_t index_of(const Level& lvl, const Board& b) const;

  GameConfig config_;
  std::vector<Level> levels_;
};

}  // namespace ayo
