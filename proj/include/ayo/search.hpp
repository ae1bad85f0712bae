#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ayo/game.hpp"

namespace ayo {

// Linear evaluation over four board features, all from the mover's point of
// view: store differential, row seed differential, opponent pits holding 2 or
// 3, mobility differential.
struct EvalWeights {
  std::array<double, 4> w{10.0, 1.0, 2.0, 1.0};
};

inline constexpr double kTerminalScale = 1000.0;

struct SearchResult {
  double value = 0.0;
  std::optional<Move> best_move;
  std::uint64_t nodes = 0;
  int depth = 0;
};

double evaluate(const GameState& state, const EvalWeights& weights,
                const GameConfig& config = {});

// Plain fixed-depth negamax, no pruning. Ties broken by lowest pit index.
SearchResult minimax(const GameState& state, int depth,
                     const EvalWeights& weights, const GameConfig& config = {});

// Same value and same best move as minimax, fewer nodes.
SearchResult alphabeta(const GameState& state, int depth,
                       const EvalWeights& weights,
                       const GameConfig& config = {});

struct ExplicitTree {
  enum class Kind { MaxNode, MinNode, Leaf };
  Kind kind = Kind::Leaf;
  double value = 0.0;  // leaves only
  std::vector<ExplicitTree> children;

  static ExplicitTree leaf(double v) { return {Kind::Leaf, v, {}}; }
  static ExplicitTree max_node(std::vector<ExplicitTree> c) {
    return {Kind::MaxNode, 0.0, std::move(c)};
  }
  static ExplicitTree min_node(std::vector<ExplicitTree> c) {
    return {Kind::MinNode, 0.0, std::move(c)};
  }
};

struct StockmanTriple {
  double f = 0.0;
  double max_over_min_trees = 0.0;
  double min_over_max_trees = 0.0;
};

// Enumerates every solution tree of the explicit tree. A min solution tree
// keeps all children at min nodes and picks one child at max nodes (its g is
// the minimum over its leaves); max solution trees are the dual. Throws
// std::length_error when the enumeration exceeds the feasibility cap.
StockmanTriple solution_tree_check(const ExplicitTree& tree);

// Number of min / max solution trees, for sizing checks.
std::pair<std::uint64_t, std::uint64_t> solution_tree_counts(
    const ExplicitTree& tree);

}  // namespace ayo
