#include "ayo/search.hpp"

#include <algorithm>
#include <limits>

namespace ayo {

namespace {

double terminal_value(const GameState& state, const GameStatus& st) {
  double diff = st.final_south - st.final_north;
  if (state.to_move == Side::North) diff = -diff;
  switch (st.kind) {
    case StatusKind::Draw:
    case StatusKind::StalemateCancelled:
      return 0.0;
    case StatusKind::StalemateMoverLoses:
      return std::min(diff * kTerminalScale, -kTerminalScale);
    default:
      return diff * kTerminalScale;
  }
}

}  // namespace

double evaluate(const GameState& state, const EvalWeights& weights,
                const GameConfig& config) {
  GameStatus st = status(state, config);
  if (st.terminal()) return terminal_value(state, st);

  Side me = state.to_move;
  Side opp = opponent_of(me);

  double f0 = state.captured(me) - state.captured(opp);
  double f1 = state.board.row_sum(me) - state.board.row_sum(opp);

  int opp_base = opp == Side::South ? 0 : 6;
  int vulnerable = 0;
  for (int i = opp_base; i < opp_base + 6; ++i)
    if (state.board.pits[i] == 2 || state.board.pits[i] == 3) ++vulnerable;

  GameState flipped = state;
  flipped.to_move = opp;
  double f3 = double(legal_moves(state).size()) -
              double(legal_moves(flipped).size());

  return weights.w[0] * f0 + weights.w[1] * f1 + weights.w[2] * vulnerable +
         weights.w[3] * f3;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double negamax_rec(const GameState& s, int depth, const EvalWeights& w,
                   const GameConfig& cfg, std::uint64_t& nodes) {
  ++nodes;
  if (depth == 0 || status(s, cfg).terminal()) return evaluate(s, w, cfg);
  double best = -kInf;
  for (Move m : legal_moves(s)) {
    double v = -negamax_rec(apply_move(s, m, cfg).next, depth - 1, w, cfg, nodes);
    if (v > best) best = v;
  }
  return best;
}

double alphabeta_rec(const GameState& s, int depth, double alpha, double beta,
                     const EvalWeights& w, const GameConfig& cfg,
                     std::uint64_t& nodes) {
  ++nodes;
  if (depth == 0 || status(s, cfg).terminal()) return evaluate(s, w, cfg);
  double best = -kInf;
  for (Move m : legal_moves(s)) {
    double v = -alphabeta_rec(apply_move(s, m, cfg).next, depth - 1, -beta,
                              -alpha, w, cfg, nodes);
    if (v > best) best = v;
    if (v > alpha) alpha = v;
    if (alpha >= beta) break;
  }
  return best;
}

}  // namespace

SearchResult minimax(const GameState& state, int depth,
                     const EvalWeights& weights, const GameConfig& config) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  SearchResult r;
  r.depth = depth;
  ++r.nodes;
  if (depth == 0 || status(state, config).terminal()) {
    r.value = evaluate(state, weights, config);
    return r;
  }
  double best = -kInf;
  for (Move m : legal_moves(state)) {
    double v = -negamax_rec(apply_move(state, m, config).next, depth - 1,
                            weights, config, r.nodes);
    if (v > best) {
      best = v;
      r.best_move = m;
    }
  }
  r.value = best;
  return r;
}

SearchResult alphabeta(const GameState& state, int depth,
                       const EvalWeights& weights, const GameConfig& config) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  SearchResult r;
  r.depth = depth;
  ++r.nodes;
  if (depth == 0 || status(state, config).terminal()) {
    r.value = evaluate(state, weights, config);
    return r;
  }
  double alpha = -kInf;
  double best = -kInf;
  for (Move m : legal_moves(state)) {
    double v = -alphabeta_rec(apply_move(state, m, config).next, depth - 1,
                              -kInf, -alpha, weights, config, r.nodes);
    if (v > best) best = v;
    if (v > alpha) {
      alpha = v;
      r.best_move = m;
    }
  }
  r.value = best;
  return r;
}

namespace {

constexpr std::size_t kEnumerationCap = 100000;

double tree_minimax(const ExplicitTree& t) {
  switch (t.kind) {
    case ExplicitTree::Kind::Leaf:
      return t.value;
    case ExplicitTree::Kind::MaxNode: {
      if (t.children.empty()) throw std::invalid_argument("max node without children");
      double v = -kInf;
      for (const auto& c : t.children) v = std::max(v, tree_minimax(c));
      return v;
    }
    case ExplicitTree::Kind::MinNode: {
      if (t.children.empty()) throw std::invalid_argument("min node without children");
      double v = kInf;
      for (const auto& c : t.children) v = std::min(v, tree_minimax(c));
      return v;
    }
  }
  return 0.0;
}

// g values of all min (pick_at_max == true) or max solution trees.
std::vector<double> solution_g_values(const ExplicitTree& t, bool pick_at_max) {
  if (t.kind == ExplicitTree::Kind::Leaf) return {t.value};
  bool pick_here = (t.kind == ExplicitTree::Kind::MaxNode) == pick_at_max;
  if (pick_here) {
    // one child chosen: union of the children's enumerations
    std::vector<double> out;
    for (const auto& c : t.children) {
      auto sub = solution_g_values(c, pick_at_max);
      out.insert(out.end(), sub.begin(), sub.end());
      if (out.size() > kEnumerationCap)
        throw std::length_error("solution tree enumeration too large");
    }
    return out;
  }
  // all children kept: cartesian product, g folds with min (min trees) or
  // max (max trees) over the chosen subtrees' leaves
  std::vector<double> acc{pick_at_max ? kInf : -kInf};
  for (const auto& c : t.children) {
    auto sub = solution_g_values(c, pick_at_max);
    std::vector<double> next;
    next.reserve(acc.size() * sub.size());
    for (double a : acc)
      for (double b : sub)
        next.push_back(pick_at_max ? std::min(a, b) : std::max(a, b));
    if (next.size() > kEnumerationCap)
      throw std::length_error("solution tree enumeration too large");
    acc = std::move(next);
  }
  return acc;
}

std::uint64_t count_solution_trees(const ExplicitTree& t, bool pick_at_max) {
  if (t.kind == ExplicitTree::Kind::Leaf) return 1;
  bool pick_here = (t.kind == ExplicitTree::Kind::MaxNode) == pick_at_max;
  std::uint64_t n = pick_here ? 0 : 1;
  for (const auto& c : t.children) {
    std::uint64_t s = count_solution_trees(c, pick_at_max);
    if (pick_here)
      n += s;
    else
      n *= s;
    if (n > (1ull << 62)) return 1ull << 62;
  }
  return n;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> solution_tree_counts(
    const ExplicitTree& tree) {
  return {count_solution_trees(tree, true), count_solution_trees(tree, false)};
}

StockmanTriple solution_tree_check(const ExplicitTree& tree) {
  StockmanTriple out;
  out.f = tree_minimax(tree);
  auto min_trees = solution_g_values(tree, /*pick_at_max=*/true);
  auto max_trees = solution_g_values(tree, /*pick_at_max=*/false);
  out.max_over_min_trees = *std::max_element(min_trees.begin(), min_trees.end());
  out.min_over_max_trees = *std::min_element(max_trees.begin(), max_trees.end());
  return out;
}

}  // namespace ayo
