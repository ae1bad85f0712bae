#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "ayo/game.hpp"
#include "ayo/search.hpp"

namespace ayo {

// A board as seen by the mover (own row first), the move that was played
// (pit 0..5 relative to the mover) and the final capture differential of the
// game it came from.
struct Episode {
  std::array<int, 12> values{};
  int move_label = 0;
  int game_value = 0;
};

struct EpisodeLibrary {
  std::vector<Episode> episodes;
  std::array<std::vector<int>, 6> by_label;

  void add(const Episode& e);
  bool empty() const { return episodes.empty(); }
  std::size_t size() const { return episodes.size(); }
};

struct CbrConfig {
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.9;
};

struct SimilarityResult {
  double value = 0.0;
  bool degenerate = false;  // a constant vector, correlation undefined
};

SimilarityResult similarity_checked(const std::array<int, 12>& x,
                                    const std::array<int, 12>& y);

// Pearson product-moment correlation of the two pit vectors; 0 when either
// vector is constant.
double similarity(const Episode& x, const Episode& y);

struct Retrieved {
  const Episode* episode;
  double similarity;
};

// Episodes with similarity >= beta and game_value <= alpha, sorted by
// similarity descending, ties in insertion order.
std::vector<Retrieved> retrieve(const EpisodeLibrary& library,
                                const Episode& target, const CbrConfig& config);

struct PerceptronModel {
  // 6 one-vs-rest units, 12 inputs plus bias.
  std::array<std::array<double, 13>, 6> weights{};
  double learning_rate = 0.1;
  int epochs_trained = 0;
  int final_errors = 0;  // unit misfires in the last epoch

  double activation(int cls, const std::array<int, 12>& x) const;
};

PerceptronModel train_perceptron(const EpisodeLibrary& library, double rate,
                                 int epochs);

// Highest activation among the legal relative pits, ties by lowest class.
int classify(const PerceptronModel& model, const Episode& target,
             const std::vector<int>& legal);

// The board from the mover's viewpoint, own row first.
Episode episode_view(const GameState& state);

// Relative label <-> absolute pit for the given mover.
int relative_label(Move move, Side mover);
Move absolute_move(int label, Side mover);

// Retrieval first, perceptron fallback. Always legal.
Move casing_move(const GameState& state, const EpisodeLibrary& library,
                 const PerceptronModel& model, const CbrConfig& config);

struct HybridDecision {
  Move move;
  bool overridden = false;
  double similarity_used = 0.0;
};

// Alpha-beta move, replaced by the best retrieved legal case when they
// disagree.
HybridDecision hybrid_move(const GameState& state, int depth,
                           const EvalWeights& weights,
                           const EpisodeLibrary& library,
                           const CbrConfig& cbr_config,
                           const GameConfig& game_config = {});

// One episode per line: "<v1>,...,<v12>;<label>;<game_value>".
void save_library(const EpisodeLibrary& library, const std::string& path);
EpisodeLibrary load_library(const std::string& path);

void save_model(const PerceptronModel& model, const std::string& path);
PerceptronModel load_model(const std::string& path);

}  // namespace ayo
