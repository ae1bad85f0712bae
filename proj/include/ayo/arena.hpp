#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ayo/cbr.hpp"
#include "ayo/endgame.hpp"
#include "ayo/game.hpp"
#include "ayo/search.hpp"

namespace ayo {

struct AgentSpec {
  enum class Kind { Random, Minimax, MinimaxCbr, Casing, DbPerfect };
  Kind kind = Kind::Random;
  std::string name = "random";

  std::uint64_t seed = 0;  // Random
  int depth = 1;           // Minimax, MinimaxCbr
  EvalWeights weights;
  std::shared_ptr<const EpisodeLibrary> library;  // MinimaxCbr, Casing
  std::shared_ptr<const PerceptronModel> model;   // Casing
  CbrConfig cbr;
  std::shared_ptr<const EndgameDatabase> db;  // DbPerfect
  int fallback_depth = 4;                     // DbPerfect above the DB bound

  static AgentSpec random_agent(std::uint64_t seed = 0);
  static AgentSpec minimax_agent(int depth, EvalWeights weights = {});
  static AgentSpec minimax_cbr_agent(int depth,
                                     std::shared_ptr<const EpisodeLibrary> lib,
                                     CbrConfig cbr = {},
                                     EvalWeights weights = {});
  static AgentSpec casing_agent(std::shared_ptr<const EpisodeLibrary> lib,
                                std::shared_ptr<const PerceptronModel> model,
                                CbrConfig cbr = {});
  static AgentSpec db_agent(std::shared_ptr<const EndgameDatabase> db,
                            int fallback_depth = 4);
};

// "random[:seed]", "minimax:DEPTH", "minimaxcbr:DEPTH:LIB[:beta]",
// "casing:LIB:MODEL[:beta]", "db:FILE[:fallback_depth]"
AgentSpec parse_agent_spec(const std::string& text);

struct GameRecord {
  GameConfig config;
  std::vector<std::pair<GameState, Move>> moves;  // state before each move
  GameStatus result;
  std::pair<int, int> captures{0, 0};   // final, south then north
  std::pair<int, int> overrides{0, 0};  // south then north
  int ply_count = 0;
  std::optional<Side> forfeit_by;  // agent returned an illegal move
};

struct MatchOptions {
  int opening_plies = 0;  // random plies before the agents take over
  int threads = 1;
  std::optional<GameState> start;  // defaults to new_game(config)
};

// `a` plays South, `b` plays North.
GameRecord play_game(const AgentSpec& a, const AgentSpec& b,
                     const GameConfig& config, std::uint64_t rng_seed,
                     const MatchOptions& options = {});

struct MatchStats {
  int games = 0;
  int wins_a = 0, draws = 0, wins_b = 0;
  double mean_plies = 0, std_plies = 0;
  double mean_caps_a = 0, std_caps_a = 0;
  double mean_caps_b = 0, std_caps_b = 0;
  double mean_overrides_a = 0, std_overrides_a = 0;
  double mean_overrides_b = 0, std_overrides_b = 0;
};

MatchStats run_match(const AgentSpec& a, const AgentSpec& b, int games,
                     const GameConfig& config, std::uint64_t base_seed,
                     bool swap_sides, const MatchOptions& options = {});

struct MatchRow {
  std::string level;
  std::string player_a;
  std::string player_b;
  MatchStats stats;
};

// Proxy levels: Initiation = random, Beginner = minimax(1), Amateur =
// minimax(3), Grandmaster = minimax(5).
std::vector<MatchRow> levels_ladder(const AgentSpec& agent, int games_per_level,
                                    const GameConfig& config = {},
                                    std::uint64_t base_seed = 0,
                                    const MatchOptions& options = {});

enum class ReportFormat { Csv, Markdown };

std::string report(const std::vector<MatchRow>& rows, ReportFormat format);

struct CapabilityRow {
  std::string agent;
  bool uses_minimax = false;
  bool uses_endgame = false;
  std::array<bool, 4> level_ok{};  // initiation..grandmaster
};

std::string report(const std::vector<CapabilityRow>& rows, ReportFormat format);

// Capability matrix built from a ladder run; a level counts as passed when
// the agent scores at least half the points.
CapabilityRow capability_from_ladder(const AgentSpec& agent,
                                     const std::vector<MatchRow>& ladder);

EpisodeLibrary harvest_episodes(const std::vector<GameRecord>& games,
                                bool winner_only);

}  // namespace ayo
