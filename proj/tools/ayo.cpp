#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ayo/arena.hpp"
#include "ayo/cbr.hpp"
#include "ayo/endgame.hpp"
#include "ayo/game.hpp"
#include "ayo/notation.hpp"
#include "ayo/search.hpp"

namespace {

using namespace ayo;

void add_rule_flags(CLI::App* cmd, GameConfig& cfg, std::string& stalemate) {
  cmd->add_option("--seeds-per-pit", cfg.seeds_per_pit,
                  "Initial seeds in every pit");
  cmd->add_option("--stalemate", stalemate,
                  "Stalemate rule: cancelled | moverloses")
      ->check(CLI::IsMember({"cancelled", "moverloses"}));
  cmd->add_option("--repetition-limit", cfg.repetition_limit,
                  "Repetitions before the rows are split");
  cmd->add_option("--max-plies", cfg.max_plies,
                  "Ply cap before the rows are split");
}

GameConfig finish_rules(GameConfig cfg, const std::string& stalemate) {
  cfg.stalemate_rule = stalemate == "moverloses" ? StalemateRule::MoverLoses
                                                 : StalemateRule::Cancelled;
  cfg.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed on " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void render(const GameState& s) {
  std::ostringstream out;
  out << "      6   5   4   3   2   1\n";
  out << "  N ";
  for (int i = 11; i >= 6; --i) out << " [" << std::setw(2) << int(s.board.pits[i]) << "]";
  out << "  store " << s.captured_north << "\n";
  out << "  S ";
  for (int i = 0; i <= 5; ++i) out << " [" << std::setw(2) << int(s.board.pits[i]) << "]";
  out << "  store " << s.captured_south << "\n";
  out << "      1   2   3   4   5   6\n";
  std::cout << out.str();
}

void announce(const GameStatus& st) {
  switch (st.kind) {
    case StatusKind::WinSouth: std::cout << "South wins"; break;
    case StatusKind::WinNorth: std::cout << "North wins"; break;
    case StatusKind::Draw: std::cout << "Draw"; break;
    case StatusKind::SplitByRows:
      std::cout << "Endless circulation: rows split";
      break;
    case StatusKind::StalemateCancelled:
      std::cout << "Stalemate: game cancelled";
      break;
    case StatusKind::StalemateMoverLoses:
      std::cout << "Stalemate: stuck player loses";
      break;
    case StatusKind::Ongoing: std::cout << "Ongoing"; break;
  }
  std::cout << " (" << st.final_south << "-" << st.final_north << ")\n";
}

int cmd_play(const AgentSpec& opponent, const GameConfig& cfg, Side human,
             std::uint64_t seed) {
  GameState state = new_game(cfg);
  std::mt19937_64 rng(seed);
  for (;;) {
    GameStatus st = status(state, cfg);
    if (st.terminal()) {
      render(state);
      announce(st);
      return 0;
    }
    if (state.to_move == human) {
      render(state);
      std::cout << (human == Side::South ? "South" : "North")
                << " to move, pit (1-6): " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cout << "\n" << format_state(state) << "\n";
        return 0;
      }
      int pit;
      try {
        pit = std::stoi(line);
      } catch (const std::exception&) {
        std::cout << "illegal: enter a pit number 1-6\n";
        continue;
      }
      if (pit < 1 || pit > 6) {
        std::cout << "illegal: enter a pit number 1-6\n";
        continue;
      }
      Move m{(human == Side::South ? 0 : 6) + pit - 1};
      try {
        state = apply_move(state, m, cfg).next;
      } catch (const std::invalid_argument& e) {
        std::cout << "illegal: " << e.what() << "\n";
      }
    } else {
      auto legal = legal_moves(state);
      Move m = legal[0];
      switch (opponent.kind) {
        case AgentSpec::Kind::Random:
          m = legal[rng() % legal.size()];
          break;
        case AgentSpec::Kind::Minimax:
          m = *alphabeta(state, opponent.depth, opponent.weights, cfg).best_move;
          break;
        case AgentSpec::Kind::MinimaxCbr:
          m = hybrid_move(state, opponent.depth, opponent.weights,
                          *opponent.library, opponent.cbr, cfg)
                  .move;
          break;
        case AgentSpec::Kind::Casing:
          m = casing_move(state, *opponent.library, *opponent.model,
                          opponent.cbr);
          break;
        case AgentSpec::Kind::DbPerfect:
          m = state.board.total() <= opponent.db->max_seeds()
                  ? best_move_from_db(*opponent.db, state)
                  : *alphabeta(state, opponent.fallback_depth,
                               opponent.weights, cfg)
                         .best_move;
          break;
      }
      int shown = m.pit % 6 + 1;
      std::cout << opponent.name << " plays pit " << shown << "\n";
      state = apply_move(state, m, cfg).next;
    }
  }
}

int cmd_solve(int max_seeds, const std::string& out, int workers,
              const GameConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  SolveStats stats;
  EndgameDatabase db = solve(max_seeds, cfg, workers, &stats);
  save_db(db, out);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
  for (int n = 0; n <= max_seeds; ++n)
    std::cout << "level " << n << ": " << stats.level_counts[n] << " entries\n";
  std::cout << "stalemates " << stats.stalemate_entries << ", eternal "
            << stats.eternal_entries << ", unstable " << stats.unstable_entries
            << "\n";
  std::cout << "wrote " << out << " in " << std::fixed << std::setprecision(2)
            << dt.count() << "s\n";
  return 0;
}

int cmd_probe(const std::string& db_path, const std::string& notation) {
  EndgameDatabase db = load_db(db_path);
  GameState state = parse_state(notation);
  std::cout << "value " << probe(db, state) << "\n";
  struct Line {
    Move m;
    int backed;
    int captured;
  };
  std::vector<Line> lines;
  for (Move m : legal_moves(state)) {
    MoveOutcome out = apply_move(state, m, GameConfig{});
    lines.push_back({m, out.captured_now - probe(db, out.next), out.captured_now});
  }
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.backed != b.backed) return a.backed > b.backed;
    return a.captured > b.captured;
  });
  for (const Line& l : lines)
    std::cout << "  pit " << l.m.pit % 6 + 1 << " -> " << l.backed
              << " (captures " << l.captured << ")\n";
  if (!lines.empty()) {
    Move best = best_move_from_db(db, state);
    std::cout << "best move: pit " << best.pit % 6 + 1 << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& db_path, int exhaustive_level,
               std::uint64_t samples, std::uint64_t seed,
               const GameConfig& cfg) {
  EndgameDatabase db = load_db(db_path);
  VerifyMode mode = samples > 0 ? VerifyMode::Sampled(samples, seed)
                                : VerifyMode::Exhaustive(exhaustive_level);
  VerifyReport report = verify(db, mode, cfg);
  std::cout << report.summary() << "\n";
  for (const auto& d : report.details) std::cout << "  " << d << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_tourney(const std::string& roster_path, int games, std::uint64_t seed,
                const std::string& out_dir, const GameConfig& cfg) {
  std::ifstream in(roster_path);
  if (!in) throw std::runtime_error("cannot read roster " + roster_path);
  std::vector<AgentSpec> roster;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    roster.push_back(parse_agent_spec(line));
  }
  if (roster.size() < 2)
    throw std::runtime_error("roster needs at least two agents");

  std::filesystem::create_directories(out_dir);
  MatchOptions options;
  options.opening_plies = 2;

  std::vector<MatchRow> pairings;
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < roster.size(); ++i)
    for (std::size_t j = i + 1; j < roster.size(); ++j) {
      MatchRow row;
      row.level = "PAIRING";
      row.player_a = roster[i].name;
      row.player_b = roster[j].name;
      row.stats = run_match(roster[i], roster[j], games, cfg, s, true, options);
      pairings.push_back(std::move(row));
      s += 7919;
    }

  std::vector<CapabilityRow> caps;
  std::vector<MatchRow> ladders;
  for (const AgentSpec& agent : roster) {
    auto ladder = levels_ladder(agent, games, cfg, s, options);
    caps.push_back(capability_from_ladder(agent, ladder));
    for (auto& r : ladder) ladders.push_back(std::move(r));
    s += 7919;
  }

  auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_text(path("pairings.csv"), report(pairings, ReportFormat::Csv));
  write_text(path("pairings.md"), report(pairings, ReportFormat::Markdown));
  write_text(path("ladder.csv"), report(ladders, ReportFormat::Csv));
  write_text(path("ladder.md"), report(ladders, ReportFormat::Markdown));
  write_text(path("capability.csv"), report(caps, ReportFormat::Csv));
  write_text(path("capability.md"), report(caps, ReportFormat::Markdown));
  std::cout << "wrote reports to " << out_dir << "\n";
  return 0;
}

int cmd_train(int games, const std::string& out_library,
              const std::string& out_model, std::uint64_t seed, int depth,
              double rate, int epochs, const GameConfig& cfg) {
  if (games < 1) throw std::runtime_error("train needs at least one game");
  AgentSpec a = AgentSpec::minimax_agent(depth);
  AgentSpec b = AgentSpec::minimax_agent(depth);
  MatchOptions options;
  options.opening_plies = 2;
  std::vector<GameRecord> records;
  for (int i = 0; i < games; ++i)
    records.push_back(play_game(a, b, cfg, seed + i, options));
  EpisodeLibrary lib = harvest_episodes(records, /*winner_only=*/true);
  if (lib.empty())
    throw std::runtime_error("no decisive games: empty episode library");
  PerceptronModel model = train_perceptron(lib, rate, epochs);
  save_library(lib, out_library);
  save_model(model, out_model);
  std::cout << "library: " << lib.size() << " episodes from " << games
            << " games\n";
  std::cout << "perceptron: " << model.epochs_trained << " epochs, "
            << model.final_errors << " errors in the last epoch\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Awale game-search workbench"};
  app.require_subcommand(1);

  GameConfig cfg;
  std::string stalemate = "cancelled";

  auto* play = app.add_subcommand("play", "Play against an agent");
  std::string opponent_spec = "minimax:4";
  std::string human_side = "S";
  std::uint64_t play_seed = 0;
  play->add_option("--opponent", opponent_spec, "Agent spec");
  play->add_option("--side", human_side, "Human side: S | N")
      ->check(CLI::IsMember({"S", "N"}));
  play->add_option("--seed", play_seed, "Seed for random opponents");
  add_rule_flags(play, cfg, stalemate);

  auto* solve_cmd = app.add_subcommand("solve", "Build an endgame database");
  int max_seeds = 0, workers = 1;
  std::string out_path;
  solve_cmd->add_option("--max-seeds", max_seeds, "Top seed level")->required();
  solve_cmd->add_option("--out", out_path, "Output file")->required();
  solve_cmd->add_option("--workers", workers, "Worker threads");
  add_rule_flags(solve_cmd, cfg, stalemate);

  auto* probe_cmd = app.add_subcommand("probe", "Look up a position");
  std::string db_path, state_text;
  probe_cmd->add_option("--db", db_path, "Database file")->required();
  probe_cmd->add_option("--state", state_text, "Position notation")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Cross-check a database");
  int exhaustive_level = 4;
  std::uint64_t samples = 0, verify_seed = 0;
  verify_cmd->add_option("--db", db_path, "Database file")->required();
  auto* exh = verify_cmd->add_option("--exhaustive", exhaustive_level,
                                     "Check every entry up to this level");
  verify_cmd->add_option("--sample", samples, "Check K random entries")
      ->excludes(exh);
  verify_cmd->add_option("--seed", verify_seed, "Sampling seed");
  add_rule_flags(verify_cmd, cfg, stalemate);

  auto* tourney_cmd = app.add_subcommand("tourney", "Round robin plus ladders");
  std::string roster_path, out_dir;
  int games = 10;
  std::uint64_t seed = 0;
  tourney_cmd->add_option("--roster", roster_path, "Agent specs, one per line")
      ->required();
  tourney_cmd->add_option("--games", games, "Games per pairing and level");
  tourney_cmd->add_option("--seed", seed, "Base seed");
  tourney_cmd->add_option("--out", out_dir, "Report directory")->required();
  add_rule_flags(tourney_cmd, cfg, stalemate);

  auto* train_cmd = app.add_subcommand("train", "Self-play harvest + perceptron");
  std::string out_library, out_model;
  int train_depth = 3, epochs = 50;
  double rate = 0.1;
  train_cmd->add_option("--games", games, "Self-play games")->required();
  train_cmd->add_option("--out-library", out_library, "Episode library file")
      ->required();
  train_cmd->add_option("--out-model", out_model, "Perceptron file")->required();
  train_cmd->add_option("--seed", seed, "Base seed");
  train_cmd->add_option("--depth", train_depth, "Self-play search depth");
  train_cmd->add_option("--rate", rate, "Perceptron learning rate");
  train_cmd->add_option("--epochs", epochs, "Perceptron epochs");
  add_rule_flags(train_cmd, cfg, stalemate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    GameConfig rules = finish_rules(cfg, stalemate);
    if (play->parsed())
      return cmd_play(parse_agent_spec(opponent_spec), rules,
                      human_side == "N" ? Side::North : Side::South, play_seed);
    if (solve_cmd->parsed()) return cmd_solve(max_seeds, out_path, workers, rules);
    if (probe_cmd->parsed()) return cmd_probe(db_path, state_text);
    if (verify_cmd->parsed())
      return cmd_verify(db_path, exhaustive_level, samples, verify_seed, rules);
    if (tourney_cmd->parsed())
      return cmd_tourney(roster_path, games, seed, out_dir, rules);
    if (train_cmd->parsed())
      return cmd_train(games, out_library, out_model, seed, train_depth, rate,
                       epochs, rules);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
