#include "ayo/arena.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

namespace ayo {

AgentSpec AgentSpec::random_agent(std::uint64_t seed) {
  AgentSpec s;
  s.kind = Kind::Random;
  s.seed = seed;
  s.name = "random:" + std::to_string(seed);
  return s;
}

AgentSpec AgentSpec::minimax_agent(int depth, EvalWeights weights) {
  AgentSpec s;
  s.kind = Kind::Minimax;
  s.depth = depth;
  s.weights = weights;
  s.name = "minimax:" + std::to_string(depth);
  return s;
}

AgentSpec AgentSpec::minimax_cbr_agent(int depth,
                                       std::shared_ptr<const EpisodeLibrary> lib,
                                       CbrConfig cbr, EvalWeights weights) {
  AgentSpec s;
  s.kind = Kind::MinimaxCbr;
  s.depth = depth;
  s.weights = weights;
  s.library = std::move(lib);
  s.cbr = cbr;
  s.name = "minimaxcbr:" + std::to_string(depth);
  return s;
}

AgentSpec AgentSpec::casing_agent(std::shared_ptr<const EpisodeLibrary> lib,
                                  std::shared_ptr<const PerceptronModel> model,
                                  CbrConfig cbr) {
  AgentSpec s;
  s.kind = Kind::Casing;
  s.library = std::move(lib);
  s.model = std::move(model);
  s.cbr = cbr;
  s.name = "casing";
  return s;
}

AgentSpec AgentSpec::db_agent(std::shared_ptr<const EndgameDatabase> db,
                              int fallback_depth) {
  AgentSpec s;
  s.kind = Kind::DbPerfect;
  s.db = std::move(db);
  s.fallback_depth = fallback_depth;
  s.name = "db";
  return s;
}

AgentSpec parse_agent_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw std::invalid_argument("empty agent spec");
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size())
      throw std::invalid_argument("agent spec '" + text + "' is missing fields");
    return parts[i];
  };
  if (kind == "random")
    return AgentSpec::random_agent(parts.size() > 1 ? std::stoull(arg(1)) : 0);
  if (kind == "minimax") return AgentSpec::minimax_agent(std::stoi(arg(1)));
  if (kind == "minimaxcbr") {
    auto lib = std::make_shared<EpisodeLibrary>(load_library(arg(2)));
    CbrConfig cbr;
    if (parts.size() > 3) cbr.beta = std::stod(parts[3]);
    return AgentSpec::minimax_cbr_agent(std::stoi(arg(1)), lib, cbr);
  }
  if (kind == "casing") {
    auto lib = std::make_shared<EpisodeLibrary>(load_library(arg(1)));
    auto model = std::make_shared<PerceptronModel>(load_model(arg(2)));
    CbrConfig cbr;
    if (parts.size() > 3) cbr.beta = std::stod(parts[3]);
    return AgentSpec::casing_agent(lib, model, cbr);
  }
  if (kind == "db") {
    auto db = std::make_shared<EndgameDatabase>(load_db(arg(1)));
    int fallback = parts.size() > 2 ? std::stoi(parts[2]) : 4;
    return AgentSpec::db_agent(db, fallback);
  }
  throw std::invalid_argument("unknown agent kind '" + kind + "'");
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ull + b + 0x2545f4914f6cdd1dull;
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  return x;
}

Move choose_move(const AgentSpec& spec, const GameState& state,
                 const GameConfig& cfg, std::mt19937_64& rng,
                 bool& overridden) {
  overridden = false;
  switch (spec.kind) {
    case AgentSpec::Kind::Random: {
      auto legal = legal_moves(state);
      return legal[rng() % legal.size()];
    }
    case AgentSpec::Kind::Minimax: {
      auto r = alphabeta(state, spec.depth, spec.weights, cfg);
      return *r.best_move;
    }
    case AgentSpec::Kind::MinimaxCbr: {
      auto d = hybrid_move(state, spec.depth, spec.weights, *spec.library,
                           spec.cbr, cfg);
      overridden = d.overridden;
      return d.move;
    }
    case AgentSpec::Kind::Casing:
      return casing_move(state, *spec.library, *spec.model, spec.cbr);
    case AgentSpec::Kind::DbPerfect:
      if (state.board.total() <= spec.db->max_seeds())
        return best_move_from_db(*spec.db, state);
      return *alphabeta(state, spec.fallback_depth, spec.weights, cfg).best_move;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

GameRecord play_game(const AgentSpec& a, const AgentSpec& b,
                     const GameConfig& config, std::uint64_t rng_seed,
                     const MatchOptions& options) {
  config.validate();
  GameRecord rec;
  rec.config = config;
  GameState state = options.start ? *options.start : new_game(config);

  std::mt19937_64 opening_rng(mix(rng_seed, 0));
  std::mt19937_64 rng_south(mix(rng_seed, 1 + a.seed));
  std::mt19937_64 rng_north(mix(rng_seed, 2 + b.seed));

  int opening_left = options.opening_plies;
  for (;;) {
    GameStatus st = status(state, config);
    if (st.terminal()) {
      rec.result = st;
      break;
    }
    Move m{};
    bool overridden = false;
    auto legal = legal_moves(state);
    if (opening_left > 0) {
      m = legal[opening_rng() % legal.size()];
      --opening_left;
    } else {
      const AgentSpec& spec = state.to_move == Side::South ? a : b;
      auto& rng = state.to_move == Side::South ? rng_south : rng_north;
      m = choose_move(spec, state, config, rng, overridden);
    }
    if (std::find(legal.begin(), legal.end(), m) == legal.end()) {
      rec.forfeit_by = state.to_move;
      rec.result = status(state, config);
      rec.result.winner = opponent_of(state.to_move);
      break;
    }
    rec.moves.emplace_back(state, m);
    if (overridden) {
      if (state.to_move == Side::South)
        ++rec.overrides.first;
      else
        ++rec.overrides.second;
    }
    state = apply_move(state, m, config).next;
  }
  rec.captures = {rec.result.final_south, rec.result.final_north};
  rec.ply_count = state.ply;
  return rec;
}

namespace {

struct Accum {
  std::vector<double> v;
  void add(double x) { v.push_back(x); }
  double mean() const {
    if (v.empty()) return 0;
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
  }
  double stddev() const {  // sample convention, 0 for a single game
    if (v.size() < 2) return 0;
    double m = mean(), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1));
  }
};

}  // namespace

MatchStats run_match(const AgentSpec& a, const AgentSpec& b, int games,
                     const GameConfig& config, std::uint64_t base_seed,
                     bool swap_sides, const MatchOptions& options) {
  if (games < 1) throw std::invalid_argument("games must be >= 1");
  std::vector<GameRecord> records(games);
  std::vector<bool> a_is_south(games);

  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      bool south_a = !(swap_sides && i % 2 == 1);
      a_is_south[i] = south_a;
      records[i] = south_a
                       ? play_game(a, b, config, base_seed + i, options)
                       : play_game(b, a, config, base_seed + i, options);
    }
  };
  if (options.threads <= 1) {
    run_range(0, games);
  } else {
    std::vector<std::thread> pool;
    int chunk = (games + options.threads - 1) / options.threads;
    for (int w = 0; w < options.threads; ++w) {
      int lo = std::min(w * chunk, games);
      int hi = std::min(lo + chunk, games);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  MatchStats st;
  st.games = games;
  Accum plies, caps_a, caps_b, ov_a, ov_b;
  for (int i = 0; i < games; ++i) {
    const GameRecord& r = records[i];
    Side side_a = a_is_south[i] ? Side::South : Side::North;
    plies.add(r.ply_count);
    int ca = side_a == Side::South ? r.captures.first : r.captures.second;
    int cb = side_a == Side::South ? r.captures.second : r.captures.first;
    caps_a.add(ca);
    caps_b.add(cb);
    ov_a.add(side_a == Side::South ? r.overrides.first : r.overrides.second);
    ov_b.add(side_a == Side::South ? r.overrides.second : r.overrides.first);
    if (!r.result.winner)
      ++st.draws;
    else if (*r.result.winner == side_a)
      ++st.wins_a;
    else
      ++st.wins_b;
  }
  st.mean_plies = plies.mean();
  st.std_plies = plies.stddev();
  st.mean_caps_a = caps_a.mean();
  st.std_caps_a = caps_a.stddev();
  st.mean_caps_b = caps_b.mean();
  st.std_caps_b = caps_b.stddev();
  st.mean_overrides_a = ov_a.mean();
  st.std_overrides_a = ov_a.stddev();
  st.mean_overrides_b = ov_b.mean();
  st.std_overrides_b = ov_b.stddev();
  return st;
}

std::vector<MatchRow> levels_ladder(const AgentSpec& agent, int games_per_level,
                                    const GameConfig& config,
                                    std::uint64_t base_seed,
                                    const MatchOptions& options) {
  const std::pair<std::string, AgentSpec> levels[] = {
      {"INITIATION", AgentSpec::random_agent(7)},
      {"BEGINNER", AgentSpec::minimax_agent(1)},
      {"AMATEUR", AgentSpec::minimax_agent(3)},
      {"GRANDMASTER", AgentSpec::minimax_agent(5)},
  };
  std::vector<MatchRow> rows;
  std::uint64_t seed = base_seed;
  for (const auto& [name, opp] : levels) {
    MatchRow row;
    row.level = name;
    row.player_a = agent.name;
    row.player_b = opp.name;
    row.stats = run_match(agent, opp, games_per_level, config, seed,
                          /*swap_sides=*/true, options);
    rows.push_back(std::move(row));
    seed += 1000003;
  }
  return rows;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// The tables' mean(std) cell convention.
std::string cell(double mean, double std) {
  return fixed2(mean) + "(" + fixed2(std) + ")";
}

}  // namespace

std::string report(const std::vector<MatchRow>& rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "level,player_a,player_b,games,wins_a,draws,wins_b,avg_plies,"
           "std_plies,avg_caps_a,std_caps_a,avg_caps_b,std_caps_b,"
           "avg_overrides_a,std_overrides_a\n";
    for (const auto& r : rows) {
      const MatchStats& s = r.stats;
      out << r.level << ',' << r.player_a << ',' << r.player_b << ','
          << s.games << ',' << s.wins_a << ',' << s.draws << ',' << s.wins_b
          << ',' << fixed2(s.mean_plies) << ',' << fixed2(s.std_plies) << ','
          << fixed2(s.mean_caps_a) << ',' << fixed2(s.std_caps_a) << ','
          << fixed2(s.mean_caps_b) << ',' << fixed2(s.std_caps_b) << ','
          << fixed2(s.mean_overrides_a) << ',' << fixed2(s.std_overrides_a)
          << '\n';
    }
    return out.str();
  }
  out << "| LEVEL | PLAYER A | PLAYER B | GAMES | W/D/L | MOVES(STD) | "
         "CAPS A(STD) | CAPS B(STD) | OVERRIDES(STD) |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    const MatchStats& s = r.stats;
    out << "| " << r.level << " | " << r.player_a << " | " << r.player_b
        << " | " << s.games << " | " << s.wins_a << '/' << s.draws << '/'
        << s.wins_b << " | " << cell(s.mean_plies, s.std_plies) << " | "
        << cell(s.mean_caps_a, s.std_caps_a) << " | "
        << cell(s.mean_caps_b, s.std_caps_b) << " | "
        << cell(s.mean_overrides_a, s.std_overrides_a) << " |\n";
  }
  return out.str();
}

std::string report(const std::vector<CapabilityRow>& rows,
                   ReportFormat format) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "agent,uses_minimax,uses_endgame,initiation,beginner,amateur,"
           "grandmaster\n";
    for (const auto& r : rows) {
      out << r.agent << ',' << yn(r.uses_minimax) << ',' << yn(r.uses_endgame);
      for (bool ok : r.level_ok) out << ',' << yn(ok);
      out << '\n';
    }
    return out.str();
  }
  out << "| METHOD | MINIMAX | ENDGAME | INITIATION | BEGINNER | AMATEUR | "
         "GRANDMASTER |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.agent << " | " << yn(r.uses_minimax) << " | "
        << yn(r.uses_endgame);
    for (bool ok : r.level_ok) out << " | " << yn(ok);
    out << " |\n";
  }
  return out.str();
}

CapabilityRow capability_from_ladder(const AgentSpec& agent,
                                     const std::vector<MatchRow>& ladder) {
  CapabilityRow row;
  row.agent = agent.name;
  row.uses_minimax = agent.kind == AgentSpec::Kind::Minimax ||
                     agent.kind == AgentSpec::Kind::MinimaxCbr;
  row.uses_endgame = agent.kind == AgentSpec::Kind::DbPerfect;
  for (std::size_t i = 0; i < ladder.size() && i < 4; ++i) {
    const MatchStats& s = ladder[i].stats;
    row.level_ok[i] = 2 * s.wins_a + s.draws >= s.games;
  }
  return row;
}

EpisodeLibrary harvest_episodes(const std::vector<GameRecord>& games,
                                bool winner_only) {
  EpisodeLibrary lib;
  for (const GameRecord& rec : games) {
    int diff_south = rec.result.final_south - rec.result.final_north;
    for (const auto& [state, move] : rec.moves) {
      Side mover = state.to_move;
      if (winner_only &&
          (!rec.result.winner || *rec.result.winner != mover))
        continue;
      Episode e = episode_view(state);
      e.move_label = relative_label(move, mover);
      e.game_value = mover == Side::South ? diff_south : -diff_south;
      lib.add(e);
    }
  }
  return lib;
}

}  // namespace ayo
