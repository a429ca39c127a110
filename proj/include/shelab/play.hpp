#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shelab/io.hpp"
#include "shelab/solver.hpp"

namespace shelab {

struct PlayStep {
  AisMove move;
  std::string ais_by;  // "human" | "engine"
  State state;         // ISO's chosen successor
  std::string iso_by;
};

struct PlayTranscript {
  std::string left;
  std::string right;
  GameConfig config;
  std::string human_role;  // "ais" | "iso" | "none"
  bool initial_valid = true;
  std::vector<PlayStep> steps;
  std::optional<AisMove> unanswered;  // final AIS move ISO could not answer
  std::string unanswered_by;
  Player winner = Player::iso;
};

inline json to_json(const Game& game, const PlayTranscript& t) {
  json steps = json::array();
  for (const auto& st : t.steps)
    steps.push_back(json{{"ais_move", move_to_json(game, st.move)},
                         {"ais_by", st.ais_by},
                         {"state", state_to_json(game, st.state)},
                         {"iso_by", st.iso_by}});
  json out{{"left", t.left},
           {"right", t.right},
           {"config", to_json(NamedConfig{"play", t.config})},
           {"human_role", t.human_role},
           {"initial_valid", t.initial_valid},
           {"steps", steps},
           {"winner", to_string(t.winner)}};
  if (t.unanswered)
    out["unanswered"] = json{{"ais_move", move_to_json(game, *t.unanswered)},
                             {"ais_by", t.unanswered_by}};
  return out;
}

inline PlayTranscript transcript_from_json(const Game& game, const json& j) {
  PlayTranscript t;
  try {
    t.left = j.at("left").get<std::string>();
    t.right = j.at("right").get<std::string>();
    t.config = config_from_json(j.at("config")).config;
    t.human_role = j.value("human_role", std::string("none"));
    t.initial_valid = j.at("initial_valid").get<bool>();
    for (const auto& st : j.at("steps"))
      t.steps.push_back(PlayStep{move_from_json(game, st.at("ais_move")),
                                 st.value("ais_by", std::string("engine")),
                                 state_from_json(game, st.at("state")),
                                 st.value("iso_by", std::string("engine"))});
    if (j.contains("unanswered")) {
      t.unanswered = move_from_json(game, j.at("unanswered").at("ais_move"));
      t.unanswered_by = j.at("unanswered").value("ais_by", std::string("engine"));
    }
    const auto w = j.at("winner").get<std::string>();
    if (w != "ISO" && w != "AIS") throw ParseError("winner must be ISO or AIS");
    t.winner = w == "ISO" ? Player::iso : Player::ais;
  } catch (const json::exception& e) {
    throw ParseError(std::string("transcript: ") + e.what());
  }
  return t;
}

// Both sides played by the solver: AIS takes its first winning move (or the
// first legal move), ISO its first winning response (or the first legal one).
inline PlayTranscript principal_line(Solver& solver, int alpha) {
  const Game& game = solver.game();
  PlayTranscript t;
  t.config = game.config();
  t.config.alpha = Clock::fin(alpha);
  t.left = game.structure(0).name();
  t.right = game.structure(1).name();
  t.human_role = "none";
  auto s = game.initial_state(alpha);
  if (!s) {
    t.initial_valid = false;
    t.winner = Player::ais;
    return t;
  }
  State cur = *s;
  while (cur.beta > 0) {
    const AisMove mv = *solver.best_ais_move(cur);
    auto r = solver.best_response(cur, mv);
    if (!r) r = solver.first_response(cur, mv);
    if (!r) {
      t.unanswered = mv;
      t.unanswered_by = "engine";
      t.winner = Player::ais;
      return t;
    }
    t.steps.push_back({mv, "engine", *r, "engine"});
    cur = *r;
  }
  t.winner = Player::iso;
  return t;
}

struct ReplayResult {
  bool ok = true;
  std::string error;
  std::optional<State> final_state;
};

// Re-drives the engine along the transcript: every move must be legal and
// every recorded state must be one of the engine's enumerated responses.
inline ReplayResult replay(const Game& game, const PlayTranscript& t) {
  auto fail = [](std::string msg) { return ReplayResult{false, std::move(msg), std::nullopt}; };
  if (!t.config.alpha.is_fin()) return fail("transcript clock must be finite");
  auto s0 = game.initial_state(t.config.alpha.value);
  if (!s0) {
    if (t.initial_valid || !t.steps.empty() || t.winner != Player::ais)
      return fail("initial state is not a state; only an immediate AIS win replays");
    return ReplayResult{true, {}, std::nullopt};
  }
  if (!t.initial_valid) return fail("transcript claims an invalid initial state");
  State cur = *s0;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    if (!game.is_legal_ais_move(cur, st.move)) return fail("step " + std::to_string(i) + ": illegal AIS move");
    bool found = false;
    game.for_each_iso_response(cur, st.move, [&](const State& r) {
      if (r == st.state) found = true;
      return !found;
    });
    if (!found) return fail("step " + std::to_string(i) + ": state is not a legal response");
    cur = st.state;
  }
  if (t.unanswered) {
    if (!game.is_legal_ais_move(cur, *t.unanswered)) return fail("unanswered move is illegal");
    if (game.has_iso_response(cur, *t.unanswered)) return fail("unanswered move has a response");
    if (t.winner != Player::ais) return fail("winner mismatch");
  } else {
    if (cur.beta != 0) return fail("play ended before the clock ran out");
    if (t.winner != Player::iso) return fail("winner mismatch");
  }
  return ReplayResult{true, {}, cur};
}

}  // namespace shelab
