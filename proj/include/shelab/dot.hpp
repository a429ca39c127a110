#pragma once

#include <map>
#include <ostream>
#include <queue>
#include <string>

#include "shelab/io.hpp"
#include "shelab/solver.hpp"

namespace shelab {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string dot_label(const Game& game, const State& s) {
  std::string out = "b=" + std::to_string(s.beta) + " n=" + std::to_string(s.n) + "\\n";
  for (int side = 0; side < 2; ++side) {
    out += side == 0 ? "A1={" : " A2={";
    bool first = true;
    for (int e : s.members(side)) {
      if (!first) out += ",";
      first = false;
      out += dot_escape(game.structure(side).id(e)) + ":" +
             (s.debt[side][e] == kNever ? std::string("T") : std::to_string(s.debt[side][e]));
    }
    out += "}";
  }
  std::string g;
  for (int a = 0; a < static_cast<int>(s.g.size()); ++a)
    if (s.g[a] >= 0)
      g += (g.empty() ? "" : ",") + dot_escape(game.structure(0).id(a)) + "->" +
           dot_escape(game.structure(1).id(s.g[a]));
  return out + "\\ng={" + g + "}";
}

}  // namespace detail

// Writes the reachable solved positions from the initial state at alpha.
// States are ellipses (green: ISO wins, red: AIS wins); AIS moves are boxes.
// Breadth-first, truncated after max_states positions.
inline std::size_t write_dot(std::ostream& out, Solver& solver, int alpha,
                             std::size_t max_states = 200) {
  const Game& game = solver.game();
  out << "digraph game {\n  rankdir=LR;\n  node [fontname=\"monospace\", fontsize=10];\n";
  auto s0 = game.initial_state(alpha);
  if (!s0) {
    out << "  s0 [label=\"not a state\", shape=ellipse, style=filled, fillcolor=\"#f4a6a6\"];\n}\n";
    return 1;
  }
  std::map<std::string, int> ids;
  std::queue<State> todo;
  auto node = [&](const State& s) -> std::pair<int, bool> {
    const std::string k = state_to_json(game, s).dump();
    auto [it, fresh] = ids.emplace(k, static_cast<int>(ids.size()));
    if (fresh) {
      const bool iso = solver.iso_wins(s);
      out << "  s" << it->second << " [label=\"" << detail::dot_label(game, s)
          << "\", shape=ellipse, style=filled, fillcolor=\"" << (iso ? "#a6e3a1" : "#f4a6a6") << "\"];\n";
      todo.push(s);
    }
    return {it->second, fresh};
  };
  node(*s0);
  std::size_t moves = 0;
  bool truncated = false;
  while (!todo.empty()) {
    const State s = todo.front();
    todo.pop();
    const int from = ids.at(state_to_json(game, s).dump());
    game.for_each_ais_move(s, [&](const AisMove& mv) {
      const std::string m = "m" + std::to_string(moves++);
      std::string set;
      for (int e : mv.set) set += (set.empty() ? "" : ",") + detail::dot_escape(game.structure(mv.iota - 1).id(e));
      out << "  " << m << " [label=\"b'=" << mv.beta_next << " i=" << mv.iota << " {" << set
          << "}\", shape=box];\n  s" << from << " -> " << m << ";\n";
      game.for_each_iso_response(s, mv, [&](const State& t) {
        if (ids.size() >= max_states && !ids.count(state_to_json(game, t).dump())) {
          truncated = true;
          return false;
        }
        out << "  " << m << " -> s" << node(t).first << ";\n";
        return true;
      });
      return !truncated;
    });
    if (truncated) break;
  }
  if (truncated) out << "  truncated [label=\"... truncated at " << max_states << " states\", shape=plaintext];\n";
  out << "}\n";
  return ids.size();
}

}  // namespace shelab
