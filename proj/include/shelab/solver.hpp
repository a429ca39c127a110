#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "shelab/game.hpp"

namespace shelab {

namespace core_code {
inline constexpr unsigned char absent = 0xFF;
inline constexpr unsigned char matched = 0xFE;
inline constexpr unsigned char never = 0xFD;
inline constexpr int max_relevant = 0xF0;
}  // namespace core_code

// The state with beta and n removed: unmatched debts become offsets
// d = h - n, with d <= 0 collapsed to 0 (all overdue elements behave alike)
// and d > relevant collapsed to never-due. Matched debts are dropped.
inline std::string canonical_core(const State& s, int relevant) {
  if (relevant > core_code::max_relevant) throw BudgetError("clock-too-large");
  const IndexMap inv = s.inverse();
  std::string key;
  key.reserve(s.debt[0].size() * 2 + s.debt[1].size());
  for (int side = 0; side < 2; ++side)
    for (int e = 0; e < static_cast<int>(s.debt[side].size()); ++e) {
      const Debt h = s.debt[side][e];
      if (h == kAbsent) {
        key.push_back(static_cast<char>(core_code::absent));
      } else if ((side == 0 ? s.g[e] : inv[e]) >= 0) {
        key.push_back(static_cast<char>(core_code::matched));
      } else if (h == kNever || static_cast<std::int64_t>(h) - s.n > relevant) {
        key.push_back(static_cast<char>(core_code::never));
      } else {
        key.push_back(static_cast<char>(std::max<std::int64_t>(0, h - s.n)));
      }
    }
  for (int b : s.g) key.push_back(static_cast<char>(b + 1));
  return key;
}

struct SolverOptions {
  bool memoize = true;
};

// Backward induction over the clocked game. A position is ISO-winning iff
// beta = 0, or every AIS move has a response leading to an ISO-winning
// position. The transposition table is keyed by (canonical core, beta).
class Solver {
 public:
  explicit Solver(Game game, SolverOptions opts = {}) : game_(std::move(game)), opts_(opts) {}

  const Game& game() const { return game_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t cache_size() const { return iso_cache_.size(); }

  std::string key(const State& s) const {
    std::string k = canonical_core(s, s.beta - 1 + game_.rules().debt_slack);
    k.append(reinterpret_cast<const char*>(&s.beta), sizeof(s.beta));
    return k;
  }

  bool iso_wins(const State& s) {
    if (s.beta == 0) return true;
    std::string k;
    if (opts_.memoize) {
      k = key(s);
      if (auto it = iso_cache_.find(k); it != iso_cache_.end()) return it->second;
    }
    ++nodes_;
    bool result = true;
    game_.for_each_ais_move(s, [&](const AisMove& mv) {
      if (!answer(s, mv)) {
        result = false;
        return false;
      }
      return true;
    });
    if (opts_.memoize) iso_cache_.emplace(std::move(k), result);
    return result;
  }

  // Independent dual search: AIS wins iff some move leaves ISO only
  // AIS-winning answers (or none). Uses its own table.
  bool ais_wins(const State& s) {
    if (s.beta == 0) return false;
    std::string k;
    if (opts_.memoize) {
      k = key(s);
      if (auto it = ais_cache_.find(k); it != ais_cache_.end()) return it->second;
    }
    ++nodes_;
    bool result = false;
    game_.for_each_ais_move(s, [&](const AisMove& mv) {
      bool all_lose = true;
      game_.for_each_iso_response(s, mv, [&](const State& t) {
        if (!ais_wins(t)) {
          all_lose = false;
          return false;
        }
        return true;
      });
      if (all_lose) {
        result = true;
        return false;
      }
      return true;
    });
    if (opts_.memoize) ais_cache_.emplace(std::move(k), result);
    return result;
  }

  // Winner from the initial state at clock alpha.
  Player solve(int alpha) {
    auto s0 = game_.initial_state(alpha);
    if (!s0) return Player::ais;
    return iso_wins(*s0) ? Player::iso : Player::ais;
  }

  // First ISO-winning response in canonical order.
  std::optional<State> best_response(const State& s, const AisMove& mv) {
    std::optional<State> out;
    game_.for_each_iso_response(s, mv, [&](const State& t) {
      if (iso_wins(t)) {
        out = t;
        return false;
      }
      return true;
    });
    return out;
  }

  // All ISO-winning responses in canonical order.
  std::vector<State> winning_responses(const State& s, const AisMove& mv) {
    std::vector<State> out;
    game_.for_each_iso_response(s, mv, [&](const State& t) {
      if (iso_wins(t)) out.push_back(t);
      return true;
    });
    return out;
  }

  // First AIS move that ISO cannot answer with a winning response; when ISO
  // wins from s, the first legal move.
  std::optional<AisMove> best_ais_move(const State& s) {
    std::optional<AisMove> first, winning;
    game_.for_each_ais_move(s, [&](const AisMove& mv) {
      if (!first) first = mv;
      if (!answer(s, mv)) {
        winning = mv;
        return false;
      }
      return true;
    });
    return winning ? winning : first;
  }

  // Any response at all (first in canonical order), used when ISO is lost.
  std::optional<State> first_response(const State& s, const AisMove& mv) const {
    std::optional<State> out;
    game_.for_each_iso_response(s, mv, [&](const State& t) {
      out = t;
      return false;
    });
    return out;
  }

 private:
  bool answer(const State& s, const AisMove& mv) {
    bool answered = false;
    game_.for_each_iso_response(s, mv, [&](const State& t) {
      if (iso_wins(t)) {
        answered = true;
        return false;
      }
      return true;
    });
    return answered;
  }

  Game game_;
  SolverOptions opts_;
  std::unordered_map<std::string, bool> iso_cache_;
  std::unordered_map<std::string, bool> ais_cache_;
  std::size_t nodes_ = 0;
};

struct SolveResult {
  Player winner = Player::ais;
  std::size_t nodes = 0;
  double millis = 0;
  std::shared_ptr<Solver> strategy;  // answers best_response / best_ais_move
};

inline SolveResult solve(const Structure& m1, const Structure& m2, const GameConfig& cfg,
                         RuleOptions rules = {}, SolverOptions opts = {}) {
  if (!cfg.alpha.is_fin()) throw Error("bad-config", "solve needs a finite clock");
  const auto start = std::chrono::steady_clock::now();
  auto solver = std::make_shared<Solver>(Game(m1, m2, cfg, rules), opts);
  SolveResult out;
  out.winner = solver->solve(cfg.alpha.value);
  out.nodes = solver->nodes();
  out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                   .count();
  out.strategy = std::move(solver);
  return out;
}

// ---------------------------------------------------------------------------
// Rank and stabilization.

struct Rank {
  enum class Kind { ais_wins_at, iso_stable };
  Kind kind = Kind::iso_stable;
  int value = 0;

  static Rank ais_wins_at(int r) { return {Kind::ais_wins_at, r}; }
  static Rank iso_stable(int beta_star) { return {Kind::iso_stable, beta_star}; }
  bool stable() const { return kind == Kind::iso_stable; }

  friend bool operator==(const Rank&, const Rank&) = default;
};

inline std::string to_string(const Rank& r) {
  return (r.stable() ? "IsoStable(" : "AisWinsAt(") + std::to_string(r.value) + ")";
}

// Per-clock counts of ISO-winning reachable cores in the clock-free game
// where ISO's finite debts are capped at debt_cap. counts[k] is the number
// of cores from which ISO survives k more AIS moves.
struct StabilizationTable {
  int debt_cap = 0;
  std::size_t reachable = 0;
  std::vector<std::size_t> counts;
  bool initial_survives = false;  // initial core is in the last entry's set
  bool stabilized = false;        // last two entries are the same set

  int beta_star() const { return static_cast<int>(counts.size()) - 2; }
};

// Explicit reachable graph of the capped clock-free game.
class CappedGraph {
 public:
  CappedGraph(const Interp& m1, const Interp& m2, GammaMode mode, int theta, int cap,
              Mutation mutation = Mutation::none)
      : game_(m1, m2, GameConfig{mode, theta, Clock::stable_clock()},
              RuleOptions{0, cap, mutation}),
        cap_(cap) {
    auto s0 = game_.initial_state(1);
    if (!s0) return;
    intern(*s0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const State s = nodes_[i];
      std::vector<std::vector<int>> moves;
      game_.for_each_ais_move(s, [&](const AisMove& mv) {
        std::vector<int> resp;
        game_.for_each_iso_response(s, mv, [&](const State& t) {
          resp.push_back(intern(t));
          return true;
        });
        std::sort(resp.begin(), resp.end());
        resp.erase(std::unique(resp.begin(), resp.end()), resp.end());
        moves.push_back(std::move(resp));
        return true;
      });
      edges_.push_back(std::move(moves));
    }
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const State& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::vector<int>>& moves(std::size_t i) const { return edges_[i]; }
  const Game& game() const { return game_; }

  // W_0 = all cores; W_{k+1} = cores where every AIS move has a response in W_k.
  std::vector<char> step(const std::vector<char>& w) const {
    std::vector<char> next(w.size(), 0);
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (!w[c]) continue;
      bool ok = true;
      for (const auto& resp : edges_[c]) {
        bool any = false;
        for (int r : resp)
          if (w[r]) {
            any = true;
            break;
          }
        if (!any) {
          ok = false;
          break;
        }
      }
      next[c] = ok;
    }
    return next;
  }

  // Iterates until the set is stable or the initial core (node 0) drops out.
  StabilizationTable iterate(int max_steps = 1 << 20) const {
    StabilizationTable t;
    t.debt_cap = cap_;
    t.reachable = nodes_.size();
    if (nodes_.empty()) {
      t.counts.push_back(0);
      return t;
    }
    std::vector<char> w(nodes_.size(), 1);
    t.counts.push_back(nodes_.size());
    for (int k = 0; k < max_steps; ++k) {
      if (!w[0]) break;
      auto next = step(w);
      t.counts.push_back(static_cast<std::size_t>(std::count(next.begin(), next.end(), 1)));
      if (next == w) {
        t.stabilized = true;
        break;
      }
      w = std::move(next);
    }
    t.initial_survives = w[0] != 0;
    return t;
  }

 private:
  // Clock-free normal form: n = 1, beta = 1, unmatched debts 1 + d.
  int intern(const State& t) {
    std::string k = canonical_core(t, cap_);
    auto [it, inserted] = index_.emplace(std::move(k), static_cast<int>(nodes_.size()));
    if (inserted) {
      State s = t;
      const IndexMap inv = t.inverse();
      for (int side = 0; side < 2; ++side)
        for (int e = 0; e < static_cast<int>(s.debt[side].size()); ++e) {
          Debt& h = s.debt[side][e];
          if (h == kAbsent) continue;
          if ((side == 0 ? t.g[e] : inv[e]) >= 0) {
            h = 0;
          } else if (h != kNever) {
            const std::int64_t d = std::max<std::int64_t>(0, h - t.n);
            h = d > cap_ ? kNever : static_cast<Debt>(1 + d);
          }
        }
      s.n = 1;
      s.beta = 1;
      nodes_.push_back(std::move(s));
    }
    return it->second;
  }

  Game game_;
  int cap_;
  std::vector<State> nodes_;
  std::vector<std::vector<std::vector<int>>> edges_;
  std::unordered_map<std::string, int> index_;
};

struct RankOptions {
  int max_clock = 24;
};

struct RankReport {
  Rank rank;
  StabilizationTable table;
};

// Exact clocked solves decide AisWinsAt(r); IsoStable is certified by the
// capped clock-free fixpoint, whose ISO strategies are ISO strategies at
// every finite clock.
inline RankReport rank_report(const Structure& m1, const Structure& m2, int theta,
                              GammaMode mode, RankOptions opts = {}, RuleOptions rules = {}) {
  Interp i1(m1), i2(m2);
  Solver solver(Game(i1, i2, GameConfig{mode, theta, Clock::stable_clock()}, rules));
  for (int k = 0; k <= opts.max_clock; ++k) {
    if (solver.solve(k) == Player::ais) {
      RankReport out{Rank::ais_wins_at(k), {}};
      out.table = CappedGraph(i1, i2, mode, theta, std::max(k - 1, 0), rules.mutation).iterate(k);
      return out;
    }
    CappedGraph graph(i1, i2, mode, theta, k, rules.mutation);
    auto table = graph.iterate();
    if (table.initial_survives && table.stabilized)
      return RankReport{Rank::iso_stable(table.beta_star()), std::move(table)};
  }
  throw BudgetError("rank-undecided", "no verdict up to clock " + std::to_string(opts.max_clock));
}

inline Rank rank(const Structure& m1, const Structure& m2, int theta, GammaMode mode,
                 RankOptions opts = {}) {
  return rank_report(m1, m2, theta, mode, opts).rank;
}

inline StabilizationTable stabilization_report(const Structure& m1, const Structure& m2,
                                               int theta, GammaMode mode,
                                               RankOptions opts = {}) {
  return rank_report(m1, m2, theta, mode, opts).table;
}

inline int default_theta(const Structure& m1, const Structure& m2) {
  return static_cast<int>(std::max(m1.size(), m2.size()));
}

// E0 at a finite clock: ISO wins. At Stable: ISO wins at every finite clock.
inline bool e0_equiv(const Structure& m1, const Structure& m2, const GameConfig& cfg,
                     RuleOptions rules = {}) {
  if (cfg.alpha.is_fin()) return solve(m1, m2, cfg, rules).winner == Player::iso;
  return rank_report(m1, m2, cfg.theta, cfg.mode, {}, rules).rank.stable();
}

}  // namespace shelab
