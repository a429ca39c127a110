#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shelab/model.hpp"

namespace shelab {

// A finite clock value, or Stable: strictly above every finite value. Stable
// never appears inside a concrete play.
struct Clock {
  bool stable = false;
  int value = 0;

  static Clock fin(int n) { return {false, n}; }
  static Clock stable_clock() { return {true, 0}; }

  bool is_fin() const { return !stable; }

  friend bool operator==(const Clock&, const Clock&) = default;
  friend std::strong_ordering operator<=>(const Clock& a, const Clock& b) {
    if (a.stable != b.stable) return a.stable ? std::strong_ordering::greater
                                              : std::strong_ordering::less;
    if (a.stable) return std::strong_ordering::equal;
    return a.value <=> b.value;
  }
};

inline std::string to_string(const Clock& c) {
  return c.stable ? std::string("stable") : std::to_string(c.value);
}

struct GameConfig {
  GammaMode mode = GammaMode::bs;
  int theta = 1;
  Clock alpha = Clock::fin(0);
};

enum class Player { iso, ais };

inline const char* to_string(Player p) { return p == Player::iso ? "ISO" : "AIS"; }

using Debt = std::int32_t;
inline constexpr Debt kAbsent = -1;
// The clamped "never due" debt. Any debt past the horizon behaves like it.
inline constexpr Debt kNever = std::numeric_limits<Debt>::max();

// Game position (A1, A2, h1, h2, g, beta, n). Side 0 is M1, side 1 is M2.
// debt[side][e] == kAbsent iff e is not in A^side; g maps M1 indices to M2
// indices or -1.
struct State {
  std::vector<Debt> debt[2];
  IndexMap g;
  int beta = 0;
  int n = 0;

  bool in_set(int side, int e) const { return debt[side][e] != kAbsent; }
  int set_size(int side) const {
    return static_cast<int>(std::count_if(debt[side].begin(), debt[side].end(),
                                          [](Debt d) { return d != kAbsent; }));
  }
  std::vector<int> members(int side) const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(debt[side].size()); ++e)
      if (in_set(side, e)) out.push_back(e);
    return out;
  }
  IndexMap inverse() const {
    IndexMap inv(debt[1].size(), -1);
    for (int a = 0; a < static_cast<int>(g.size()); ++a)
      if (g[a] >= 0) inv[g[a]] = a;
    return inv;
  }
  // g^1 = g, g^2 = g^-1
  IndexMap oriented(int side) const { return side == 0 ? g : inverse(); }
  int matched_count() const {
    return static_cast<int>(std::count_if(g.begin(), g.end(), [](int b) { return b >= 0; }));
  }

  friend bool operator==(const State&, const State&) = default;
};

// AIS chooses (beta', iota, A') with beta' < beta and A^iota ⊆ A', |A'| <= theta.
struct AisMove {
  int beta_next = 0;
  int iota = 1;           // 1 or 2
  std::vector<int> set;   // sorted element indices of M_iota

  friend bool operator==(const AisMove&, const AisMove&) = default;
};

enum class Outcome { iso, ais, not_terminal };

enum class Mutation {
  none,
  // Deliberate rule bug for mutation testing: on side 2 ISO must take debt n+1.
  collapse_side2_horizon,
};

struct RuleOptions {
  // Extra finite debt values offered beyond the horizon n + beta'.
  int debt_slack = 0;
  // Clock-free capped variant: finite debts are n+1 .. n+cap regardless of beta'.
  std::optional<int> debt_cap;
  Mutation mutation = Mutation::none;
};

class Game {
 public:
  Game(Interp m1, Interp m2, GameConfig cfg, RuleOptions rules = {})
      : m_{std::move(m1), std::move(m2)}, cfg_(cfg), rules_(rules) {
    if (!(m_[0].vocab() == m_[1].vocab())) throw Error("vocab-mismatch");
    if (cfg_.theta < 1) throw Error("bad-config", "theta must be >= 1");
  }
  Game(const Structure& m1, const Structure& m2, GameConfig cfg, RuleOptions rules = {})
      : Game(Interp(m1), Interp(m2), cfg, rules) {}

  const Interp& structure(int side) const { return m_[side]; }
  const GameConfig& config() const { return cfg_; }
  const RuleOptions& rules() const { return rules_; }

  // s0 = (∅, ∅, ∅, ∅, ∅, alpha, 0), or nullopt when it is not a state
  // (some atomic sentence disagrees): AIS then wins immediately.
  std::optional<State> initial_state(int alpha) const {
    if (alpha < 0) throw Error("bad-config", "negative clock");
    State s;
    s.debt[0].assign(static_cast<std::size_t>(m_[0].size()), kAbsent);
    s.debt[1].assign(static_cast<std::size_t>(m_[1].size()), kAbsent);
    s.g.assign(static_cast<std::size_t>(m_[0].size()), -1);
    s.beta = alpha;
    s.n = 0;
    if (!preserves_gamma(m_[0], m_[1], s.g, cfg_.mode)) return std::nullopt;
    return s;
  }
  std::optional<State> initial_state() const {
    if (!cfg_.alpha.is_fin()) throw Error("bad-config", "a play needs a finite clock");
    return initial_state(cfg_.alpha.value);
  }

  // Moves in canonical order: beta' descending, iota ascending, then A' by
  // size and lexicographically by element index. f returns false to stop.
  template <class F>
  void for_each_ais_move(const State& s, F&& f) const {
    for (int b = s.beta - 1; b >= 0; --b)
      for (int iota = 1; iota <= 2; ++iota) {
        const int side = iota - 1;
        std::vector<int> base = s.members(side);
        std::vector<int> rest;
        for (int e = 0; e < m_[side].size(); ++e)
          if (!s.in_set(side, e)) rest.push_back(e);
        const int room = cfg_.theta - static_cast<int>(base.size());
        if (room < 0) continue;
        bool go = true;
        for (int k = 0; k <= std::min<int>(room, static_cast<int>(rest.size())) && go; ++k) {
          std::vector<int> pick;
          go = combinations(rest, k, 0, pick, [&](const std::vector<int>& chosen) {
            AisMove mv{b, iota, base};
            mv.set.insert(mv.set.end(), chosen.begin(), chosen.end());
            std::sort(mv.set.begin(), mv.set.end());
            return f(mv);
          });
        }
        if (!go) return;
      }
  }

  std::vector<AisMove> legal_ais_moves(const State& s) const {
    std::vector<AisMove> out;
    for_each_ais_move(s, [&](const AisMove& mv) {
      out.push_back(mv);
      return true;
    });
    return out;
  }

  bool is_legal_ais_move(const State& s, const AisMove& mv) const {
    if (mv.iota != 1 && mv.iota != 2) return false;
    if (mv.beta_next < 0 || mv.beta_next >= s.beta) return false;
    const int side = mv.iota - 1;
    if (static_cast<int>(mv.set.size()) > cfg_.theta) return false;
    if (!std::is_sorted(mv.set.begin(), mv.set.end()) ||
        std::adjacent_find(mv.set.begin(), mv.set.end()) != mv.set.end())
      return false;
    for (int e : mv.set)
      if (e < 0 || e >= m_[side].size()) return false;
    for (int e : s.members(side))
      if (!std::binary_search(mv.set.begin(), mv.set.end(), e)) return false;
    return true;
  }

  // Debt values ISO may give a new side-iota element, in canonical order:
  // n+1, ..., n+H, then kNever. H is the horizon beta' (plus slack), or the
  // cap in the clock-free variant.
  std::vector<Debt> debt_choices(const State& s, const AisMove& mv) const {
    std::vector<Debt> out;
    if (rules_.mutation == Mutation::collapse_side2_horizon && mv.iota == 2) {
      out.push_back(s.n + 1);
      return out;
    }
    const int horizon = rules_.debt_cap ? *rules_.debt_cap : mv.beta_next + rules_.debt_slack;
    for (int d = 1; d <= horizon; ++d) out.push_back(s.n + d);
    out.push_back(kNever);
    return out;
  }

  // Elements of A^iota that must enter dom(g^iota) at this move: unmatched
  // with debt <= n.
  std::vector<int> due_set(const State& s, int iota) const {
    const int side = iota - 1;
    const IndexMap g = s.oriented(side);
    std::vector<int> out;
    for (int e = 0; e < m_[side].size(); ++e)
      if (s.in_set(side, e) && g[e] < 0 && s.debt[side][e] <= s.n) out.push_back(e);
    return out;
  }

  // Enumerates ISO's legal successors in canonical order: injections of the
  // due set (lexicographic by target), then debt vectors for the new
  // elements. f returns false to stop.
  template <class F>
  void for_each_iso_response(const State& s, const AisMove& mv, F&& f) const {
    const int side = mv.iota - 1;
    const int other = 1 - side;
    const std::vector<int> due = due_set(s, mv.iota);
    std::vector<int> fresh;
    for (int e : mv.set)
      if (!s.in_set(side, e)) fresh.push_back(e);
    const std::vector<Debt> choices = debt_choices(s, mv);

    const IndexMap inv = s.inverse();
    std::vector<char> taken(static_cast<std::size_t>(m_[other].size()), 0);
    for (int e = 0; e < m_[other].size(); ++e)
      taken[e] = (other == 1 ? inv[e] : s.g[e]) >= 0;

    IndexMap g = s.g;  // always oriented M1 -> M2
    std::vector<int> targets(due.size(), -1);
    int other_size = s.set_size(other);
    bool stop = false;

    auto emit = [&]() {
      State t = s;
      t.g = g;
      t.beta = mv.beta_next;
      t.n = s.n + 1;
      for (int tgt : targets)
        if (!t.in_set(other, tgt)) t.debt[other][tgt] = 0;
      std::vector<std::size_t> pick(fresh.size(), 0);
      while (true) {
        for (std::size_t i = 0; i < fresh.size(); ++i) t.debt[side][fresh[i]] = choices[pick[i]];
        if (!f(static_cast<const State&>(t))) {
          stop = true;
          return;
        }
        std::size_t pos = fresh.size();
        while (pos > 0 && ++pick[pos - 1] == choices.size()) pick[--pos] = 0;
        if (pos == 0) return;
      }
    };

    auto extend = [&](auto&& self, std::size_t k) -> void {
      if (stop) return;
      if (k == due.size()) {
        emit();
        return;
      }
      const int a = due[k];
      for (int t = 0; t < m_[other].size() && !stop; ++t) {
        if (taken[t]) continue;
        const bool fresh_target = !s.in_set(other, t);
        if (!fresh_target && s.debt[other][t] > s.n) continue;  // B(g) at successor
        if (fresh_target && other_size + 1 > cfg_.theta) continue;
        if (side == 0) g[a] = t; else g[t] = a;
        if (preserves_gamma(m_[0], m_[1], g, cfg_.mode)) {
          taken[t] = 1;
          targets[k] = t;
          if (fresh_target) ++other_size;
          self(self, k + 1);
          if (fresh_target) --other_size;
          taken[t] = 0;
        }
        if (side == 0) g[a] = -1; else g[t] = -1;
      }
    };
    extend(extend, 0);
  }

  std::vector<State> legal_iso_responses(const State& s, const AisMove& mv) const {
    std::vector<State> out;
    for_each_iso_response(s, mv, [&](const State& t) {
      out.push_back(t);
      return true;
    });
    return out;
  }

  bool has_iso_response(const State& s, const AisMove& mv) const {
    bool any = false;
    for_each_iso_response(s, mv, [&](const State&) {
      any = true;
      return false;
    });
    return any;
  }

  // AIS without a legal move (beta = 0) loses; this covers alpha = 0.
  Outcome winner_if_terminal(const State& s) const {
    return s.beta == 0 ? Outcome::iso : Outcome::not_terminal;
  }
  // A pending AIS move ISO cannot answer is an AIS win.
  Outcome winner_if_terminal(const State& s, const AisMove& mv) const {
    return has_iso_response(s, mv) ? Outcome::not_terminal : Outcome::ais;
  }

  // The state invariants B(a)-(g); alpha bounds beta only for finite alpha.
  std::optional<Violation> check_state(const State& s) const {
    for (int side = 0; side < 2; ++side)
      if (static_cast<int>(s.debt[side].size()) != m_[side].size())
        return Violation{"shape", "debt vector size"};
    if (static_cast<int>(s.g.size()) != m_[0].size()) return Violation{"shape", "g size"};
    for (int side = 0; side < 2; ++side)
      if (s.set_size(side) > cfg_.theta)
        return Violation{"B(a)", "|A" + std::to_string(side + 1) + "| > theta"};
    if (s.beta < 0 || (cfg_.alpha.is_fin() && s.beta > cfg_.alpha.value))
      return Violation{"B(b)", "beta out of range"};
    for (int side = 0; side < 2; ++side)
      for (Debt d : s.debt[side])
        if (d < kAbsent) return Violation{"B(c)", "negative debt"};
    std::vector<char> hit(static_cast<std::size_t>(m_[1].size()), 0);
    for (int a = 0; a < m_[0].size(); ++a) {
      const int b = s.g[a];
      if (b < 0) continue;
      if (b >= m_[1].size()) return Violation{"B(d)", "image out of universe"};
      if (hit[b]) return Violation{"B(d)", "g not injective"};
      hit[b] = 1;
      if (!s.in_set(0, a) || !s.in_set(1, b)) return Violation{"B(e)", "dom/rng outside A"};
      if (s.debt[0][a] >= s.n || s.debt[1][b] >= s.n)
        return Violation{"B(g)", "matched element with debt >= n"};
    }
    if (!preserves_gamma(m_[0], m_[1], s.g, cfg_.mode))
      return Violation{"B(f)", "g does not preserve Gamma"};
    return std::nullopt;
  }

  // Checks the clause-E conditions on ISO's answer t to (s, mv), with debts
  // arbitrary naturals as the rules allow.
  std::optional<Violation> check_response(const State& s, const AisMove& mv,
                                          const State& t) const {
    if (!is_legal_ais_move(s, mv)) return Violation{"E", "illegal AIS move"};
    if (auto v = check_state(t)) return v;
    const int side = mv.iota - 1;
    const int other = 1 - side;
    for (int sd = 0; sd < 2; ++sd)
      for (int e = 0; e < static_cast<int>(s.debt[sd].size()); ++e)
        if (s.in_set(sd, e) && t.debt[sd][e] != s.debt[sd][e])
          return Violation{"D", "A or h not extended"};
    for (int a = 0; a < static_cast<int>(s.g.size()); ++a)
      if (s.g[a] >= 0 && t.g[a] != s.g[a]) return Violation{"D", "g not extended"};
    if (t.beta != mv.beta_next || t.beta >= s.beta) return Violation{"D", "beta"};
    if (t.n != s.n + 1) return Violation{"D", "n must increase by one"};
    if (t.members(side) != mv.set) return Violation{"E", "A^iota != A'"};
    for (int e : mv.set)
      if (!s.in_set(side, e) && t.debt[side][e] < s.n + 1)
        return Violation{"E", "new element debt < n+1"};
    const IndexMap tg = t.oriented(side);
    std::vector<int> dom;
    for (int e = 0; e < static_cast<int>(tg.size()); ++e)
      if (tg[e] >= 0) dom.push_back(e);
    std::vector<int> expect;
    for (int e : s.members(side))
      if (s.debt[side][e] < s.n + 1) expect.push_back(e);
    if (dom != expect) return Violation{"E", "dom(g^iota) is not the due set"};
    std::vector<int> other_expect = s.members(other);
    const IndexMap to = t.oriented(other);
    for (int e = 0; e < static_cast<int>(to.size()); ++e)
      if (to[e] >= 0) other_expect.push_back(e);
    std::sort(other_expect.begin(), other_expect.end());
    other_expect.erase(std::unique(other_expect.begin(), other_expect.end()), other_expect.end());
    if (t.members(other) != other_expect)
      return Violation{"E", "A^(3-iota) != old ∪ dom(g^(3-iota))"};
    return std::nullopt;
  }

 private:
  template <class F>
  static bool combinations(const std::vector<int>& pool, int k, std::size_t from,
                           std::vector<int>& pick, F&& f) {
    if (static_cast<int>(pick.size()) == k) return f(pick);
    for (std::size_t i = from; i < pool.size(); ++i) {
      pick.push_back(pool[i]);
      bool go = combinations(pool, k, i + 1, pick, f);
      pick.pop_back();
      if (!go) return false;
    }
    return true;
  }

  Interp m_[2];
  GameConfig cfg_;
  RuleOptions rules_;
};

}  // namespace shelab
