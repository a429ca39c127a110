#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shelab/equivalence.hpp"
#include "shelab/io.hpp"
#include "shelab/parallel.hpp"
#include "shelab/play.hpp"
#include "shelab/solver.hpp"

namespace shelab {

// ---------------------------------------------------------------------------
// Corpora

struct Corpus {
  std::string spec;
  Family family;
};

inline Vocabulary binary_vocabulary() { return Vocabulary{{{"E", 2}}, {}}; }
inline Vocabulary order_vocabulary() { return Vocabulary{{{"<", 2}}, {}}; }

// All structures on {1..k}, k <= max_size, with every interpretation of the
// vocabulary. Throws corpus-too-large past the budget.
inline Corpus gen_exhaustive(const Vocabulary& vocab, int max_size,
                             std::size_t budget = 200000) {
  if (max_size < 1) throw Error("bad-corpus", "max size must be >= 1");
  const bool has_binary = std::any_of(vocab.predicates.begin(), vocab.predicates.end(),
                                      [](const auto& kv) { return kv.second >= 2; });
  if (has_binary && max_size > 4) throw BudgetError("corpus-too-large", "binary vocabularies stop at size 4");

  // slot = one tuple of one symbol; radix 2 for predicates, k for functions
  std::size_t total = 0;
  for (int k = 1; k <= max_size; ++k) {
    long double count = 1;
    for (const auto& [name, arity] : vocab.predicates) count *= std::pow(2.0L, std::pow(k, arity));
    for (const auto& [name, arity] : vocab.functions)
      count *= std::pow(static_cast<long double>(k), std::pow(k, arity));
    if (count + total > static_cast<long double>(budget))
      throw BudgetError("corpus-too-large", "more than " + std::to_string(budget) + " structures");
    total += static_cast<std::size_t>(count);
  }

  Corpus c;
  c.family.name = "exhaustive";
  for (int k = 1; k <= max_size; ++k) {
    std::vector<ElementId> universe;
    for (int i = 1; i <= k; ++i) universe.push_back(std::to_string(i));
    struct Slot {
      bool predicate;
      std::string symbol;
      Tuple args;
      int radix;
    };
    std::vector<Slot> slots;
    for (const auto& [name, arity] : vocab.predicates)
      detail::for_each_tuple(universe, arity, [&](const Tuple& t) { slots.push_back({true, name, t, 2}); });
    for (const auto& [name, arity] : vocab.functions)
      detail::for_each_tuple(universe, arity, [&](const Tuple& t) { slots.push_back({false, name, t, k}); });
    std::vector<int> digit(slots.size(), 0);
    std::size_t index = 0;
    while (true) {
      Structure s;
      s.name = "s" + std::to_string(k) + "_" + std::to_string(index++);
      s.vocab = vocab;
      s.universe = universe;
      for (const auto& [name, arity] : vocab.predicates) s.relations[name];
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].predicate) {
          if (digit[i]) s.relations[slots[i].symbol].insert(slots[i].args);
        } else {
          s.functions[slots[i].symbol][slots[i].args] = universe[static_cast<std::size_t>(digit[i])];
        }
      }
      c.family.members.push_back(std::move(s));
      std::size_t pos = slots.size();
      while (pos > 0 && ++digit[pos - 1] == slots[pos - 1].radix) digit[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return c;
}

inline Structure gen_linear_order(int n) {
  if (n < 1) throw Error("bad-size", "linear order needs n >= 1");
  Structure s;
  s.name = "L" + std::to_string(n);
  s.vocab = order_vocabulary();
  for (int i = 0; i < n; ++i) s.universe.push_back(std::to_string(i));
  auto& lt = s.relations["<"];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lt.insert({std::to_string(i), std::to_string(j)});
  return s;
}

// The ordinal alpha as an ordered set {0, ..., alpha-1}.
inline Structure gen_alpha_order(int alpha) {
  Structure s = gen_linear_order(alpha);
  s.name = "alpha" + std::to_string(alpha);
  return s;
}

// Finite truncation of M^n_alpha: universe {0..alpha}, c = 0,
// < = {(0,0)} ∪ {(i,j) : i < j}, F_k (k <= max_idx) the identity when k = n
// and constantly 0 otherwise.
inline Structure gen_m_n_alpha(int n, int alpha, int max_idx) {
  if (alpha < 0 || n < 0 || max_idx < 0) throw Error("bad-size", "naturals expected");
  Structure s;
  s.name = "M" + std::to_string(n) + "_" + std::to_string(alpha);
  s.vocab.predicates["<"] = 2;
  s.vocab.functions["c"] = 0;
  for (int k = 0; k <= max_idx; ++k) s.vocab.functions["F" + std::to_string(k)] = 1;
  for (int i = 0; i <= alpha; ++i) s.universe.push_back(std::to_string(i));
  auto& lt = s.relations["<"];
  lt.insert({"0", "0"});
  for (int i = 0; i <= alpha; ++i)
    for (int j = i + 1; j <= alpha; ++j) lt.insert({std::to_string(i), std::to_string(j)});
  s.functions["c"][{}] = "0";
  for (int k = 0; k <= max_idx; ++k) {
    auto& f = s.functions["F" + std::to_string(k)];
    for (const auto& e : s.universe) f[{e}] = k == n ? e : "0";
  }
  return s;
}

// "exhaustive:bin:N" | "exhaustive:unary:N" | "exhaustive:empty:N" |
// "exhaustive:const:N" (unary P plus a constant c) | "orders:N" (L1..LN)
inline Corpus corpus_from_spec(const std::string& spec, std::size_t budget = 200000) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw ParseError("bad corpus size " + s);
      return v;
    } catch (const std::logic_error&) {
      throw ParseError("bad corpus size " + s);
    }
  };
  if (parts.size() == 3 && parts[0] == "exhaustive") {
    Vocabulary v;
    if (parts[1] == "bin") v = binary_vocabulary();
    else if (parts[1] == "unary") v.predicates["P"] = 1;
    else if (parts[1] == "empty") {}
    else if (parts[1] == "const") {
      v.predicates["P"] = 1;
      v.functions["c"] = 0;
    } else throw ParseError("unknown corpus vocabulary " + parts[1]);
    Corpus c = gen_exhaustive(v, number(parts[2]), budget);
    c.spec = spec;
    return c;
  }
  if (parts.size() == 2 && parts[0] == "orders") {
    Corpus c;
    c.spec = spec;
    c.family.name = "orders";
    for (int n = 1; n <= number(parts[1]); ++n) c.family.members.push_back(gen_linear_order(n));
    return c;
  }
  throw ParseError("unknown corpus spec " + spec);
}

// Isomorphic copy with fresh ids in a random universe order.
inline Structure relabel(const Structure& s, std::mt19937_64& rng, const std::string& prefix = "r") {
  std::vector<std::size_t> perm(s.universe.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::map<ElementId, ElementId> to;
  for (std::size_t i = 0; i < s.universe.size(); ++i) to[s.universe[i]] = prefix + s.universe[i];
  auto map_tuple = [&](const Tuple& t) {
    Tuple out;
    for (const auto& e : t) out.push_back(to.at(e));
    return out;
  };
  Structure out;
  out.name = s.name + "'";
  out.vocab = s.vocab;
  for (auto i : perm) out.universe.push_back(to.at(s.universe[i]));
  for (const auto& [name, tuples] : s.relations)
    for (const auto& t : tuples) out.relations[name].insert(map_tuple(t));
  for (const auto& [name, arity] : s.vocab.predicates) out.relations[name];
  for (const auto& [name, table] : s.functions)
    for (const auto& [args, value] : table) out.functions[name][map_tuple(args)] = to.at(value);
  return out;
}

// ---------------------------------------------------------------------------
// Reports

struct Grid {
  GammaMode mode = GammaMode::bs;
  std::vector<int> thetas;
  std::vector<int> alphas;
};

struct Counterexample {
  std::string description;
  json transcript;
};

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  std::optional<Counterexample> first;
  std::string note;

  bool passed() const { return violations == 0; }

  void violation(std::string description, json transcript) {
    ++violations;
    if (!first) first = Counterexample{std::move(description), std::move(transcript)};
  }
  void merge(const CheckResult& o) {
    instances += o.instances;
    violations += o.violations;
    skipped += o.skipped;
    if (!first && o.first) first = o.first;
  }
};

struct SuiteReport {
  std::string suite;
  std::string corpus;
  std::vector<CheckResult> checks;
  double seconds = 0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  }
  const CheckResult* check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j{{"name", c.name},
           {"instances", c.instances},
           {"violations", c.violations},
           {"skipped", c.skipped},
           {"passed", c.passed()}};
    if (!c.note.empty()) j["note"] = c.note;
    if (c.first)
      j["counterexample"] = json{{"description", c.first->description},
                                 {"transcript", c.first->transcript}};
    checks.push_back(std::move(j));
  }
  return json{{"suite", r.suite},
              {"corpus", r.corpus},
              {"passed", r.passed()},
              {"seconds", r.seconds},
              {"checks", checks}};
}

inline std::string to_text(const SuiteReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << " on " << r.corpus << ": " << (r.passed() ? "PASS" : "FAIL")
      << " (" << r.seconds << " s)\n";
  for (const auto& c : r.checks) {
    out << "  [" << (c.passed() ? "pass" : "FAIL") << "] " << c.name << ": " << c.instances
        << " instances, " << c.violations << " violations";
    if (c.skipped) out << ", " << c.skipped << " skipped";
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << "\n";
    if (c.first) out << "      first counterexample: " << c.first->description << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Recorded verdicts. A counterexample transcript lists every verdict the
// failing check consumed; replaying recomputes them all.

namespace verdict {

inline json rules_to_json(const RuleOptions& r) {
  return json{{"slack", r.debt_slack},
              {"mutation", r.mutation == Mutation::none ? "none" : "collapse_side2_horizon"}};
}

inline RuleOptions rules_from_json(const json& j) {
  RuleOptions r;
  r.debt_slack = j.value("slack", 0);
  if (j.value("mutation", std::string("none")) == "collapse_side2_horizon")
    r.mutation = Mutation::collapse_side2_horizon;
  return r;
}

inline json solved(const Structure& m1, const Structure& m2, const GameConfig& cfg,
                   const RuleOptions& rules, Player winner) {
  Solver solver(Game(m1, m2, cfg, rules));
  return json{{"kind", "solve"},
              {"left", to_json(m1)},
              {"right", to_json(m2)},
              {"vocabulary", to_json(m1.vocab)},
              {"config", to_json(NamedConfig{"check", cfg})},
              {"rules", rules_to_json(rules)},
              {"winner", to_string(winner)},
              {"play", to_json(solver.game(), principal_line(solver, cfg.alpha.value))}};
}

inline json ranked(const Structure& m1, const Structure& m2, int theta, GammaMode mode,
                   const Rank& r) {
  return json{{"kind", "rank"},
              {"left", to_json(m1)},
              {"right", to_json(m2)},
              {"vocabulary", to_json(m1.vocab)},
              {"theta", theta},
              {"mode", to_string(mode)},
              {"rank", to_string(r)}};
}

inline json iso(const Structure& m1, const Structure& m2, bool value) {
  return json{{"kind", "isomorphic"},
              {"left", to_json(m1)},
              {"right", to_json(m2)},
              {"vocabulary", to_json(m1.vocab)},
              {"value", value}};
}

inline json bf(const Structure& m1, const Structure& m2, int depth, int width, bool value) {
  return json{{"kind", "back_and_forth"},
              {"left", to_json(m1)},
              {"right", to_json(m2)},
              {"vocabulary", to_json(m1.vocab)},
              {"depth", depth},
              {"width", width},
              {"value", value}};
}

}  // namespace verdict

inline json failure_transcript(const std::string& check, std::vector<json> verdicts) {
  return json{{"check", check}, {"verdicts", std::move(verdicts)}};
}

// Recomputes every recorded verdict; true iff all come out identical, i.e.
// the failure reproduces.
inline bool replay_failure(const json& transcript) {
  for (const auto& v : transcript.at("verdicts")) {
    const Vocabulary vocab = vocabulary_from_json(v.at("vocabulary"));
    const Structure m1 = structure_from_json(v.at("left"), vocab);
    const Structure m2 = structure_from_json(v.at("right"), vocab);
    const auto kind = v.at("kind").get<std::string>();
    if (kind == "solve") {
      const GameConfig cfg = config_from_json(v.at("config")).config;
      const RuleOptions rules = verdict::rules_from_json(v.at("rules"));
      if (to_string(solve(m1, m2, cfg, rules).winner) != v.at("winner").get<std::string>())
        return false;
      Solver solver(Game(m1, m2, cfg, rules));
      if (to_json(solver.game(), principal_line(solver, cfg.alpha.value)) != v.at("play")) return false;
      const PlayTranscript t = transcript_from_json(solver.game(), v.at("play"));
      if (!replay(solver.game(), t).ok) return false;
    } else if (kind == "rank") {
      const Rank r = rank(m1, m2, v.at("theta").get<int>(), mode_from_string(v.at("mode")));
      if (to_string(r) != v.at("rank").get<std::string>()) return false;
    } else if (kind == "isomorphic") {
      if (isomorphic(m1, m2).isomorphic != v.at("value").get<bool>()) return false;
    } else if (kind == "back_and_forth") {
      if (back_and_forth_equiv(m1, m2, v.at("depth"), v.at("width")) != v.at("value").get<bool>())
        return false;
    } else {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Harness options

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// SHELAH_LAB_SEED overrides the default seed.
inline std::uint64_t harness_seed() {
  if (const char* env = std::getenv("SHELAH_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("SHELAH_LAB_SEED is not a number: ") + env);
    }
  }
  return kDefaultSeed;
}

struct HarnessOptions {
  RuleOptions rules;
  unsigned threads = default_threads();
  std::uint64_t seed = kDefaultSeed;
  int playouts = 1000;
};

namespace detail {

// verdict[t][a] = ISO wins at (thetas[t], alphas[a]); one solver per theta.
inline std::vector<std::vector<char>> grid_verdicts(const Structure& m1, const Structure& m2,
                                                    const Grid& grid, const RuleOptions& rules) {
  std::vector<std::vector<char>> out;
  for (int theta : grid.thetas) {
    Solver solver(Game(m1, m2, GameConfig{grid.mode, theta, Clock::stable_clock()}, rules));
    std::vector<char> row;
    for (int alpha : grid.alphas) row.push_back(solver.solve(alpha) == Player::iso);
    out.push_back(std::move(row));
  }
  return out;
}

inline GameConfig at(const Grid& g, std::size_t t, std::size_t a) {
  return GameConfig{g.mode, g.thetas[t], Clock::fin(g.alphas[a])};
}

inline Player winner_of(bool iso) { return iso ? Player::iso : Player::ais; }

inline std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t n, bool diagonal) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = diagonal ? i : i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

inline std::vector<CheckResult> merge_checks(const std::vector<std::string>& names,
                                             const std::vector<std::vector<CheckResult>>& parts) {
  std::vector<CheckResult> out;
  for (const auto& n : names) out.push_back(CheckResult{n});
  for (const auto& part : parts)
    for (std::size_t c = 0; c < out.size(); ++c) out[c].merge(part[c]);
  return out;
}

}  // namespace detail

// Determinacy, reflexivity, symmetry, isomorphism => E0, isomorphism
// invariance, monotonicity in (theta, alpha), and the reduct clause, over
// every unordered pair (including m, m) of the corpus and every grid point.
inline SuiteReport check_fact_a12(const Corpus& corpus, const Grid& grid,
                                  const HarnessOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> names{"determinacy",  "reflexivity",  "symmetry",
                                       "iso-implies-e0", "iso-invariance", "monotonicity",
                                       "reduct"};
  const auto& fam = corpus.family.members;
  const auto pairs = detail::unordered_pairs(fam.size(), true);
  std::vector<std::vector<CheckResult>> parts(pairs.size());

  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const Structure& m1 = fam[i];
    const Structure& m2 = fam[j];
    std::vector<CheckResult> res(names.size());
    const auto v12 = detail::grid_verdicts(m1, m2, grid, opts.rules);
    const auto v21 = detail::grid_verdicts(m2, m1, grid, opts.rules);
    const bool iso = isomorphic(m1, m2).isomorphic;
    std::mt19937_64 rng(opts.seed ^ (static_cast<std::uint64_t>(i) << 32) ^ j);
    const Structure c1 = relabel(m1, rng, "p");
    const Structure c2 = relabel(m2, rng, "q");
    const auto vcopy = detail::grid_verdicts(c1, c2, grid, opts.rules);

    for (std::size_t t = 0; t < grid.thetas.size(); ++t) {
      Solver ais_side(Game(m1, m2, GameConfig{grid.mode, grid.thetas[t], Clock::stable_clock()}, opts.rules));
      for (std::size_t a = 0; a < grid.alphas.size(); ++a) {
        const GameConfig cfg = detail::at(grid, t, a);
        // determinacy: ISO search and the separate AIS search disagree
        auto s0 = ais_side.game().initial_state(grid.alphas[a]);
        const bool ais = s0 ? ais_side.ais_wins(*s0) : true;
        ++res[0].instances;
        if (static_cast<bool>(v12[t][a]) == ais)
          res[0].violation(m1.name + " vs " + m2.name + " at theta=" + std::to_string(cfg.theta) +
                               " alpha=" + to_string(cfg.alpha) + ": ISO and AIS searches agree",
                           failure_transcript("determinacy", {verdict::solved(m1, m2, cfg, opts.rules,
                                                                              detail::winner_of(v12[t][a]))}));
        if (i == j) {
          ++res[1].instances;
          if (!v12[t][a])
            res[1].violation(m1.name + " not E0 to itself at theta=" + std::to_string(cfg.theta) +
                                 " alpha=" + to_string(cfg.alpha),
                             failure_transcript("reflexivity", {verdict::solved(m1, m2, cfg, opts.rules, Player::ais)}));
        }
        ++res[2].instances;
        if (v12[t][a] != v21[t][a])
          res[2].violation(
              m1.name + "/" + m2.name + " asymmetric at theta=" + std::to_string(cfg.theta) +
                  " alpha=" + to_string(cfg.alpha),
              failure_transcript("symmetry", {verdict::solved(m1, m2, cfg, opts.rules, detail::winner_of(v12[t][a])),
                                              verdict::solved(m2, m1, cfg, opts.rules, detail::winner_of(v21[t][a]))}));
        if (iso) {
          ++res[3].instances;
          if (!v12[t][a])
            res[3].violation(m1.name + " ≅ " + m2.name + " but AIS wins",
                             failure_transcript("iso-implies-e0", {verdict::iso(m1, m2, true),
                                                                   verdict::solved(m1, m2, cfg, opts.rules, Player::ais)}));
        }
        ++res[4].instances;
        if (v12[t][a] != vcopy[t][a])
          res[4].violation(
              m1.name + "/" + m2.name + " verdict changes under relabelling",
              failure_transcript("iso-invariance", {verdict::solved(m1, m2, cfg, opts.rules, detail::winner_of(v12[t][a])),
                                                    verdict::solved(c1, c2, cfg, opts.rules, detail::winner_of(vcopy[t][a]))}));
        for (std::size_t t2 = 0; t2 <= t; ++t2)
          for (std::size_t a2 = 0; a2 <= a; ++a2) {
            if (grid.thetas[t2] > grid.thetas[t] || grid.alphas[a2] > grid.alphas[a]) continue;
            for (const auto* v : {&v12, &v21}) {
              ++res[5].instances;
              if ((*v)[t][a] && !(*v)[t2][a2]) {
                const Structure& l = v == &v12 ? m1 : m2;
                const Structure& r = v == &v12 ? m2 : m1;
                res[5].violation(l.name + "/" + r.name + " ISO at (" + std::to_string(grid.thetas[t]) + "," +
                                     std::to_string(grid.alphas[a]) + ") but not at (" +
                                     std::to_string(grid.thetas[t2]) + "," + std::to_string(grid.alphas[a2]) + ")",
                                 failure_transcript("monotonicity",
                                                    {verdict::solved(l, r, cfg, opts.rules, Player::iso),
                                                     verdict::solved(l, r, detail::at(grid, t2, a2), opts.rules, Player::ais)}));
              }
            }
          }
        if (v12[t][a]) {
          std::vector<std::string> symbols;
          for (const auto& [p, ar] : m1.vocab.predicates) symbols.push_back(p);
          for (const auto& [f, ar] : m1.vocab.functions) symbols.push_back(f);
          for (const auto& drop : symbols) {
            Vocabulary sub = m1.vocab;
            sub.predicates.erase(drop);
            sub.functions.erase(drop);
            const Structure r1 = reduct(m1, sub), r2 = reduct(m2, sub);
            ++res[6].instances;
            const Player w = solve(r1, r2, cfg, opts.rules).winner;
            if (w != Player::iso)
              res[6].violation(m1.name + "/" + m2.name + " loses E0 after dropping " + drop,
                               failure_transcript("reduct", {verdict::solved(m1, m2, cfg, opts.rules, Player::iso),
                                                             verdict::solved(r1, r2, cfg, opts.rules, w)}));
          }
        }
      }
    }
    for (std::size_t c = 0; c < names.size(); ++c) res[c].name = names[c];
    parts[k] = std::move(res);
  }, opts.threads);

  SuiteReport report{"a12", corpus.spec, detail::merge_checks(names, parts), 0};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// rank = IsoStable  <=>  isomorphic, for pairs of size <= theta.
inline SuiteReport check_rigidity(const Corpus& corpus, int theta, GammaMode mode = GammaMode::bs,
                                  const HarnessOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto& fam = corpus.family.members;
  const auto pairs = detail::unordered_pairs(fam.size(), true);
  std::vector<std::vector<CheckResult>> parts(pairs.size(), std::vector<CheckResult>(1));
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    CheckResult& res = parts[k][0];
    if (static_cast<int>(fam[i].size()) > theta || static_cast<int>(fam[j].size()) > theta) {
      ++res.skipped;
      return;
    }
    ++res.instances;
    const Rank r = rank(fam[i], fam[j], theta, mode);
    const bool iso = isomorphic(fam[i], fam[j]).isomorphic;
    if (r.stable() != iso)
      res.violation(fam[i].name + "/" + fam[j].name + ": rank " + to_string(r) +
                        (iso ? " but isomorphic" : " but not isomorphic"),
                    failure_transcript("rigidity", {verdict::ranked(fam[i], fam[j], theta, mode, r),
                                                    verdict::iso(fam[i], fam[j], iso)}));
  }, opts.threads);
  SuiteReport report{"rigidity", corpus.spec, detail::merge_checks({"rigidity"}, parts), 0};
  if (report.checks[0].skipped)
    report.checks[0].note = "pairs with a structure larger than theta skipped";
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// back_and_forth_equiv(m1, m2, beta, theta)  =>  ISO wins at Fin(beta).
inline SuiteReport check_bridge(const Corpus& corpus, const std::vector<int>& betas,
                                const std::vector<int>& thetas, GammaMode mode = GammaMode::bs,
                                const HarnessOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const auto& fam = corpus.family.members;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j) pairs.emplace_back(i, j);
  std::vector<std::vector<CheckResult>> parts(pairs.size(), std::vector<CheckResult>(1));
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    CheckResult& res = parts[k][0];
    for (int theta : thetas) {
      Solver solver(Game(fam[i], fam[j], GameConfig{mode, theta, Clock::stable_clock()}, opts.rules));
      for (int beta : betas) {
        if (!back_and_forth_equiv(fam[i], fam[j], beta, theta)) continue;
        ++res.instances;
        if (solver.solve(beta) != Player::iso) {
          const GameConfig cfg{mode, theta, Clock::fin(beta)};
          res.violation(fam[i].name + "/" + fam[j].name + " back-and-forth equivalent but AIS wins",
                        failure_transcript("bridge", {verdict::bf(fam[i], fam[j], beta, theta, true),
                                                      verdict::solved(fam[i], fam[j], cfg, opts.rules, Player::ais)}));
        }
      }
    }
  }, opts.threads);
  SuiteReport report{"bridge", corpus.spec, detail::merge_checks({"bridge"}, parts), 0};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Strategy composition for products and sums.

// Product-game state from two component states with equal n and beta:
// A^l = A^l(s1) × A^l(s2), h(b,c) = max(h1(b), h2(c)), g(b,c) = (g1 b, g2 c)
// where both are defined. Index of (b,c) on side l is b*|M_{2,l}| + c.
inline State compose_product_state(const State& s1, const State& s2) {
  if (s1.n != s2.n || s1.beta != s2.beta) throw Error("counter-mismatch");
  State out;
  out.n = s1.n;
  out.beta = s1.beta;
  for (int side = 0; side < 2; ++side) {
    const int w = static_cast<int>(s2.debt[side].size());
    out.debt[side].assign(s1.debt[side].size() * s2.debt[side].size(), kAbsent);
    for (int b : s1.members(side))
      for (int c : s2.members(side))
        out.debt[side][b * w + c] = std::max(s1.debt[side][b], s2.debt[side][c]);
  }
  const int w_left = static_cast<int>(s2.debt[0].size());
  const int w_right = static_cast<int>(s2.debt[1].size());
  out.g.assign(out.debt[0].size(), -1);
  for (int b = 0; b < static_cast<int>(s1.g.size()); ++b)
    for (int c = 0; c < static_cast<int>(s2.g.size()); ++c)
      if (s1.g[b] >= 0 && s2.g[c] >= 0) out.g[b * w_left + c] = s1.g[b] * w_right + s2.g[c];
  return out;
}

// Sum-game state: the tagged union, left component first.
inline State compose_sum_state(const State& s1, const State& s2) {
  if (s1.n != s2.n || s1.beta != s2.beta) throw Error("counter-mismatch");
  State out;
  out.n = s1.n;
  out.beta = s1.beta;
  for (int side = 0; side < 2; ++side) {
    out.debt[side] = s1.debt[side];
    out.debt[side].insert(out.debt[side].end(), s2.debt[side].begin(), s2.debt[side].end());
  }
  const int off = static_cast<int>(s1.debt[1].size());
  out.g = s1.g;
  for (int b : s2.g) out.g.push_back(b < 0 ? -1 : b + off);
  return out;
}

enum class Composite { product, sum };

// ISO in the composite game, playing the composition of solver-backed ISO
// strategies in the two component games. Tracks the component positions.
class ComposedIso {
 public:
  ComposedIso(Composite kind, const Game& composite, std::shared_ptr<Solver> c1,
              std::shared_ptr<Solver> c2, State s1, State s2)
      : kind_(kind), game_(composite), comp_{std::move(c1), std::move(c2)}, s_{std::move(s1), std::move(s2)} {}

  // Composite response, or nullopt when no pair of winning component
  // responses composes into a legal composite response.
  std::optional<State> respond(const State& ps, const AisMove& mv) {
    const int side = mv.iota - 1;
    AisMove sub[2];
    for (int k = 0; k < 2; ++k) {
      std::set<int> set;
      for (int e : s_[k].members(side)) set.insert(e);
      for (int e : mv.set) {
        auto coord = split(side, e);
        if (coord.first == k || kind_ == Composite::product) set.insert(coord.second[k]);
      }
      if (static_cast<int>(set.size()) > comp_[k]->game().config().theta) return std::nullopt;
      sub[k] = AisMove{mv.beta_next, mv.iota, std::vector<int>(set.begin(), set.end())};
      if (!comp_[k]->game().is_legal_ais_move(s_[k], sub[k])) return std::nullopt;
    }
    const auto r1 = comp_[0]->winning_responses(s_[0], sub[0]);
    const auto r2 = comp_[1]->winning_responses(s_[1], sub[1]);
    for (const auto& a : r1)
      for (const auto& b : r2) {
        State t = build(ps, mv, a, b);
        if (!game_.check_response(ps, mv, t)) {
          s_[0] = a;
          s_[1] = b;
          return t;
        }
      }
    return std::nullopt;
  }

 private:
  // (component index for sums, per-component coordinates)
  std::pair<int, std::array<int, 2>> split(int side, int e) const {
    const int w1 = comp_[0]->game().structure(side).size();
    const int w2 = comp_[1]->game().structure(side).size();
    if (kind_ == Composite::product) return {-1, {e / w2, e % w2}};
    return e < w1 ? std::pair{0, std::array<int, 2>{e, -1}} : std::pair{1, std::array<int, 2>{-1, e - w1}};
  }

  // The composed successor, cut down to what clause E allows: the new sets
  // are A' and old ∪ images, new elements get max(n+1, composed debt), and
  // only the due set is matched.
  State build(const State& ps, const AisMove& mv, const State& a, const State& b) const {
    const State full = kind_ == Composite::product ? compose_product_state(a, b) : compose_sum_state(a, b);
    const int side = mv.iota - 1;
    const int other = 1 - side;
    State t = ps;
    t.beta = mv.beta_next;
    t.n = ps.n + 1;
    for (int e : mv.set)
      if (!ps.in_set(side, e)) t.debt[side][e] = std::max<Debt>(ps.n + 1, full.debt[side][e]);
    const IndexMap old = ps.oriented(side);
    const IndexMap composed = full.oriented(side);
    for (int e : ps.members(side)) {
      if (old[e] >= 0 || ps.debt[side][e] > ps.n) continue;
      const int y = composed[e];
      if (y < 0) continue;
      if (side == 0) t.g[e] = y; else t.g[y] = e;
      if (!t.in_set(other, y)) t.debt[other][y] = 0;
    }
    return t;
  }

  Composite kind_;
  const Game& game_;
  std::shared_ptr<Solver> comp_[2];
  State s_[2];
};

struct PlayoutResult {
  bool iso_won = true;
  PlayTranscript transcript;
  std::string failure;
};

// One random adversarial play: AIS picks uniformly among legal moves.
inline PlayoutResult composed_playout(Composite kind, const Structure& a1, const Structure& a2,
                                      const Structure& b1, const Structure& b2, const GameConfig& cfg,
                                      std::mt19937_64& rng, const RuleOptions& rules = {}) {
  // components: (a1 vs b1) and (a2 vs b2); composite: a1∘a2 vs b1∘b2
  auto compose = [&](const Structure& x, const Structure& y) {
    return kind == Composite::product ? direct_product(x, y) : disjoint_sum(x, y);
  };
  const Game composite(compose(a1, a2), compose(b1, b2), cfg, rules);
  auto c1 = std::make_shared<Solver>(Game(a1, b1, cfg, rules));
  auto c2 = std::make_shared<Solver>(Game(a2, b2, cfg, rules));
  PlayoutResult out;
  out.transcript.left = composite.structure(0).name();
  out.transcript.right = composite.structure(1).name();
  out.transcript.config = cfg;
  out.transcript.human_role = "none";
  auto s1 = c1->game().initial_state(cfg.alpha.value);
  auto s2 = c2->game().initial_state(cfg.alpha.value);
  auto ps = composite.initial_state(cfg.alpha.value);
  if (!s1 || !s2 || !c1->iso_wins(*s1) || !c2->iso_wins(*s2)) {
    out.failure = "components are not ISO wins";
    out.iso_won = false;
    return out;
  }
  if (!ps) {
    out.transcript.initial_valid = false;
    out.transcript.winner = Player::ais;
    out.iso_won = false;
    out.failure = "composite initial state is not a state";
    return out;
  }
  ComposedIso iso(kind, composite, c1, c2, *s1, *s2);
  State cur = *ps;
  while (cur.beta > 0) {
    const auto moves = composite.legal_ais_moves(cur);
    const AisMove mv = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    auto next = iso.respond(cur, mv);
    if (!next) {
      out.transcript.unanswered = mv;
      out.transcript.unanswered_by = "random";
      out.transcript.winner = Player::ais;
      out.iso_won = false;
      out.failure = "composition found no legal response";
      return out;
    }
    out.transcript.steps.push_back({mv, "random", *next, "composed"});
    cur = *next;
  }
  out.transcript.winner = Player::iso;
  return out;
}

namespace detail {

inline SuiteReport composite_theorem(Composite kind, const Corpus& corpus, const Grid& grid,
                                     const HarnessOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const bool product = kind == Composite::product;
  const std::string suite = product ? "a36-product" : "a36-sum";
  const auto& fam = corpus.family.members;
  const std::size_t n = fam.size();
  SuiteReport report{suite, corpus.spec, {}, 0};
  CheckResult theorem{product ? "product-theorem" : "sum-theorem"};
  CheckResult playouts{product ? "product-playouts" : "sum-playouts"};
  CheckResult agreement{"theorem-playout-agreement"};
  CheckResult finite_index{"finite-index-sum"};

  if (!product && !fam.empty() && !fam.front().vocab.relational()) {
    theorem.note = "skipped: sums need a relational vocabulary";
    report.checks = {theorem};
    return report;
  }

  std::vector<Structure> composite;  // index a*n + b
  composite.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      composite.push_back(product ? direct_product(fam[a], fam[b]) : disjoint_sum(fam[a], fam[b]));

  std::mt19937_64 rng(opts.seed);
  for (std::size_t t = 0; t < grid.thetas.size(); ++t)
    for (std::size_t al = 0; al < grid.alphas.size(); ++al) {
      const GameConfig cfg = at(grid, t, al);
      // component E0 matrix over ordered pairs
      std::vector<char> e0(n * n, 0);
      parallel_for(n * n, [&](std::size_t k) {
        e0[k] = solve(fam[k / n], fam[k % n], cfg, opts.rules).winner == Player::iso;
      }, opts.threads);

      // quadruple (a, b, c, d): a E0 c and b E0 d  =>  (a∘b) E0 (c∘d)
      std::vector<std::array<std::size_t, 4>> premises;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) {
          if (!e0[a * n + c]) continue;
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t d = 0; d < n; ++d)
              if (e0[b * n + d]) premises.push_back({a, b, c, d});
        }
      std::vector<char> verdicts(premises.size(), 0);
      parallel_for(premises.size(), [&](std::size_t k) {
        const auto [a, b, c, d] = premises[k];
        verdicts[k] = solve(composite[a * n + b], composite[c * n + d], cfg, opts.rules).winner == Player::iso;
      }, opts.threads);
      std::size_t theorem_failures_here = 0;
      for (std::size_t k = 0; k < premises.size(); ++k) {
        ++theorem.instances;
        if (verdicts[k]) continue;
        ++theorem_failures_here;
        const auto [a, b, c, d] = premises[k];
        theorem.violation(
            composite[a * n + b].name + " vs " + composite[c * n + d].name + " at theta=" +
                std::to_string(cfg.theta) + " alpha=" + to_string(cfg.alpha),
            failure_transcript(theorem.name, {verdict::solved(fam[a], fam[c], cfg, opts.rules, Player::iso),
                                              verdict::solved(fam[b], fam[d], cfg, opts.rules, Player::iso),
                                              verdict::solved(composite[a * n + b], composite[c * n + d], cfg,
                                                              opts.rules, Player::ais)}));
      }

      // finite-index sums with three components, sampled
      if (!product && !premises.empty()) {
        std::vector<std::size_t> pick(200);
        for (auto& p : pick) p = std::uniform_int_distribution<std::size_t>(0, premises.size() - 1)(rng);
        std::vector<char> ok(pick.size(), 1);
        std::vector<std::array<std::size_t, 2>> third(pick.size());
        std::vector<std::size_t> e0_pairs;
        for (std::size_t k = 0; k < n * n; ++k)
          if (e0[k]) e0_pairs.push_back(k);
        for (auto& th : third) {
          const std::size_t k = e0_pairs[std::uniform_int_distribution<std::size_t>(0, e0_pairs.size() - 1)(rng)];
          th = {k / n, k % n};
        }
        parallel_for(pick.size(), [&](std::size_t k) {
          const auto [a, b, c, d] = premises[pick[k]];
          Structure left = disjoint_sum(composite[a * n + b], fam[third[k][0]]);
          Structure right = disjoint_sum(composite[c * n + d], fam[third[k][1]]);
          ok[k] = solve(left, right, cfg, opts.rules).winner == Player::iso;
        }, opts.threads);
        for (std::size_t k = 0; k < pick.size(); ++k) {
          ++finite_index.instances;
          if (!ok[k]) {
            const auto [a, b, c, d] = premises[pick[k]];
            Structure left = disjoint_sum(composite[a * n + b], fam[third[k][0]]);
            Structure right = disjoint_sum(composite[c * n + d], fam[third[k][1]]);
            finite_index.violation(left.name + " vs " + right.name,
                                   failure_transcript("finite-index-sum",
                                                      {verdict::solved(left, right, cfg, opts.rules, Player::ais)}));
          }
        }
      }

      // composed-strategy playouts, spread over the grid
      const std::size_t points = grid.thetas.size() * grid.alphas.size();
      const std::size_t quota = static_cast<std::size_t>(opts.playouts) / points +
                                (t * grid.alphas.size() + al < static_cast<std::size_t>(opts.playouts) % points ? 1 : 0);
      if (premises.empty() || quota == 0) continue;
      std::vector<std::size_t> chosen(quota);
      std::vector<std::uint64_t> seeds(quota);
      for (std::size_t q = 0; q < quota; ++q) {
        chosen[q] = std::uniform_int_distribution<std::size_t>(0, premises.size() - 1)(rng);
        seeds[q] = rng();
      }
      std::vector<PlayoutResult> results(quota);
      parallel_for(quota, [&](std::size_t q) {
        const auto [a, b, c, d] = premises[chosen[q]];
        std::mt19937_64 local(seeds[q]);
        results[q] = composed_playout(kind, fam[a], fam[b], fam[c], fam[d], cfg, local, opts.rules);
      }, opts.threads);
      std::size_t losses_here = 0;
      for (std::size_t q = 0; q < quota; ++q) {
        ++playouts.instances;
        if (results[q].iso_won) continue;
        ++losses_here;
        const auto [a, b, c, d] = premises[chosen[q]];
        const Game g(composite[a * n + b], composite[c * n + d], cfg, opts.rules);
        playouts.violation(results[q].transcript.left + " vs " + results[q].transcript.right + ": " +
                               results[q].failure,
                           json{{"check", playouts.name},
                                {"playout", to_json(g, results[q].transcript)},
                                {"verdicts", json::array({verdict::solved(fam[a], fam[c], cfg, opts.rules, Player::iso),
                                                          verdict::solved(fam[b], fam[d], cfg, opts.rules, Player::iso)})}});
      }
      ++agreement.instances;
      if ((theorem_failures_here == 0) != (losses_here == 0))
        agreement.violation("theorem check and playouts disagree at theta=" + std::to_string(cfg.theta) +
                                " alpha=" + to_string(cfg.alpha),
                            failure_transcript("theorem-playout-agreement", {}));
    }
  report.checks = {theorem, playouts, agreement};
  if (!product) report.checks.push_back(finite_index);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace detail

inline SuiteReport check_product_theorem(const Corpus& corpus, const Grid& grid,
                                         const HarnessOptions& opts = {}) {
  return detail::composite_theorem(Composite::product, corpus, grid, opts);
}

inline SuiteReport check_sum_theorem(const Corpus& corpus, const Grid& grid,
                                     const HarnessOptions& opts = {}) {
  return detail::composite_theorem(Composite::sum, corpus, grid, opts);
}

}  // namespace shelab
