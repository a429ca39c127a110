#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shelab/error.hpp"

namespace shelab {

using ElementId = std::string;
using Tuple = std::vector<ElementId>;

// Predicates have arity >= 1; function symbols of arity 0 are constants.
struct Vocabulary {
  std::map<std::string, int> predicates;
  std::map<std::string, int> functions;

  bool has_symbol(const std::string& name) const {
    return predicates.contains(name) || functions.contains(name);
  }
  bool relational() const { return functions.empty(); }
  bool is_subvocabulary_of(const Vocabulary& other) const {
    auto within = [](const auto& small, const auto& big) {
      return std::all_of(small.begin(), small.end(), [&](const auto& kv) {
        auto it = big.find(kv.first);
        return it != big.end() && it->second == kv.second;
      });
    };
    return within(predicates, other.predicates) &&
           within(functions, other.functions);
  }
  std::vector<std::string> constants() const {
    std::vector<std::string> out;
    for (const auto& [name, arity] : functions)
      if (arity == 0) out.push_back(name);
    return out;
  }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

// A finite structure. The universe keeps declaration order; that order is
// the enumeration order used everywhere downstream.
struct Structure {
  std::string name;
  Vocabulary vocab;
  std::vector<ElementId> universe;
  std::map<std::string, std::set<Tuple>> relations;
  std::map<std::string, std::map<Tuple, ElementId>> functions;

  std::size_t size() const { return universe.size(); }
  bool contains(const ElementId& e) const {
    return std::find(universe.begin(), universe.end(), e) != universe.end();
  }

  // Equality ignores the name.
  bool same_content(const Structure& o) const {
    return vocab == o.vocab && universe == o.universe &&
           relations == o.relations && functions == o.functions;
  }
};

struct Violation {
  std::string code;
  std::string detail;
};

inline std::string join_tuple(const Tuple& t, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += sep;
    out += t[i];
  }
  return out;
}

namespace detail {

// Calls f(tuple) for every tuple in universe^arity, lexicographic order.
template <class F>
void for_each_tuple(const std::vector<ElementId>& universe, int arity, F&& f) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
  Tuple t(static_cast<std::size_t>(arity));
  if (universe.empty() && arity > 0) return;
  while (true) {
    for (int i = 0; i < arity; ++i) t[i] = universe[idx[i]];
    f(t);
    int pos = arity - 1;
    while (pos >= 0 && ++idx[pos] == universe.size()) idx[pos--] = 0;
    if (pos < 0) return;
  }
}

}  // namespace detail

// Reports the first violated Structure invariant, or nullopt when valid.
inline std::optional<Violation> validate_structure(const Structure& s) {
  for (const auto& [name, arity] : s.vocab.predicates) {
    if (arity < 1)
      return Violation{"bad-arity", "predicate " + name + " has arity < 1"};
    if (s.vocab.functions.contains(name))
      return Violation{"duplicate-symbol", name};
  }
  for (const auto& [name, arity] : s.vocab.functions)
    if (arity < 0) return Violation{"bad-arity", "function " + name};
  if (s.universe.empty()) return Violation{"empty-universe", s.name};
  std::set<ElementId> seen;
  for (const auto& e : s.universe)
    if (!seen.insert(e).second) return Violation{"duplicate-element", e};

  for (const auto& [name, tuples] : s.relations) {
    auto it = s.vocab.predicates.find(name);
    if (it == s.vocab.predicates.end())
      return Violation{"unknown-symbol", name};
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != it->second)
        return Violation{"tuple-arity", name + "(" + join_tuple(t) + ")"};
      for (const auto& e : t)
        if (!seen.contains(e))
          return Violation{"tuple-out-of-universe",
                           name + "(" + join_tuple(t) + ")"};
    }
  }
  for (const auto& [name, table] : s.functions) {
    if (!s.vocab.functions.contains(name))
      return Violation{"unknown-symbol", name};
  }
  for (const auto& [name, arity] : s.vocab.functions) {
    auto fit = s.functions.find(name);
    static const std::map<Tuple, ElementId> kEmpty;
    const auto& table = fit == s.functions.end() ? kEmpty : fit->second;
    for (const auto& [args, value] : table) {
      if (static_cast<int>(args.size()) != arity)
        return Violation{"tuple-arity", name + "(" + join_tuple(args) + ")"};
      for (const auto& e : args)
        if (!seen.contains(e))
          return Violation{"tuple-out-of-universe",
                           name + "(" + join_tuple(args) + ")"};
      if (!seen.contains(value))
        return Violation{"tuple-out-of-universe",
                         name + "(" + join_tuple(args) + ") = " + value};
    }
    std::optional<Violation> missing;
    detail::for_each_tuple(s.universe, arity, [&](const Tuple& t) {
      if (!missing && !table.contains(t))
        missing = Violation{"function-not-total",
                            name + "(" + join_tuple(t) + ")"};
    });
    if (missing) return missing;
  }
  return std::nullopt;
}

inline void require_valid(const Structure& s) {
  if (auto v = validate_structure(s)) throw Error(v->code, v->detail);
}

inline Structure reduct(const Structure& s, const Vocabulary& sub) {
  if (!sub.is_subvocabulary_of(s.vocab)) throw Error("not-subvocabulary");
  Structure out;
  out.name = s.name;
  out.vocab = sub;
  out.universe = s.universe;
  for (const auto& [name, arity] : sub.predicates) {
    auto it = s.relations.find(name);
    out.relations[name] = it == s.relations.end() ? std::set<Tuple>{} : it->second;
  }
  for (const auto& [name, arity] : sub.functions) {
    auto it = s.functions.find(name);
    if (it != s.functions.end()) out.functions[name] = it->second;
  }
  return out;
}

// Symbol renaming onto a target vocabulary.
struct Renaming {
  std::map<std::string, std::string> symbols;
  Vocabulary target;

  Renaming inverse(const Vocabulary& source) const {
    Renaming inv;
    inv.target = source;
    for (const auto& [from, to] : symbols) inv.symbols[to] = from;
    return inv;
  }
};

inline Structure rename(const Structure& s, const Renaming& pi) {
  std::set<std::string> images;
  auto transport = [&](const std::string& name, int arity, bool predicate) {
    auto it = pi.symbols.find(name);
    if (it == pi.symbols.end()) throw Error("not-bijection", "unmapped " + name);
    const auto& table = predicate ? pi.target.predicates : pi.target.functions;
    auto tt = table.find(it->second);
    if (tt == table.end()) {
      const auto& other = predicate ? pi.target.functions : pi.target.predicates;
      auto ot = other.find(it->second);
      if (ot != other.end() && ot->second != arity)
        throw Error("arity-mismatch", name + " -> " + it->second);
      throw Error("not-bijection", it->second + " not a target symbol of the same kind");
    }
    if (tt->second != arity)
      throw Error("arity-mismatch", name + " -> " + it->second);
    if (!images.insert(it->second).second)
      throw Error("not-bijection", "two symbols map to " + it->second);
    return it->second;
  };

  Structure out;
  out.name = s.name;
  out.vocab = pi.target;
  out.universe = s.universe;
  for (const auto& [name, arity] : s.vocab.predicates) {
    auto target = transport(name, arity, true);
    auto it = s.relations.find(name);
    out.relations[target] = it == s.relations.end() ? std::set<Tuple>{} : it->second;
  }
  for (const auto& [name, arity] : s.vocab.functions) {
    auto target = transport(name, arity, false);
    auto it = s.functions.find(name);
    if (it != s.functions.end()) out.functions[target] = it->second;
  }
  if (images.size() != pi.target.predicates.size() + pi.target.functions.size())
    throw Error("not-bijection", "target vocabulary not covered");
  return out;
}

// Either a restricted structure or the reason it is undefined.
struct Restriction {
  std::optional<Structure> structure;
  std::string undefined_reason;

  bool defined() const { return structure.has_value(); }
};

inline Restriction restrict_to_predicate(const Structure& s, const std::string& p) {
  auto it = s.vocab.predicates.find(p);
  if (it == s.vocab.predicates.end() || it->second != 1)
    throw Error("bad-predicate", p);
  std::set<ElementId> keep;
  if (auto rel = s.relations.find(p); rel != s.relations.end())
    for (const auto& t : rel->second) keep.insert(t[0]);
  if (keep.empty()) return {std::nullopt, "empty-restriction"};

  Structure out;
  out.name = s.name;
  out.vocab = s.vocab;
  for (const auto& e : s.universe)
    if (keep.contains(e)) out.universe.push_back(e);
  auto inside = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(),
                       [&](const ElementId& e) { return keep.contains(e); });
  };
  for (const auto& [name, arity] : s.vocab.predicates) {
    auto& target = out.relations[name];
    if (auto r = s.relations.find(name); r != s.relations.end())
      for (const auto& t : r->second)
        if (inside(t)) target.insert(t);
  }
  for (const auto& [name, arity] : s.vocab.functions) {
    auto& target = out.functions[name];
    auto f = s.functions.find(name);
    if (f == s.functions.end()) continue;
    for (const auto& [args, value] : f->second) {
      if (!inside(args)) continue;
      if (!keep.contains(value)) return {std::nullopt, "not-closed"};
      target[args] = value;
    }
  }
  return {std::move(out), {}};
}

inline std::string tagged(int side, const ElementId& e) {
  return std::to_string(side) + ":" + e;
}

inline Structure disjoint_sum(const Structure& m1, const Structure& m2) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  if (!m1.vocab.functions.empty()) throw Error("functions-in-sum");
  Structure out;
  out.name = m1.name + "+" + m2.name;
  out.vocab = m1.vocab;
  for (const auto& e : m1.universe) out.universe.push_back(tagged(1, e));
  for (const auto& e : m2.universe) out.universe.push_back(tagged(2, e));
  for (const auto& [name, arity] : m1.vocab.predicates) {
    auto& target = out.relations[name];
    int side = 1;
    for (const Structure* m : {&m1, &m2}) {
      if (auto r = m->relations.find(name); r != m->relations.end())
        for (const auto& t : r->second) {
          Tuple tt;
          for (const auto& e : t) tt.push_back(tagged(side, e));
          target.insert(std::move(tt));
        }
      ++side;
    }
  }
  return out;
}

inline std::string pair_id(const ElementId& a, const ElementId& b) {
  return "(" + a + "," + b + ")";
}

// Universe is row-major: index i*|m2| + j holds (m1[i], m2[j]).
inline Structure direct_product(const Structure& m1, const Structure& m2) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  Structure out;
  out.name = m1.name + "x" + m2.name;
  out.vocab = m1.vocab;
  for (const auto& a : m1.universe)
    for (const auto& b : m2.universe) out.universe.push_back(pair_id(a, b));

  for (const auto& [name, arity] : m1.vocab.predicates) {
    auto& target = out.relations[name];
    auto r1 = m1.relations.find(name);
    auto r2 = m2.relations.find(name);
    if (r1 == m1.relations.end() || r2 == m2.relations.end()) continue;
    for (const auto& t1 : r1->second)
      for (const auto& t2 : r2->second) {
        Tuple t;
        for (int i = 0; i < arity; ++i) t.push_back(pair_id(t1[i], t2[i]));
        target.insert(std::move(t));
      }
  }
  for (const auto& [name, arity] : m1.vocab.functions) {
    auto& target = out.functions[name];
    const auto& f1 = m1.functions.at(name);
    const auto& f2 = m2.functions.at(name);
    for (const auto& [a1, v1] : f1)
      for (const auto& [a2, v2] : f2) {
        Tuple args;
        for (int i = 0; i < arity; ++i) args.push_back(pair_id(a1[i], a2[i]));
        target[std::move(args)] = pair_id(v1, v2);
      }
  }
  return out;
}

// Dense index-based form of a valid structure, used by every search.
// Symbols are numbered in vocabulary (map) order, so two interpretations of
// the same vocabulary agree on symbol numbers.
class Interp {
 public:
  Interp() = default;

  explicit Interp(const Structure& s) : name_(s.name), vocab_(s.vocab), ids_(s.universe) {
    require_valid(s);
    for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = static_cast<int>(i);
    const std::size_t n = ids_.size();
    for (const auto& [name, arity] : vocab_.predicates) {
      Table t{name, arity, {}};
      t.cells.assign(checked_pow(n, arity), 0);
      if (auto r = s.relations.find(name); r != s.relations.end())
        for (const auto& tuple : r->second) t.cells[offset(tuple)] = 1;
      preds_.push_back(std::move(t));
    }
    for (const auto& [name, arity] : vocab_.functions) {
      Table t{name, arity, {}};
      t.cells.assign(checked_pow(n, arity), 0);
      for (const auto& [args, value] : s.functions.at(name))
        t.cells[offset(args)] = index_.at(value);
      funcs_.push_back(std::move(t));
    }
  }

  const std::string& name() const { return name_; }
  const Vocabulary& vocab() const { return vocab_; }
  int size() const { return static_cast<int>(ids_.size()); }
  const ElementId& id(int e) const { return ids_[static_cast<std::size_t>(e)]; }
  const std::vector<ElementId>& ids() const { return ids_; }
  std::optional<int> index(const ElementId& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int predicate_count() const { return static_cast<int>(preds_.size()); }
  int predicate_arity(int p) const { return preds_[p].arity; }
  const std::string& predicate_name(int p) const { return preds_[p].name; }
  int function_count() const { return static_cast<int>(funcs_.size()); }
  int function_arity(int f) const { return funcs_[f].arity; }
  const std::string& function_name(int f) const { return funcs_[f].name; }

  bool holds(int p, std::span<const int> args) const {
    return preds_[p].cells[offset(args)] != 0;
  }
  int apply(int f, std::span<const int> args) const {
    return funcs_[f].cells[offset(args)];
  }

 private:
  struct Table {
    std::string name;
    int arity;
    std::vector<int> cells;
  };

  static std::size_t checked_pow(std::size_t n, int k) {
    std::size_t out = 1;
    for (int i = 0; i < k; ++i) {
      out *= n;
      if (out > (std::size_t{1} << 24)) throw BudgetError("interpretation-too-large");
    }
    return out;
  }
  std::size_t offset(std::span<const int> args) const {
    std::size_t off = 0;
    for (int a : args) off = off * ids_.size() + static_cast<std::size_t>(a);
    return off;
  }
  std::size_t offset(const Tuple& t) const {
    std::size_t off = 0;
    for (const auto& e : t) off = off * ids_.size() + static_cast<std::size_t>(index_.at(e));
    return off;
  }

  std::string name_;
  Vocabulary vocab_;
  std::vector<ElementId> ids_;
  std::unordered_map<ElementId, int> index_;
  std::vector<Table> preds_;
  std::vector<Table> funcs_;
};

// ---------------------------------------------------------------------------
// Atomic formulas. Arguments are variables x_i or individual constants.

struct Term {
  enum class Kind { variable, constant };
  Kind kind = Kind::variable;
  int var = 0;
  std::string constant;

  static Term x(int i) { return {Kind::variable, i, {}}; }
  static Term c(std::string name) { return {Kind::constant, 0, std::move(name)}; }
};

// P(t...), t0 = t1, or t0 = F(t1...).
struct AtomicFormula {
  enum class Kind { predicate, equality, function_equality };
  Kind kind = Kind::predicate;
  std::string symbol;
  std::vector<Term> args;

  static AtomicFormula pred(std::string p, std::vector<Term> args) {
    return {Kind::predicate, std::move(p), std::move(args)};
  }
  static AtomicFormula eq(Term a, Term b) {
    return {Kind::equality, {}, {std::move(a), std::move(b)}};
  }
  static AtomicFormula fun_eq(Term lhs, std::string f, std::vector<Term> args) {
    std::vector<Term> all{std::move(lhs)};
    all.insert(all.end(), args.begin(), args.end());
    return {Kind::function_equality, std::move(f), std::move(all)};
  }
};

inline bool eval_atomic(const Structure& s, const AtomicFormula& phi,
                        std::span<const ElementId> assignment) {
  auto value = [&](const Term& t) -> ElementId {
    if (t.kind == Term::Kind::variable) {
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= assignment.size())
        throw Error("unbound-variable", "x" + std::to_string(t.var));
      return assignment[static_cast<std::size_t>(t.var)];
    }
    auto f = s.functions.find(t.constant);
    if (f == s.functions.end() || !s.vocab.functions.contains(t.constant) ||
        s.vocab.functions.at(t.constant) != 0)
      throw Error("unknown-symbol", t.constant);
    return f->second.at({});
  };
  switch (phi.kind) {
    case AtomicFormula::Kind::equality:
      return value(phi.args.at(0)) == value(phi.args.at(1));
    case AtomicFormula::Kind::predicate: {
      if (!s.vocab.predicates.contains(phi.symbol)) throw Error("unknown-symbol", phi.symbol);
      Tuple t;
      for (const auto& a : phi.args) t.push_back(value(a));
      auto r = s.relations.find(phi.symbol);
      return r != s.relations.end() && r->second.contains(t);
    }
    case AtomicFormula::Kind::function_equality: {
      if (!s.vocab.functions.contains(phi.symbol)) throw Error("unknown-symbol", phi.symbol);
      Tuple args;
      for (std::size_t i = 1; i < phi.args.size(); ++i) args.push_back(value(phi.args[i]));
      return value(phi.args.at(0)) == s.functions.at(phi.symbol).at(args);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Gamma preservation.

enum class GammaMode { at, bs };

inline const char* to_string(GammaMode m) { return m == GammaMode::at ? "at" : "bs"; }

// Injective partial map between universes, by element id.
using PartialMap = std::map<ElementId, ElementId>;

// Index-level partial map: image[a] = b or -1.
using IndexMap = std::vector<int>;

namespace detail {

// The argument pool for atomic formulas under a partial map: one entry per
// dom(g) element and one per constant symbol, each as (left, right) values.
inline void gamma_terms(const Interp& m1, const Interp& m2, const IndexMap& g,
                        std::vector<int>& left, std::vector<int>& right) {
  left.clear();
  right.clear();
  for (int a = 0; a < static_cast<int>(g.size()); ++a)
    if (g[a] >= 0) {
      left.push_back(a);
      right.push_back(g[a]);
    }
  for (int f = 0; f < m1.function_count(); ++f)
    if (m1.function_arity(f) == 0) {
      left.push_back(m1.apply(f, {}));
      right.push_back(m2.apply(f, {}));
    }
}

// Enumerates all k-tuples over [0, pool) and calls f(indices); stops early
// when f returns false.
template <class F>
bool all_index_tuples(int pool, int k, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  if (k > 0 && pool == 0) return true;
  while (true) {
    if (!f(std::span<const int>(idx))) return false;
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == pool) idx[pos--] = 0;
    if (pos < 0) return true;
  }
}

}  // namespace detail

// Checks clause B(f): every atomic formula (AT) -- or every atomic and
// negated atomic formula (BS) -- over dom(g) and the constants has the same
// truth value on both sides.
inline bool preserves_gamma(const Interp& m1, const Interp& m2, const IndexMap& g,
                            GammaMode mode) {
  std::vector<int> left, right;
  detail::gamma_terms(m1, m2, g, left, right);
  const int pool = static_cast<int>(left.size());
  std::vector<int> a1, a2;

  // BS also evaluates the negated formula; the outcome is the same.
  auto agree = [mode](bool l, bool r) {
    if (mode == GammaMode::at) return l == r;
    return l == r && !l == !r;
  };

  for (int i = 0; i < pool; ++i)
    for (int j = 0; j < pool; ++j)
      if (!agree(left[i] == left[j], right[i] == right[j])) return false;

  for (int p = 0; p < m1.predicate_count(); ++p) {
    const int k = m1.predicate_arity(p);
    a1.assign(k, 0);
    a2.assign(k, 0);
    bool ok = detail::all_index_tuples(pool, k, [&](std::span<const int> idx) {
      for (int i = 0; i < k; ++i) {
        a1[i] = left[idx[i]];
        a2[i] = right[idx[i]];
      }
      return agree(m1.holds(p, a1), m2.holds(p, a2));
    });
    if (!ok) return false;
  }
  for (int f = 0; f < m1.function_count(); ++f) {
    const int k = m1.function_arity(f);
    if (k == 0) continue;  // x = c is covered by the equality pass
    a1.assign(k, 0);
    a2.assign(k, 0);
    bool ok = detail::all_index_tuples(pool, k + 1, [&](std::span<const int> idx) {
      for (int i = 0; i < k; ++i) {
        a1[i] = left[idx[i + 1]];
        a2[i] = right[idx[i + 1]];
      }
      return agree(left[idx[0]] == m1.apply(f, a1), right[idx[0]] == m2.apply(f, a2));
    });
    if (!ok) return false;
  }
  return true;
}

inline IndexMap to_index_map(const Interp& m1, const Interp& m2, const PartialMap& g) {
  IndexMap out(static_cast<std::size_t>(m1.size()), -1);
  std::set<int> used;
  for (const auto& [a, b] : g) {
    auto ia = m1.index(a);
    auto ib = m2.index(b);
    if (!ia || !ib) throw Error("map-out-of-universe", a + " -> " + b);
    if (!used.insert(*ib).second) throw Error("map-not-injective", b);
    out[*ia] = *ib;
  }
  return out;
}

inline bool preserves_gamma(const Structure& m1, const Structure& m2, const PartialMap& g,
                            GammaMode mode) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  Interp i1(m1), i2(m2);
  return preserves_gamma(i1, i2, to_index_map(i1, i2, g), mode);
}

// Agreement on atomic sentences: the empty map preserves Gamma.
inline bool agree_on_atomic_sentences(const Interp& m1, const Interp& m2) {
  return preserves_gamma(m1, m2, IndexMap(static_cast<std::size_t>(m1.size()), -1),
                         GammaMode::bs);
}

// ---------------------------------------------------------------------------
// Isomorphism by backtracking with degree-signature pruning.

namespace detail {

inline std::vector<std::vector<int>> element_signatures(const Interp& m) {
  const int n = m.size();
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
  std::vector<int> args;
  for (int p = 0; p < m.predicate_count(); ++p) {
    const int k = m.predicate_arity(p);
    // per element, per argument position: number of tuples containing it there
    std::vector<std::vector<int>> count(static_cast<std::size_t>(n), std::vector<int>(k, 0));
    std::vector<int> diagonal(static_cast<std::size_t>(n), 0);
    args.assign(k, 0);
    all_index_tuples(n, k, [&](std::span<const int> idx) {
      for (int i = 0; i < k; ++i) args[i] = idx[i];
      if (m.holds(p, args)) {
        for (int i = 0; i < k; ++i) ++count[idx[i]][i];
        if (std::all_of(idx.begin(), idx.end(), [&](int v) { return v == idx[0]; }))
          diagonal[idx[0]] = 1;
      }
      return true;
    });
    for (int e = 0; e < n; ++e) {
      sig[e].insert(sig[e].end(), count[e].begin(), count[e].end());
      sig[e].push_back(diagonal[e]);
    }
  }
  return sig;
}

}  // namespace detail

inline std::optional<IndexMap> find_isomorphism(const Interp& m1, const Interp& m2) {
  if (m1.size() != m2.size()) return std::nullopt;
  if (!(m1.vocab() == m2.vocab())) return std::nullopt;
  const int n = m1.size();
  auto s1 = detail::element_signatures(m1);
  auto s2 = detail::element_signatures(m2);
  {
    auto a = s1, b = s2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  if (!agree_on_atomic_sentences(m1, m2)) return std::nullopt;

  IndexMap g(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto search = [&](auto&& self, int a) -> bool {
    if (a == n) return true;  // bijective since sizes agree
    for (int b = 0; b < n; ++b) {
      if (used[b] || s1[a] != s2[b]) continue;
      g[a] = b;
      used[b] = 1;
      if (preserves_gamma(m1, m2, g, GammaMode::at) && self(self, a + 1)) return true;
      g[a] = -1;
      used[b] = 0;
    }
    return false;
  };
  if (search(search, 0)) return g;
  return std::nullopt;
}

struct IsomorphismResult {
  bool isomorphic = false;
  PartialMap witness;
};

inline IsomorphismResult isomorphic(const Structure& m1, const Structure& m2) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  Interp i1(m1), i2(m2);
  auto g = find_isomorphism(i1, i2);
  if (!g) return {};
  IsomorphismResult out{true, {}};
  for (int a = 0; a < i1.size(); ++a) out.witness[i1.id(a)] = i2.id((*g)[a]);
  return out;
}

}  // namespace shelab
