#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "shelab/parallel.hpp"
#include "shelab/solver.hpp"

namespace shelab {

// A named finite list of structures over one vocabulary. The E1 closure is
// computed inside a family, so it can be finer than the closure over all
// models.
struct Family {
  std::string name;
  std::vector<Structure> members;

  std::optional<std::size_t> find(const std::string& n) const {
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i].name == n) return i;
    return std::nullopt;
  }
  const Structure& at(const std::string& n) const {
    auto i = find(n);
    if (!i) throw Error("unknown-structure", n);
    return members[*i];
  }
  void validate() const {
    std::set<std::string> names;
    for (const auto& m : members) {
      if (!names.insert(m.name).second) throw Error("duplicate-name", m.name);
      if (!(m.vocab == members.front().vocab)) throw Error("vocab-mismatch", m.name);
      require_valid(m);
    }
  }
};

// Consecutive names are E0-linked at the partition's configuration.
struct WitnessChain {
  std::vector<std::string> names;
};

struct Partition {
  GameConfig config;
  std::vector<std::vector<std::string>> blocks;
  // e0[i][j] for family indices, i != j; diagonal true
  std::vector<std::vector<char>> e0;
  std::vector<std::string> order;  // family member names, index order
  std::map<std::pair<std::string, std::string>, WitnessChain> witnesses;

  std::optional<std::size_t> block_of(const std::string& n) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (std::find(blocks[b].begin(), blocks[b].end(), n) != blocks[b].end()) return b;
    return std::nullopt;
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

// Closure of E0 to an equivalence relation within the family. E0 is
// evaluated on unordered pairs (i < j) in the (i, j) orientation; witness
// chains are shortest E0 paths.
inline Partition e1_partition(const Family& fam, const GameConfig& cfg,
                              unsigned threads = default_threads()) {
  fam.validate();
  const std::size_t n = fam.members.size();
  Partition p;
  p.config = cfg;
  p.e0.assign(n, std::vector<char>(n, 0));
  for (const auto& m : fam.members) p.order.push_back(m.name);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    p.e0[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<char> verdict(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    verdict[k] = e0_equiv(fam.members[i], fam.members[j], cfg);
  }, threads);

  detail::UnionFind uf(n);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (verdict[k]) {
      const auto [i, j] = pairs[k];
      p.e0[i][j] = p.e0[j][i] = 1;
      uf.unite(i, j);
    }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  for (const auto& [root, idx] : groups) {
    std::vector<std::string> block;
    for (auto i : idx) block.push_back(fam.members[i].name);
    p.blocks.push_back(std::move(block));

    for (std::size_t s : idx) {
      // BFS from s inside the block
      std::vector<long> prev(n, -2);
      std::queue<std::size_t> q;
      prev[s] = -1;
      q.push(s);
      while (!q.empty()) {
        auto u = q.front();
        q.pop();
        for (std::size_t v = 0; v < n; ++v)
          if (p.e0[u][v] && prev[v] == -2) {
            prev[v] = static_cast<long>(u);
            q.push(v);
          }
      }
      for (std::size_t t : idx) {
        if (t <= s) continue;
        WitnessChain chain;
        for (long v = static_cast<long>(t); v != -1; v = prev[static_cast<std::size_t>(v)])
          chain.names.push_back(fam.members[static_cast<std::size_t>(v)].name);
        std::reverse(chain.names.begin(), chain.names.end());
        p.witnesses[{fam.members[s].name, fam.members[t].name}] = std::move(chain);
      }
    }
  }
  return p;
}

// Re-solves every link of every witness chain.
inline bool verify_witnesses(const Family& fam, const Partition& p) {
  for (const auto& [pair, chain] : p.witnesses) {
    if (chain.names.empty() || chain.names.front() != pair.first ||
        chain.names.back() != pair.second)
      return false;
    for (std::size_t i = 0; i + 1 < chain.names.size(); ++i)
      if (!e0_equiv(fam.at(chain.names[i]), fam.at(chain.names[i + 1]), p.config)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sentences given by a triple and representatives: M satisfies the sentence
// iff M is E1-equivalent (inside the closure family) to a representative.

struct SentenceL1 {
  GammaMode mode = GammaMode::bs;
  int theta = 1;
  Clock alpha = Clock::fin(0);
  std::vector<std::string> representatives;

  GameConfig config() const { return {mode, theta, alpha}; }
};

inline std::set<std::string> satisfaction_set(const SentenceL1& psi, const Family& fam) {
  std::set<std::string> out;
  if (psi.representatives.empty()) return out;
  for (const auto& r : psi.representatives) (void)fam.at(r);
  const Partition p = e1_partition(fam, psi.config());
  for (const auto& block : p.blocks) {
    const bool hit = std::any_of(block.begin(), block.end(), [&](const std::string& n) {
      return std::find(psi.representatives.begin(), psi.representatives.end(), n) !=
             psi.representatives.end();
    });
    if (hit) out.insert(block.begin(), block.end());
  }
  return out;
}

inline bool models_sentence(const Structure& m, const SentenceL1& psi, const Family& fam) {
  if (!fam.members.empty() && !(m.vocab == fam.members.front().vocab))
    throw Error("vocab-mismatch", m.name);
  if (psi.representatives.empty()) return false;
  Family closure = fam;
  if (auto i = closure.find(m.name)) {
    if (!closure.members[*i].same_content(m)) throw Error("duplicate-name", m.name);
  } else {
    closure.members.push_back(m);
  }
  return satisfaction_set(psi, closure).contains(m.name);
}

namespace detail {

inline SentenceL1 from_blocks(const SentenceL1& triple, const Partition& p,
                              const std::function<bool(const std::string&)>& keep) {
  SentenceL1 out = triple;
  out.representatives.clear();
  for (const auto& block : p.blocks)
    if (keep(block.front())) out.representatives.push_back(block.front());
  return out;
}

}  // namespace detail

// Conjunction at the common refinement triple (max theta, max alpha).
inline SentenceL1 sentence_and(const SentenceL1& a, const SentenceL1& b, const Family& fam) {
  SentenceL1 triple{a.mode, std::max(a.theta, b.theta), std::max(a.alpha, b.alpha), {}};
  const auto sa = satisfaction_set(a, fam);
  const auto sb = satisfaction_set(b, fam);
  const Partition p = e1_partition(fam, triple.config());
  return detail::from_blocks(triple, p, [&](const std::string& n) {
    return sa.contains(n) && sb.contains(n);
  });
}

// Negation: representatives of the complementary blocks.
inline SentenceL1 sentence_not(const SentenceL1& a, const Family& fam) {
  const auto sa = satisfaction_set(a, fam);
  const Partition p = e1_partition(fam, a.config());
  return detail::from_blocks(a, p, [&](const std::string& n) { return !sa.contains(n); });
}

// ---------------------------------------------------------------------------
// Classical oracles.

namespace detail {

class BackAndForth {
 public:
  BackAndForth(const Interp& m1, const Interp& m2, int width)
      : m_{&m1, &m2}, width_(width) {}

  bool wins(const IndexMap& g, int depth) {
    if (!preserves_gamma(*m_[0], *m_[1], g, GammaMode::bs)) return false;
    if (depth == 0) return true;
    std::string key(g.begin(), g.end());
    key.push_back(static_cast<char>(depth));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = true;
    for (int side = 0; side < 2 && result; ++side) {
      const int n = m_[side]->size();
      // every subset of size <= width; already-matched elements are forced
      for (unsigned mask = 0; mask < (1u << n) && result; ++mask) {
        if (std::popcount(mask) > width_) continue;
        if (!extend(g, side, mask, depth)) result = false;
      }
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  bool extend(const IndexMap& g, int side, unsigned mask, int depth) {
    const IndexMap inv = invert(g);
    std::vector<int> open;
    for (int e = 0; e < m_[side]->size(); ++e)
      if ((mask >> e) & 1u) {
        const bool mapped = side == 0 ? g[e] >= 0 : inv[e] >= 0;
        if (!mapped) open.push_back(e);
      }
    IndexMap work = g;
    auto go = [&](auto&& self, std::size_t k, IndexMap& cur) -> bool {
      if (k == open.size()) return wins(cur, depth - 1);
      const IndexMap ci = invert(cur);
      const int other = 1 - side;
      for (int t = 0; t < m_[other]->size(); ++t) {
        const bool used = other == 1 ? ci[t] >= 0 : cur[t] >= 0;
        if (used) continue;
        if (side == 0) cur[open[k]] = t; else cur[t] = open[k];
        const bool ok = preserves_gamma(*m_[0], *m_[1], cur, GammaMode::bs) && self(self, k + 1, cur);
        if (side == 0) cur[open[k]] = -1; else cur[t] = -1;
        if (ok) return true;
      }
      return false;
    };
    return go(go, 0, work);
  }

  IndexMap invert(const IndexMap& g) const {
    IndexMap inv(static_cast<std::size_t>(m_[1]->size()), -1);
    for (int a = 0; a < static_cast<int>(g.size()); ++a)
      if (g[a] >= 0) inv[g[a]] = a;
    return inv;
  }

  const Interp* m_[2];
  int width_;
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace detail

// Depth-stratified back-and-forth with set moves of size <= width on either
// side; the finite stand-in for L_{∞,width⁺,depth}-equivalence.
inline bool back_and_forth_equiv(const Structure& m1, const Structure& m2, int depth, int width) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  Interp i1(m1), i2(m2);
  if (i1.size() > 20 || i2.size() > 20) throw BudgetError("structure-too-large");
  detail::BackAndForth bf(i1, i2, width);
  return bf.wins(IndexMap(static_cast<std::size_t>(i1.size()), -1), depth);
}

// Classical r-round Ehrenfeucht-Fraisse game, one pebble per round; true iff
// Duplicator wins. Positions are pebble sequences, searched without memo.
inline bool ef_equiv_fo(const Structure& m1, const Structure& m2, int rounds) {
  if (!(m1.vocab == m2.vocab)) throw Error("vocab-mismatch");
  Interp i1(m1), i2(m2);
  std::vector<int> left, right;
  auto partial_iso = [&]() {
    IndexMap g(static_cast<std::size_t>(i1.size()), -1);
    for (std::size_t k = 0; k < left.size(); ++k) {
      if (g[left[k]] >= 0 && g[left[k]] != right[k]) return false;
      g[left[k]] = right[k];
    }
    std::vector<int> hits(static_cast<std::size_t>(i2.size()), 0);
    for (int b : g)
      if (b >= 0 && hits[b]++) return false;
    return preserves_gamma(i1, i2, g, GammaMode::at);
  };
  auto duplicator = [&](auto&& self, int r) -> bool {
    if (!partial_iso()) return false;
    if (r == 0) return true;
    for (int side = 0; side < 2; ++side) {
      const Interp& spoil = side == 0 ? i1 : i2;
      const Interp& dup = side == 0 ? i2 : i1;
      for (int a = 0; a < spoil.size(); ++a) {
        bool answered = false;
        for (int b = 0; b < dup.size() && !answered; ++b) {
          left.push_back(side == 0 ? a : b);
          right.push_back(side == 0 ? b : a);
          answered = self(self, r - 1);
          left.pop_back();
          right.pop_back();
        }
        if (!answered) return false;
      }
    }
    return true;
  };
  return duplicator(duplicator, rounds);
}

// Every B_b = {a : a R b} has at most theta elements. For a finite structure
// the finitely-many-cover condition then holds automatically.
inline bool theta_cover_check(const Structure& m, const std::string& r, int theta) {
  auto it = m.vocab.predicates.find(r);
  if (it == m.vocab.predicates.end() || it->second != 2) throw Error("bad-predicate", r);
  std::map<ElementId, std::set<ElementId>> neighborhoods;
  if (auto rel = m.relations.find(r); rel != m.relations.end())
    for (const auto& t : rel->second) neighborhoods[t[1]].insert(t[0]);
  return std::all_of(neighborhoods.begin(), neighborhoods.end(), [&](const auto& kv) {
    return static_cast<int>(kv.second.size()) <= theta;
  });
}

}  // namespace shelab
