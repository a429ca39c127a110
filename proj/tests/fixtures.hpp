#pragma once

#include <random>
#include <string>
#include <vector>

#include "shelab/model.hpp"

namespace fx {

using shelab::ElementId;
using shelab::Structure;
using shelab::Vocabulary;

inline Vocabulary digraph_vocab() { return Vocabulary{{{"E", 2}}, {}}; }
inline Vocabulary pc_vocab() { return Vocabulary{{{"P", 1}}, {{"c", 0}}}; }

inline std::vector<ElementId> ids(int n, const std::string& prefix = "") {
  std::vector<ElementId> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline Structure digraph(const std::string& name, int n, const std::vector<std::pair<int, int>>& edges) {
  Structure s;
  s.name = name;
  s.vocab = digraph_vocab();
  s.universe = ids(n);
  auto& e = s.relations["E"];
  for (auto [a, b] : edges) e.insert({std::to_string(a), std::to_string(b)});
  return s;
}

// universe {0..n-1}, P = ps, c = c
inline Structure pc(const std::string& name, int n, const std::vector<int>& ps, int c) {
  Structure s;
  s.name = name;
  s.vocab = pc_vocab();
  s.universe = ids(n);
  auto& p = s.relations["P"];
  for (int a : ps) p.insert({std::to_string(a)});
  s.functions["c"][{}] = std::to_string(c);
  return s;
}

// Size 1..3 with random relations and function tables.
inline Structure random_structure(std::mt19937_64& rng, const Vocabulary& v, const std::string& name) {
  Structure s;
  s.name = name;
  s.vocab = v;
  const int n = std::uniform_int_distribution<int>(1, 3)(rng);
  s.universe = ids(n);
  std::bernoulli_distribution coin(0.4);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (const auto& [p, arity] : v.predicates) {
    auto& r = s.relations[p];
    shelab::detail::for_each_tuple(s.universe, arity, [&](const shelab::Tuple& t) {
      if (coin(rng)) r.insert(t);
    });
  }
  for (const auto& [f, arity] : v.functions) {
    auto& table = s.functions[f];
    shelab::detail::for_each_tuple(s.universe, arity,
                                   [&](const shelab::Tuple& t) { table[t] = s.universe[pick(rng)]; });
  }
  return s;
}

// Some with constants, so the initial position can fail.
inline const std::vector<Vocabulary>& vocabularies() {
  static const std::vector<Vocabulary> v{digraph_vocab(), pc_vocab(), Vocabulary{{{"E", 2}}, {{"c", 0}}},
                                         Vocabulary{{}, {{"F", 1}}}};
  return v;
}

}  // namespace fx
