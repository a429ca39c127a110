#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shelab/equivalence.hpp"
#include "shelab/game.hpp"

namespace shelab {

using json = nlohmann::json;

// Malformed input: maps to exit code 3 in the CLI.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& detail) : Error("parse-error", detail) {}
};

// ---------------------------------------------------------------------------
// Vocabulary / Structure

inline json to_json(const Vocabulary& v) {
  return json{{"predicates", v.predicates}, {"functions", v.functions}};
}

inline Vocabulary vocabulary_from_json(const json& j) {
  Vocabulary v;
  try {
    if (j.contains("predicates")) v.predicates = j.at("predicates").get<std::map<std::string, int>>();
    if (j.contains("functions")) v.functions = j.at("functions").get<std::map<std::string, int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("vocabulary: ") + e.what());
  }
  return v;
}

// Tuple keys of function tables are comma-joined ids; constants use "".
inline Tuple split_tuple_key(const std::string& key, int arity) {
  Tuple out;
  if (arity == 0) {
    if (!key.empty()) throw ParseError("constant key must be empty, got '" + key + "'");
    return out;
  }
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!key.empty() && key.back() == ',') out.push_back("");
  if (static_cast<int>(out.size()) != arity) throw ParseError("bad tuple key '" + key + "'");
  return out;
}

inline json to_json(const Structure& s) {
  json rel = json::object();
  for (const auto& [name, arity] : s.vocab.predicates) {
    json tuples = json::array();
    if (auto it = s.relations.find(name); it != s.relations.end())
      for (const auto& t : it->second) tuples.push_back(t);
    rel[name] = std::move(tuples);
  }
  json fun = json::object();
  for (const auto& [name, arity] : s.vocab.functions) {
    json table = json::object();
    if (auto it = s.functions.find(name); it != s.functions.end())
      for (const auto& [args, value] : it->second) table[join_tuple(args)] = value;
    fun[name] = std::move(table);
  }
  return json{{"name", s.name}, {"universe", s.universe}, {"relations", rel}, {"functions", fun}};
}

inline Structure structure_from_json(const json& j, const Vocabulary& vocab) {
  Structure s;
  s.vocab = vocab;
  try {
    s.name = j.at("name").get<std::string>();
    s.universe = j.at("universe").get<std::vector<ElementId>>();
    if (j.contains("relations"))
      for (const auto& [name, tuples] : j.at("relations").items()) {
        auto& target = s.relations[name];
        for (const auto& t : tuples) target.insert(t.get<Tuple>());
      }
    for (const auto& [name, arity] : vocab.predicates) s.relations[name];
    if (j.contains("functions"))
      for (const auto& [name, table] : j.at("functions").items()) {
        auto it = vocab.functions.find(name);
        if (it == vocab.functions.end()) throw ParseError("unknown function " + name);
        auto& target = s.functions[name];
        for (const auto& [key, value] : table.items())
          target[split_tuple_key(key, it->second)] = value.get<ElementId>();
      }
  } catch (const json::exception& e) {
    throw ParseError(std::string("structure: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Configs

inline json clock_to_json(const Clock& c) {
  return c.stable ? json("stable") : json(c.value);
}

inline Clock clock_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "stable") throw ParseError("clock must be an integer or \"stable\"");
    return Clock::stable_clock();
  }
  if (!j.is_number_integer() || j.get<int>() < 0) throw ParseError("clock must be a natural");
  return Clock::fin(j.get<int>());
}

inline GammaMode mode_from_string(const std::string& s) {
  if (s == "at") return GammaMode::at;
  if (s == "bs") return GammaMode::bs;
  throw ParseError("mode must be \"at\" or \"bs\"");
}

struct NamedConfig {
  std::string name;
  GameConfig config;
};

inline json to_json(const NamedConfig& c) {
  return json{{"name", c.name},
              {"mode", to_string(c.config.mode)},
              {"theta", c.config.theta},
              {"alpha", clock_to_json(c.config.alpha)}};
}

inline NamedConfig config_from_json(const json& j) {
  NamedConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.config.mode = mode_from_string(j.value("mode", std::string("bs")));
    c.config.theta = j.at("theta").get<int>();
    c.config.alpha = clock_from_json(j.at("alpha"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (c.config.theta < 1) throw ParseError("theta must be >= 1");
  return c;
}

// ---------------------------------------------------------------------------
// Workspace: one JSON document holding a vocabulary, a family and configs.

struct Workspace {
  Vocabulary vocab;
  Family family;
  std::vector<NamedConfig> configs;

  const Structure& structure(const std::string& name) const { return family.at(name); }
  const GameConfig& config(const std::string& name) const {
    for (const auto& c : configs)
      if (c.name == name) return c.config;
    throw Error("unknown-config", name);
  }
};

inline json to_json(const Workspace& w) {
  json structures = json::array();
  for (const auto& s : w.family.members) structures.push_back(to_json(s));
  json configs = json::array();
  for (const auto& c : w.configs) configs.push_back(to_json(c));
  return json{{"vocabulary", to_json(w.vocab)}, {"structures", structures}, {"configs", configs}};
}

inline Workspace workspace_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("workspace must be a JSON object");
  Workspace w;
  w.vocab = vocabulary_from_json(j.value("vocabulary", json::object()));
  if (j.contains("structures")) {
    if (!j.at("structures").is_array()) throw ParseError("structures must be an array");
    for (const auto& s : j.at("structures"))
      w.family.members.push_back(structure_from_json(s, w.vocab));
  }
  if (j.contains("configs"))
    for (const auto& c : j.at("configs")) w.configs.push_back(config_from_json(c));
  for (const auto& s : w.family.members)
    if (auto v = validate_structure(s)) throw ParseError(s.name + ": " + v->code + " " + v->detail);
  std::set<std::string> names;
  for (const auto& s : w.family.members)
    if (!names.insert(s.name).second) throw ParseError("duplicate structure name " + s.name);
  return w;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Workspace load_workspace(const std::string& path) {
  return workspace_from_json(read_json_file(path));
}

// ---------------------------------------------------------------------------
// Sentences, resolved against a family by name.

inline json to_json(const SentenceL1& s) {
  return json{{"mode", to_string(s.mode)},
              {"theta", s.theta},
              {"alpha", clock_to_json(s.alpha)},
              {"representatives", s.representatives}};
}

inline SentenceL1 sentence_from_json(const json& j, const Family& fam) {
  SentenceL1 s;
  try {
    s.mode = mode_from_string(j.value("mode", std::string("bs")));
    s.theta = j.at("theta").get<int>();
    s.alpha = clock_from_json(j.at("alpha"));
    s.representatives = j.at("representatives").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("sentence: ") + e.what());
  }
  for (const auto& r : s.representatives) (void)fam.at(r);
  return s;
}

// ---------------------------------------------------------------------------
// Game states and moves, with element ids. Keys are sorted (nlohmann objects
// are ordered maps), so dump() is canonical.

inline json debt_to_json(Debt d) { return d == kNever ? json("top") : json(d); }

inline Debt debt_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "top") return kNever;
  if (!j.is_number_integer()) throw ParseError("debt must be an integer or \"top\"");
  return j.get<Debt>();
}

inline json state_to_json(const Game& game, const State& s) {
  json out;
  for (int side = 0; side < 2; ++side) {
    const Interp& m = game.structure(side);
    json members = json::array();
    json debts = json::object();
    for (int e : s.members(side)) {
      members.push_back(m.id(e));
      debts[m.id(e)] = debt_to_json(s.debt[side][e]);
    }
    out[side == 0 ? "a1" : "a2"] = std::move(members);
    out[side == 0 ? "h1" : "h2"] = std::move(debts);
  }
  json g = json::object();
  for (int a = 0; a < static_cast<int>(s.g.size()); ++a)
    if (s.g[a] >= 0) g[game.structure(0).id(a)] = game.structure(1).id(s.g[a]);
  out["g"] = std::move(g);
  out["beta"] = s.beta;
  out["n"] = s.n;
  return out;
}

inline int element_index(const Interp& m, const std::string& id) {
  auto i = m.index(id);
  if (!i) throw ParseError("unknown element " + id + " in " + m.name());
  return *i;
}

inline State state_from_json(const Game& game, const json& j) {
  State s;
  try {
    for (int side = 0; side < 2; ++side) {
      const Interp& m = game.structure(side);
      s.debt[side].assign(static_cast<std::size_t>(m.size()), kAbsent);
      const json& members = j.at(side == 0 ? "a1" : "a2");
      const json& debts = j.at(side == 0 ? "h1" : "h2");
      for (const auto& id : members) {
        const auto key = id.get<std::string>();
        s.debt[side][element_index(m, key)] = debt_from_json(debts.at(key));
      }
    }
    s.g.assign(static_cast<std::size_t>(game.structure(0).size()), -1);
    for (const auto& [a, b] : j.at("g").items())
      s.g[element_index(game.structure(0), a)] = element_index(game.structure(1), b.get<std::string>());
    s.beta = j.at("beta").get<int>();
    s.n = j.at("n").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("state: ") + e.what());
  }
  return s;
}

inline json move_to_json(const Game& game, const AisMove& mv) {
  json set = json::array();
  for (int e : mv.set) set.push_back(game.structure(mv.iota - 1).id(e));
  return json{{"beta", mv.beta_next}, {"iota", mv.iota}, {"set", set}};
}

inline AisMove move_from_json(const Game& game, const json& j) {
  AisMove mv;
  try {
    mv.beta_next = j.at("beta").get<int>();
    mv.iota = j.at("iota").get<int>();
    if (mv.iota != 1 && mv.iota != 2) throw ParseError("iota must be 1 or 2");
    for (const auto& id : j.at("set"))
      mv.set.push_back(element_index(game.structure(mv.iota - 1), id.get<std::string>()));
  } catch (const json::exception& e) {
    throw ParseError(std::string("move: ") + e.what());
  }
  std::sort(mv.set.begin(), mv.set.end());
  return mv;
}

}  // namespace shelab
