// shelab: command-line front end for the debt-rescheduling EF game.
//
// exit codes: 0 ok, 1 failing suite / other error, 2 unknown name,
// 3 parse error, 4 illegal scripted move, 5 budget exceeded.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shelab/shelab.hpp"

using namespace shelab;
namespace fs = std::filesystem;

namespace {

constexpr int kMaxTheta = 3;
constexpr int kMaxAlpha = 4;

struct ExitError : std::runtime_error {
  int code;
  ExitError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "unknown-structure" || c == "unknown-config") return 2;
  if (c == "parse-error") return 3;
  if (dynamic_cast<const BudgetError*>(&e) || c == "corpus-too-large" || c == "clock-too-large" ||
      c == "interpretation-too-large" || c == "structure-too-large" || c == "rank-undecided")
    return 5;
  return 1;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --config NAME, optionally overridden by --theta / --alpha / --mode.
struct ConfigArgs {
  std::string name;
  int theta = 0;
  std::string alpha;
  std::string mode;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", name, "named config from the workspace");
    cmd->add_option("--theta", theta, "set size bound (overrides config)");
    cmd->add_option("--alpha", alpha, "clock: natural or 'stable' (overrides config)");
    cmd->add_option("--mode", mode, "at | bs (overrides config)");
  }

  GameConfig resolve(const Workspace& w, const Structure* m1 = nullptr, const Structure* m2 = nullptr) const {
    GameConfig c{GammaMode::bs, 0, Clock::fin(0)};
    bool have_alpha = false;
    if (!name.empty()) {
      c = w.config(name);
      have_alpha = true;
    }
    if (theta > 0) c.theta = theta;
    if (c.theta == 0) {
      if (!m1 || !m2) throw ParseError("--theta or --config required");
      c.theta = default_theta(*m1, *m2);
    }
    if (!alpha.empty()) {
      c.alpha = clock_from_json(alpha == "stable" ? json(alpha) : json::parse(alpha, nullptr, false));
      have_alpha = true;
    }
    if (!have_alpha) throw ParseError("--alpha or --config required");
    if (!mode.empty()) c.mode = mode_from_string(mode);
    if (c.theta < 1) throw ParseError("theta must be >= 1");
    return c;
  }
};

// ---------------------------------------------------------------------------

int cmd_solve(const std::string& file, const std::string& left, const std::string& right,
              const ConfigArgs& ca, const std::string& dot, std::size_t dot_max) {
  const Workspace w = load_workspace(file);
  const Structure& m1 = w.structure(left);
  const Structure& m2 = w.structure(right);
  const GameConfig cfg = ca.resolve(w, &m1, &m2);
  json out;
  if (cfg.alpha.is_fin()) {
    if (cfg.alpha.value > 64) throw BudgetError("clock-too-large", "alpha > 64");
    const SolveResult r = solve(m1, m2, cfg);
    out = json{{"winner", to_string(r.winner)}, {"nodes", r.nodes}, {"millis", r.millis}};
    if (!dot.empty()) {
      std::ofstream f(dot);
      if (!f) throw Error("io", "cannot write " + dot);
      write_dot(f, *r.strategy, cfg.alpha.value, dot_max);
    }
  } else {
    const auto start = std::chrono::steady_clock::now();
    const RankReport r = rank_report(m1, m2, cfg.theta, cfg.mode);
    out = json{{"winner", r.rank.stable() ? "ISO" : "AIS"},
               {"nodes", r.table.reachable},
               {"millis", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
    if (!dot.empty()) throw ParseError("--dot needs a finite clock");
  }
  std::cout << out.dump() << "\n";
  return 0;
}

json rank_json(const Rank& r) {
  return r.stable() ? json{{"rank", {{"isoStable", r.value}}}} : json{{"rank", {{"aisWinsAt", r.value}}}};
}

int cmd_rank(const std::string& file, const std::string& left, const std::string& right, int theta,
             const std::string& mode, int max_clock) {
  const Workspace w = load_workspace(file);
  const Structure& m1 = w.structure(left);
  const Structure& m2 = w.structure(right);
  const int t = theta > 0 ? theta : default_theta(m1, m2);
  const RankReport r = rank_report(m1, m2, t, mode.empty() ? GammaMode::bs : mode_from_string(mode),
                                   RankOptions{max_clock});
  std::cout << rank_json(r.rank).dump() << "\n";
  return 0;
}

int cmd_equiv_matrix(const std::string& file, const ConfigArgs& ca, const std::string& format,
                     const std::string& out_path) {
  const Workspace w = load_workspace(file);
  const GameConfig cfg = ca.resolve(w, w.family.members.empty() ? nullptr : &w.family.members[0],
                                    w.family.members.empty() ? nullptr : &w.family.members[0]);
  const Partition p = e1_partition(w.family, cfg);
  const std::size_t n = p.order.size();
  auto cell = [&](std::size_t i, std::size_t j) -> std::string {
    if (p.e0[i][j]) return "E0";
    return p.block_of(p.order[i]) == p.block_of(p.order[j]) ? "E1-only" : "distinct";
  };
  json matrix = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(cell(i, j));
    matrix.push_back(row);
  }
  json witnesses = json::array();
  for (const auto& [pair, chain] : p.witnesses)
    witnesses.push_back(json{{"from", pair.first}, {"to", pair.second}, {"chain", chain.names}});
  const json report{{"config", to_json(NamedConfig{ca.name.empty() ? "cli" : ca.name, cfg})},
                    {"structures", p.order},
                    {"blocks", p.blocks},
                    {"matrix", matrix},
                    {"witnesses", witnesses}};
  std::ostringstream text;
  text << "blocks: " << p.blocks.size() << "\n";
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    text << "  [" << b << "]";
    for (const auto& s : p.blocks[b]) text << " " << s;
    text << "\n";
  }
  std::size_t width = 10;
  for (const auto& s : p.order) width = std::max(width, s.size() + 1);
  if (n > 0) {
    text << std::string(width, ' ');
    for (const auto& s : p.order) text << std::left << std::setw(static_cast<int>(width)) << s;
    text << "\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    text << std::left << std::setw(static_cast<int>(width)) << p.order[i];
    for (std::size_t j = 0; j < n; ++j) text << std::left << std::setw(static_cast<int>(width)) << cell(i, j);
    text << "\n";
  }
  if (!out_path.empty()) write_file(out_path, report.dump(2) + "\n");
  std::cout << (format == "text" ? text.str() : report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// play

// Picks one of `count` listed options. Scripted input comes from a file
// (one selection per line: an index into the full list, or a JSON object
// that must equal one of the options); illegal scripted input exits 4.
class Chooser {
 public:
  explicit Chooser(const std::string& script) {
    if (!script.empty()) {
      std::ifstream in(script);
      if (!in) throw ParseError("cannot open " + script);
      std::string line;
      while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') lines_.push_back(line);
      scripted_ = true;
    }
  }

  bool scripted() const { return scripted_; }

  // describe(i) -> display text; as_json(i) -> canonical JSON of option i;
  // matches(i, filter) -> filter test (interactive only).
  template <class Describe, class AsJson, class Filter>
  std::size_t choose(const std::string& what, std::size_t count, Describe describe, AsJson as_json,
                     Filter matches) {
    if (scripted_) {
      if (next_ >= lines_.size()) throw ExitError(4, "script exhausted before " + what);
      const std::string line = lines_[next_++];
      const json j = json::parse(line, nullptr, false);
      if (j.is_number_unsigned() && j.get<std::size_t>() < count) return j.get<std::size_t>();
      if (j.is_object())
        for (std::size_t i = 0; i < count; ++i)
          if (as_json(i) == j) return i;
      throw ExitError(4, "illegal scripted " + what + ": " + line);
    }
    constexpr std::size_t page = 20;
    std::string filter;
    std::size_t offset = 0;
    while (true) {
      std::vector<std::size_t> shown;
      for (std::size_t i = 0; i < count; ++i)
        if (filter.empty() || matches(i, filter)) shown.push_back(i);
      std::cout << what << ": " << shown.size() << " of " << count << " options"
                << (filter.empty() ? "" : " (filter: " + filter + ")") << "\n";
      for (std::size_t k = offset; k < std::min(shown.size(), offset + page); ++k)
        std::cout << "  [" << shown[k] << "] " << describe(shown[k]) << "\n";
      std::cout << "index | n(ext) | p(rev) | f <side=1 beta=0 set=a,b> | f (clear) > " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) throw ExitError(4, "input closed");
      if (line == "n") {
        if (offset + page < shown.size()) offset += page;
      } else if (line == "p") {
        offset = offset >= page ? offset - page : 0;
      } else if (line.rfind("f", 0) == 0) {
        filter = line.size() > 2 ? line.substr(2) : "";
        offset = 0;
      } else {
        try {
          std::size_t used = 0;
          const std::size_t i = std::stoul(line, &used);
          if (used == line.size() && i < count) return i;
        } catch (const std::exception&) {
        }
        std::cout << "not a listed index\n";
      }
    }
  }

 private:
  std::vector<std::string> lines_;
  std::size_t next_ = 0;
  bool scripted_ = false;
};

// "side=1 beta=0 set=a,b" against a move
bool move_matches(const Game& g, const AisMove& mv, const std::string& filter) {
  std::istringstream in(filter);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "side" && value != std::to_string(mv.iota)) return false;
    if (key == "beta" && value != std::to_string(mv.beta_next)) return false;
    if (key == "set") {
      std::string set = value;
      if (!set.empty() && set.front() == '{') set = set.substr(1);
      if (!set.empty() && set.back() == '}') set.pop_back();
      std::vector<std::string> want;
      std::stringstream ss(set);
      std::string id;
      while (std::getline(ss, id, ',')) want.push_back(id);
      std::vector<std::string> have;
      for (int e : mv.set) have.push_back(g.structure(mv.iota - 1).id(e));
      std::sort(want.begin(), want.end());
      std::sort(have.begin(), have.end());
      if (want != have) return false;
    }
  }
  return true;
}

int cmd_play(const std::string& file, const std::string& left, const std::string& right,
             const ConfigArgs& ca, const std::string& role, const std::string& moves,
             const std::string& transcript_path) {
  const Workspace w = load_workspace(file);
  const Structure& m1 = w.structure(left);
  const Structure& m2 = w.structure(right);
  const GameConfig cfg = ca.resolve(w, &m1, &m2);
  if (!cfg.alpha.is_fin()) throw ParseError("play needs a finite clock");
  if (role != "ais" && role != "iso") throw ParseError("--role must be ais or iso");
  Solver solver(Game(m1, m2, cfg));
  const Game& game = solver.game();
  Chooser chooser(moves);
  const bool human_ais = role == "ais";

  PlayTranscript t;
  t.left = left;
  t.right = right;
  t.config = cfg;
  t.human_role = role;
  auto show = [&](const State& s) { std::cout << "state " << state_to_json(game, s).dump() << "\n"; };
  auto s0 = game.initial_state(cfg.alpha.value);
  if (!s0) {
    t.initial_valid = false;
    t.winner = Player::ais;
    std::cout << "the initial position is not a state (an atomic sentence disagrees)\n";
  } else {
    State cur = *s0;
    show(cur);
    while (cur.beta > 0) {
      AisMove mv;
      if (human_ais) {
        const auto legal = game.legal_ais_moves(cur);
        const std::size_t i = chooser.choose(
            "AIS move", legal.size(), [&](std::size_t k) { return move_to_json(game, legal[k]).dump(); },
            [&](std::size_t k) { return move_to_json(game, legal[k]); },
            [&](std::size_t k, const std::string& f) { return move_matches(game, legal[k], f); });
        mv = legal[i];
      } else {
        mv = *solver.best_ais_move(cur);
        std::cout << "AIS plays " << move_to_json(game, mv).dump() << "\n";
      }
      std::optional<State> next;
      if (human_ais) {
        next = solver.best_response(cur, mv);
        if (!next) next = solver.first_response(cur, mv);
      } else {
        const auto legal = game.legal_iso_responses(cur, mv);
        if (!legal.empty()) {
          const std::size_t i = chooser.choose(
              "ISO response", legal.size(), [&](std::size_t k) { return state_to_json(game, legal[k]).dump(); },
              [&](std::size_t k) { return state_to_json(game, legal[k]); },
              [&](std::size_t, const std::string&) { return true; });
          next = legal[i];
        }
      }
      if (!next) {
        t.unanswered = mv;
        t.unanswered_by = human_ais ? "human" : "engine";
        t.winner = Player::ais;
        std::cout << "ISO has no legal response\n";
        break;
      }
      t.steps.push_back({mv, human_ais ? "human" : "engine", *next, human_ais ? "engine" : "human"});
      cur = *next;
      show(cur);
    }
    if (!t.unanswered) t.winner = Player::iso;
  }
  std::cout << "winner: " << to_string(t.winner) << "\n";
  if (!transcript_path.empty()) write_file(transcript_path, to_json(game, t).dump(2) + "\n");
  return 0;
}

int cmd_replay(const std::string& file, const std::string& transcript_path, const std::string& out_path) {
  const Workspace w = load_workspace(file);
  const std::string raw = read_file(transcript_path);
  const json j = json::parse(raw, nullptr, false);
  if (j.is_discarded()) throw ParseError(transcript_path + ": not JSON");
  std::string left, right;
  try {
    left = j.at("left").get<std::string>();
    right = j.at("right").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("transcript: ") + e.what());
  }
  const GameConfig cfg = config_from_json(j.at("config")).config;
  const Game game(w.structure(left), w.structure(right), cfg);
  const PlayTranscript t = transcript_from_json(game, j);
  const ReplayResult r = replay(game, t);
  if (!r.ok) throw ExitError(4, "replay failed: " + r.error);
  const std::string again = to_json(game, t).dump(2) + "\n";
  if (!out_path.empty()) write_file(out_path, again);
  const bool identical = again == raw;
  std::cout << json{{"ok", true}, {"identical", identical}, {"winner", to_string(t.winner)},
                    {"steps", t.steps.size()}}.dump()
            << "\n";
  return identical ? 0 : 1;
}

// ---------------------------------------------------------------------------
// props

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw ParseError("bad list item " + item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ParseError("bad list item " + item);
    }
  }
  return out;
}

struct PropsArgs {
  std::vector<std::string> suites{"a12"};
  std::string corpus = "exhaustive:bin:2";
  std::string thetas = "1,2";
  std::string alphas = "0,1,2,3";
  std::string mode = "bs";
  std::string out_dir = "props-out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int playouts = 1000;
  unsigned threads = default_threads();
  std::string mutate = "none";
  int max_theta = kMaxTheta;
  int max_alpha = kMaxAlpha;
  std::size_t corpus_budget = 200000;
};

int cmd_props(const PropsArgs& a) {
  Corpus corpus;
  if (fs::exists(a.corpus)) {
    corpus.spec = a.corpus;
    corpus.family = load_workspace(a.corpus).family;
  } else {
    corpus = corpus_from_spec(a.corpus, a.corpus_budget);
  }
  Grid grid{mode_from_string(a.mode), parse_list(a.thetas), parse_list(a.alphas)};
  for (int t : grid.thetas) {
    if (t < 1) throw ParseError("theta must be >= 1");
    if (t > a.max_theta) throw BudgetError("theta-too-large", std::to_string(t) + " > --max-theta");
  }
  for (int al : grid.alphas)
    if (al > a.max_alpha) throw BudgetError("clock-too-large", std::to_string(al) + " > --max-alpha");
  HarnessOptions opts;
  opts.seed = a.seed_given ? a.seed : harness_seed();
  opts.playouts = a.playouts;
  opts.threads = a.threads;
  if (a.mutate == "collapse-side2") opts.rules.mutation = Mutation::collapse_side2_horizon;
  else if (a.mutate != "none") throw ParseError("--mutate must be none or collapse-side2");

  std::vector<int> betas = grid.alphas;
  fs::create_directories(a.out_dir);
  bool all_pass = true;
  std::vector<std::string> suites;
  for (const auto& s : a.suites) {
    if (s == "a36") {
      suites.push_back("product");
      suites.push_back("sum");
    } else if (s == "all") {
      for (auto x : {"a12", "product", "sum", "rigidity", "bridge"}) suites.push_back(x);
    } else {
      suites.push_back(s);
    }
  }
  for (const auto& s : suites) {
    SuiteReport r;
    if (s == "a12") r = check_fact_a12(corpus, grid, opts);
    else if (s == "product") r = check_product_theorem(corpus, grid, opts);
    else if (s == "sum") r = check_sum_theorem(corpus, grid, opts);
    else if (s == "rigidity") {
      for (int t : grid.thetas) {
        SuiteReport part = check_rigidity(corpus, t, grid.mode, opts);
        if (r.suite.empty()) r = part;
        else r.checks.insert(r.checks.end(), part.checks.begin(), part.checks.end());
      }
    } else if (s == "bridge") r = check_bridge(corpus, betas, grid.thetas, grid.mode, opts);
    else throw ParseError("unknown suite " + s);
    r.suite = s;
    write_file((fs::path(a.out_dir) / (s + ".json")).string(), to_json(r).dump(2) + "\n");
    write_file((fs::path(a.out_dir) / (s + ".txt")).string(), to_text(r));
    std::cout << to_text(r);
    for (const auto& c : r.checks)
      if (c.first) {
        const auto path = fs::path(a.out_dir) / (s + "-" + c.name + "-counterexample.json");
        write_file(path.string(), c.first->transcript.dump(2) + "\n");
        std::cout << "  transcript: " << path.string() << "\n";
      }
    all_pass = all_pass && r.passed();
  }
  return all_pass ? 0 : 1;
}

int cmd_check(const std::string& file, bool normalize) {
  const json raw = read_json_file(file);
  const Workspace w = workspace_from_json(raw);
  const json once = to_json(w);
  const json twice = to_json(workspace_from_json(once));
  if (normalize) {
    std::cout << once.dump(2) << "\n";
    return 0;
  }
  std::cout << json{{"ok", true},
                    {"structures", w.family.members.size()},
                    {"configs", w.configs.size()},
                    {"fixed_point", once == twice}}.dump()
            << "\n";
  return once == twice ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shelab: debt-rescheduling Ehrenfeucht-Fraisse games on finite structures"};
  app.require_subcommand(1);

  std::string file, left, right, mode, dot, moves, role = "ais", transcript, out, format = "json";
  std::size_t dot_max = 200;
  int theta = 0, max_clock = 24;
  ConfigArgs ca;

  auto* solve_cmd = app.add_subcommand("solve", "decide the game; prints {winner, nodes, millis}");
  solve_cmd->add_option("file", file, "workspace JSON")->required();
  solve_cmd->add_option("--left", left)->required();
  solve_cmd->add_option("--right", right)->required();
  ca.add(solve_cmd);
  solve_cmd->add_option("--dot", dot, "write the solved reachable game graph as DOT");
  solve_cmd->add_option("--dot-max", dot_max, "state cap for --dot");

  auto* rank_cmd = app.add_subcommand("rank", "least AIS-winning clock, or a stabilization certificate");
  rank_cmd->add_option("file", file)->required();
  rank_cmd->add_option("--left", left)->required();
  rank_cmd->add_option("--right", right)->required();
  rank_cmd->add_option("--theta", theta);
  rank_cmd->add_option("--mode", mode);
  rank_cmd->add_option("--max-clock", max_clock, "largest clock tried exactly");

  auto* matrix_cmd = app.add_subcommand("equiv-matrix", "E1 partition and pairwise E0 matrix");
  matrix_cmd->add_option("file", file)->required();
  ca.add(matrix_cmd);
  matrix_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  matrix_cmd->add_option("--out", out, "also write the JSON report here");

  auto* play_cmd = app.add_subcommand("play", "play one side against the engine");
  play_cmd->add_option("file", file)->required();
  play_cmd->add_option("--left", left)->required();
  play_cmd->add_option("--right", right)->required();
  ca.add(play_cmd);
  play_cmd->add_option("--role", role, "ais | iso")->check(CLI::IsMember({"ais", "iso"}));
  play_cmd->add_option("--moves", moves, "scripted selections, one per line");
  play_cmd->add_option("--transcript", transcript, "write the transcript here");

  auto* replay_cmd = app.add_subcommand("replay", "re-drive a transcript through the engine");
  replay_cmd->add_option("file", file)->required();
  replay_cmd->add_option("--transcript", transcript)->required();
  replay_cmd->add_option("--out", out, "write the re-serialized transcript");

  PropsArgs pa;
  auto* props_cmd = app.add_subcommand("props", "run property suites");
  props_cmd->add_option("--suite", pa.suites, "a12 | a36 | product | sum | rigidity | bridge | all");
  props_cmd->add_option("--corpus", pa.corpus, "exhaustive:bin:N | exhaustive:unary:N | ... | workspace file");
  props_cmd->add_option("--theta", pa.thetas, "comma list");
  props_cmd->add_option("--alpha", pa.alphas, "comma list");
  props_cmd->add_option("--mode", pa.mode);
  props_cmd->add_option("--out", pa.out_dir, "report directory");
  auto* seed_opt = props_cmd->add_option("--seed", pa.seed);
  props_cmd->add_option("--playouts", pa.playouts);
  props_cmd->add_option("--threads", pa.threads);
  props_cmd->add_option("--mutate", pa.mutate, "none | collapse-side2");
  props_cmd->add_option("--max-theta", pa.max_theta);
  props_cmd->add_option("--max-alpha", pa.max_alpha);
  props_cmd->add_option("--corpus-budget", pa.corpus_budget);

  auto* check_cmd = app.add_subcommand("check", "validate a workspace");
  check_cmd->add_option("file", file)->required();
  auto* norm_cmd = app.add_subcommand("normalize", "print a workspace in canonical form");
  norm_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*solve_cmd) return cmd_solve(file, left, right, ca, dot, dot_max);
    if (*rank_cmd) return cmd_rank(file, left, right, theta, mode, max_clock);
    if (*matrix_cmd) return cmd_equiv_matrix(file, ca, format, out);
    if (*play_cmd) return cmd_play(file, left, right, ca, role, moves, transcript);
    if (*replay_cmd) return cmd_replay(file, transcript, out);
    if (*props_cmd) {
      pa.seed_given = seed_opt->count() > 0;
      return cmd_props(pa);
    }
    if (*check_cmd) return cmd_check(file, false);
    if (*norm_cmd) return cmd_check(file, true);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
