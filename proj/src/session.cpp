#include "dtfoil/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "dtfoil/encoder.hpp"
#include "dtfoil/error.hpp"
#include "dtfoil/library.hpp"
#include "dtfoil/parser.hpp"
#include "dtfoil/transform.hpp"

namespace dtfoil {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::pair<std::string, std::string> split_word(const std::string& s) {
  std::string t = trim(s);
  std::size_t i = 0;
  while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  return {t.substr(0, i), trim(t.substr(i))};
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

std::size_t parse_count(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error(std::string("expected a non-negative integer for ") + what + ", got '" + s + "'");
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw Error(std::string(what) + " out of range: '" + s + "'");
  }
}

std::vector<std::size_t> parse_list(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(trim(item), what));
  if (out.empty()) throw Error(std::string("empty list for ") + what);
  return out;
}

PartialInstance random_full(std::size_t n, std::mt19937_64& rng) {
  PartialInstance e(n, Cell::Zero);
  for (std::size_t i = 0; i < n; ++i) e[i] = bit_cell(rng() & 1);
  return e;
}

const char* kHelp =
    "commands:\n"
    "  load <file>                 load a decision tree (JSON)\n"
    "  show dim | tree | bindings\n"
    "  let <name> = <instance>     bind a partial instance, e.g. (1,0,?,1)\n"
    "  eval <formula>              evaluate a Q-DT-FOIL formula\n"
    "  opt min[<phi>, <rho>]       compute an Opt-DT-FOIL answer\n"
    "  explain <kind> <instance>   kind: sr minsr minimumsr dfs mincr maxca\n"
    "  dimacs <formula> <file>     write the CNF of a DT-FOIL formula\n"
    "  seed <n>                    seed for gen and bench\n"
    "  gen <dim> <leaves>          load a random tree\n"
    "  bench <queries> <dims> <nodes> <trials>   comma-separated lists; CSV out\n"
    "  help | quit\n";

}  // namespace

const std::vector<std::string>& explain_keys() {
  static const std::vector<std::string> keys = {"sr", "minsr", "minimumsr", "dfs", "mincr", "maxca"};
  return keys;
}

OptFormula explain_query(const std::string& key, const PartialInstance& e) {
  if (key == "minsr") return opt_query(OptQuery::MinimalSR, e);
  if (key == "minimumsr") return opt_query(OptQuery::MinimumSR, e);
  if (key == "mincr") return opt_query(OptQuery::MinimumCR, e);
  if (key == "maxca") return opt_query(OptQuery::MaximumCA, e);
  if (key == "dfs") {
    OptFormula f = parse_opt("min[DFS(x) and x <= u, y < z]");
    f.phi = substitute(f.phi, "u", Term::constant(e));
    return f;
  }
  throw Error("unknown explanation '" + key + "' (expected minsr, minimumsr, dfs, mincr or maxca)");
}

std::vector<BenchRow> bench(const std::vector<std::string>& queries,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& nodes, std::size_t trials,
                            std::uint64_t seed, const SolverConfig& solver) {
  if (trials == 0) throw Error("trials must be positive");
  std::vector<BenchRow> rows;
  for (const auto& q : queries) {
    explain_query(q, PartialInstance(1, Cell::Zero));
    for (std::size_t d : dims) {
      for (std::size_t count : nodes) {
        if (count % 2 == 0) throw Error("node count must be odd, got " + std::to_string(count));
        std::size_t leaves = (count + 1) / 2;
        double total = 0;
        std::size_t calls = 0;
        for (std::size_t t = 0; t < trials; ++t) {
          DecisionTree tree = random_tree(d, leaves, seed + t);
          std::mt19937_64 rng(seed + t);
          PartialInstance e = random_full(d, rng);
          EngineOptions opts;
          opts.solver = solver;
          Engine engine(tree, opts);
          OptResult r = engine.compute_opt(explain_query(q, e));
          total += r.wall_time;
          calls += r.sat_calls;
        }
        rows.push_back({q, d, count, total / static_cast<double>(trials),
                        static_cast<double>(calls) / static_cast<double>(trials)});
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "query,dim,nodes,mean_s,sat_calls\n";
  for (const auto& r : rows)
    os << r.query << ',' << r.dim << ',' << r.nodes << ',' << std::fixed << std::setprecision(6)
       << r.mean_s << ',' << std::setprecision(2) << r.sat_calls << '\n';
  return os.str();
}

Session::Session(SolverConfig solver) : solver_(std::move(solver)) {}

Session::~Session() = default;

const DecisionTree& Session::tree() const {
  if (!tree_) throw Error("no model loaded");
  return *tree_;
}

void Session::set_tree(DecisionTree tree) {
  engine_.reset();
  tree_ = std::make_unique<DecisionTree>(std::move(tree));
}

void Session::load(const std::string& path) { set_tree(load_tree(path)); }

Engine& Session::engine() {
  if (!tree_) throw Error("no model loaded");
  if (!engine_) {
    EngineOptions opts;
    opts.solver = solver_;
    engine_ = std::make_unique<Engine>(*tree_, opts);
  }
  engine_->options().solver = solver_;
  return *engine_;
}

PartialInstance Session::instance_arg(const std::string& text) const {
  std::string t = trim(text);
  if (t.empty()) throw Error("expected an instance or binding name");
  PartialInstance e;
  if (t[0] == '(') {
    e = PartialInstance::parse(t);
  } else {
    auto it = bindings_.find(t);
    if (it == bindings_.end()) throw Error("unknown binding '" + t + "'");
    e = it->second;
  }
  if (tree_ && e.dimension() != tree_->dimension())
    throw DimensionMismatch(tree_->dimension(), e.dimension());
  return e;
}

bool Session::execute(const std::string& line, std::ostream& out) {
  std::string text = trim(line);
  if (text.empty() || text[0] == '#') return true;
  history_.push_back(text);
  auto [cmd, rest] = split_word(text);
  if (cmd == "quit" || cmd == "exit") return false;
  try {
    dispatch(cmd, rest, out);
  } catch (const InternalError& e) {
    ++errors_;
    out << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    ++errors_;
    out << "error: " << e.what() << '\n';
  } catch (const std::bad_alloc&) {
    ++errors_;
    out << "error: out of memory\n";
  } catch (const std::exception& e) {
    ++errors_;
    out << "error: " << e.what() << '\n';
  }
  return true;
}

void Session::run(std::istream& in, std::ostream& out, bool interactive) {
  std::string line;
  for (;;) {
    if (interactive) out << "dtfoil> " << std::flush;
    if (!std::getline(in, line)) break;
    if (!execute(line, out)) break;
    out << std::flush;
  }
}

void Session::dispatch(const std::string& cmd, const std::string& rest, std::ostream& out) {
  if (cmd == "help") {
    out << kHelp;
  } else if (cmd == "load") {
    if (rest.empty()) throw Error("usage: load <file>");
    load(rest);
    out << "loaded " << rest << ": dimension " << tree_->dimension() << ", " << tree_->size()
        << " nodes\n";
  } else if (cmd == "show") {
    cmd_show(rest, out);
  } else if (cmd == "let") {
    cmd_let(rest, out);
  } else if (cmd == "eval") {
    cmd_eval(rest, out);
  } else if (cmd == "opt") {
    if (rest.empty()) throw Error("usage: opt min[<phi>, <rho>]");
    tree();
    cmd_opt(parse_opt(rest), true, out);
  } else if (cmd == "explain") {
    cmd_explain(rest, out);
  } else if (cmd == "dimacs") {
    cmd_dimacs(rest, out);
  } else if (cmd == "seed") {
    seed_ = parse_count(rest, "seed");
    out << "seed " << seed_ << '\n';
  } else if (cmd == "gen") {
    cmd_gen(rest, out);
  } else if (cmd == "bench") {
    cmd_bench(rest, out);
  } else {
    throw Error("unknown command '" + cmd + "' (try help)");
  }
}

void Session::cmd_show(const std::string& rest, std::ostream& out) {
  if (rest == "dim") {
    out << tree().dimension() << '\n';
  } else if (rest == "tree") {
    out << render_tree(tree());
  } else if (rest == "bindings") {
    for (const auto& [k, v] : bindings_) out << k << " = " << v.to_string() << '\n';
  } else {
    throw Error("usage: show dim | tree | bindings");
  }
}

void Session::cmd_let(const std::string& rest, std::ostream& out) {
  auto eq = rest.find('=');
  if (eq == std::string::npos) throw Error("usage: let <name> = <instance>");
  std::string name = trim(rest.substr(0, eq));
  if (!is_identifier(name)) throw Error("invalid binding name '" + name + "'");
  if (pred_by_name(name) || find_template(name)) throw Error("'" + name + "' is a predicate name");
  PartialInstance e = instance_arg(rest.substr(eq + 1));
  bindings_.insert_or_assign(name, e);
  out << name << " = " << e.to_string() << '\n';
}

void Session::cmd_eval(const std::string& rest, std::ostream& out) {
  if (rest.empty()) throw Error("usage: eval <formula>");
  Formula f = parse_formula(rest);
  Engine& e = engine();
  Env env;
  for (const auto& v : free_vars(f)) {
    auto it = bindings_.find(v);
    if (it == bindings_.end()) throw Error("unbound variable '" + v + "'");
    env.emplace(v, it->second);
  }
  EvalResult r = e.eval_qdtfoil(f, env);
  out << (r.verdict ? "true" : "false") << '\n';
  for (const auto& [k, v] : r.witnesses) out << k << " = " << v.to_string() << '\n';
  out << "sat calls: " << r.sat_calls << '\n';
}

void Session::cmd_opt(const OptFormula& psi, bool check_order, std::ostream& out) {
  Engine& e = engine();
  Env params;
  for (const Formula* part : {&psi.phi, &psi.rho}) {
    for (const auto& v : free_vars(*part)) {
      if (v == psi.target || v == psi.lhs || v == psi.rhs) continue;
      auto it = bindings_.find(v);
      if (it == bindings_.end()) throw Error("unbound parameter '" + v + "'");
      params.emplace(v, it->second);
    }
  }
  if (check_order) {
    std::size_t free_params = 0;
    for (const auto& v : free_vars(psi.rho))
      if (v != psi.lhs && v != psi.rhs) ++free_params;
    bool has_constants = rho_parameter_count(psi) > free_params;
    std::size_t n = tree().dimension();
    OrderReport report;
    if (!has_constants) {
      report = check_strict_order(psi, {1, 2});
    } else if (n <= 3) {
      report = check_strict_order(dtfoil::bind(psi.rho, params, {psi.lhs, psi.rhs}), psi.lhs, psi.rhs, {n});
    }
    if (!report.ok) throw Error("order formula is not a strict partial order: " + report.to_string());
  }
  OptResult r = e.compute_opt(psi, params);
  if (!r.answer) {
    out << "no answer\n";
  } else {
    bindings_.insert_or_assign("_last", *r.answer);
    out << "answer: " << r.answer->to_string() << '\n';
    out << "undefined: " << r.answer->bot_count() << '\n';
  }
  out << "descent: " << r.trace.steps.size() << '\n';
  out << "sat calls: " << r.sat_calls << '\n';
}

void Session::cmd_explain(const std::string& rest, std::ostream& out) {
  auto [kind, arg] = split_word(rest);
  if (kind.empty() || arg.empty()) throw Error("usage: explain sr|minsr|minimumsr|dfs|mincr|maxca <instance>");
  if (std::find(explain_keys().begin(), explain_keys().end(), kind) == explain_keys().end())
    throw Error("unknown explanation '" + kind + "' (expected sr, minsr, minimumsr, dfs, mincr or maxca)");
  tree();
  PartialInstance e = instance_arg(arg);
  if (kind == "sr") {
    Formula f = *expand_template("SR", {Term::constant(e), Term::var("x")});
    EvalResult r = engine().eval_qdtfoil(Formula::block(Quantifier::Exists, {"x"}, f));
    if (!r.verdict) {
      out << "no answer\n";
    } else {
      const PartialInstance& a = r.witnesses.at("x");
      bindings_.insert_or_assign("_last", a);
      out << "answer: " << a.to_string() << '\n';
      out << "undefined: " << a.bot_count() << '\n';
    }
    out << "sat calls: " << r.sat_calls << '\n';
    return;
  }
  cmd_opt(explain_query(kind, e), false, out);
}

void Session::cmd_dimacs(const std::string& rest, std::ostream& out) {
  std::string t = trim(rest);
  std::size_t sp = t.find_last_of(" \t");
  if (sp == std::string::npos) throw Error("usage: dimacs <formula> <file>");
  std::string path = t.substr(sp + 1);
  Formula f = parse_formula(trim(t.substr(0, sp)), ParseMode::DtFoil);
  Engine& e = engine();
  Env env;
  std::vector<std::string> open;
  for (const auto& v : free_vars(f)) {
    auto it = bindings_.find(v);
    if (it != bindings_.end()) env.emplace(v, it->second);
    else open.push_back(v);
  }
  Encoding enc = encode_formula(dtfoil::bind(f, env, open), tree().dimension(), &e.facts(), open);
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  enc.builder.write_dimacs(file, true);
  if (!file) throw Error("cannot write " + path);
  out << "wrote " << path << ": " << enc.builder.num_vars() << " variables, "
      << enc.builder.num_clauses() << " clauses\n";
}

void Session::cmd_gen(const std::string& rest, std::ostream& out) {
  auto [d, l] = split_word(rest);
  std::size_t dim = parse_count(d, "dimension");
  std::size_t leaves = parse_count(l, "leaves");
  if (dim > 100000) throw Error("dimension too large");
  set_tree(random_tree(dim, leaves, seed_));
  out << "generated tree: dimension " << dim << ", " << tree_->size() << " nodes\n";
}

void Session::cmd_bench(const std::string& rest, std::ostream& out) {
  std::vector<std::string> words;
  std::istringstream is(rest);
  std::string w;
  while (is >> w) words.push_back(w);
  if (words.size() != 4) throw Error("usage: bench <queries> <dims> <nodes> <trials>");
  std::vector<std::string> queries;
  std::stringstream qs(words[0]);
  while (std::getline(qs, w, ',')) {
    if (w == "sr" || std::find(explain_keys().begin(), explain_keys().end(), w) == explain_keys().end())
      throw Error("unknown bench query '" + w + "'");
    queries.push_back(w);
  }
  std::vector<std::size_t> dims = parse_list(words[1], "dims");
  std::vector<std::size_t> nodes = parse_list(words[2], "nodes");
  std::size_t trials = parse_count(words[3], "trials");
  for (std::size_t d : dims)
    if (d == 0 || d > 1000) throw Error("bench dimension must be in 1..1000");
  for (std::size_t n : nodes)
    if (n > 100001) throw Error("bench node count too large");
  if (trials > 1000) throw Error("at most 1000 trials");
  out << bench_csv(bench(queries, dims, nodes, trials, seed_, solver_));
}

}  // namespace dtfoil
