#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtfoil/engine.hpp"
#include "dtfoil/formula.hpp"
#include "dtfoil/sat.hpp"
#include "dtfoil/tree.hpp"

namespace dtfoil {

// Explanation queries by REPL keyword: minsr, minimumsr, dfs, mincr, maxca.
// dfs is min[DFS(x) and x <= e, y < z].
OptFormula explain_query(const std::string& key, const PartialInstance& e);
const std::vector<std::string>& explain_keys();

struct BenchRow {
  std::string query;
  std::size_t dim = 0;
  std::size_t nodes = 0;
  double mean_s = 0;
  double sat_calls = 0;
};

// One random tree (nodes = 2 * leaves - 1) and one random full instance per
// trial, seeded by seed + trial.
std::vector<BenchRow> bench(const std::vector<std::string>& queries,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& nodes, std::size_t trials,
                            std::uint64_t seed, const SolverConfig& solver);
// Header "query,dim,nodes,mean_s,sat_calls" and one line per row.
std::string bench_csv(const std::vector<BenchRow>& rows);

// Interactive state: the loaded tree, solver configuration and named
// bindings. Every command is total: errors are reported on the output stream
// and the session continues.
class Session {
 public:
  explicit Session(SolverConfig solver = SolverConfig::embedded());
  ~Session();

  // Returns false on quit.
  bool execute(const std::string& line, std::ostream& out);
  // Reads commands until EOF or quit; prints a prompt when interactive.
  void run(std::istream& in, std::ostream& out, bool interactive);

  void load(const std::string& path);
  void set_tree(DecisionTree tree);
  bool has_tree() const { return tree_ != nullptr; }
  const DecisionTree& tree() const;
  const std::map<std::string, PartialInstance>& bindings() const { return bindings_; }
  const std::vector<std::string>& history() const { return history_; }
  SolverConfig& solver() { return solver_; }
  std::size_t errors() const { return errors_; }

 private:
  void dispatch(const std::string& cmd, const std::string& rest, std::ostream& out);
  void cmd_show(const std::string& rest, std::ostream& out);
  void cmd_let(const std::string& rest, std::ostream& out);
  void cmd_eval(const std::string& rest, std::ostream& out);
  void cmd_opt(const OptFormula& psi, bool check_order, std::ostream& out);
  void cmd_explain(const std::string& rest, std::ostream& out);
  void cmd_dimacs(const std::string& rest, std::ostream& out);
  void cmd_gen(const std::string& rest, std::ostream& out);
  void cmd_bench(const std::string& rest, std::ostream& out);
  Engine& engine();
  PartialInstance instance_arg(const std::string& text) const;

  SolverConfig solver_;
  std::unique_ptr<DecisionTree> tree_;
  std::unique_ptr<Engine> engine_;
  std::map<std::string, PartialInstance> bindings_;
  std::vector<std::string> history_;
  std::uint64_t seed_ = 0;
  std::size_t errors_ = 0;
};

}  // namespace dtfoil
