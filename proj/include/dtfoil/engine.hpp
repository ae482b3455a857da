#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dtfoil/catalog.hpp"
#include "dtfoil/formula.hpp"
#include "dtfoil/oracle.hpp"
#include "dtfoil/sat.hpp"
#include "dtfoil/tree.hpp"

namespace dtfoil {

struct EngineOptions {
  SolverConfig solver = SolverConfig::embedded();
  std::uint64_t guard_cap = 1'000'000;
  // Largest dimension at which ground evaluation may fall back to the
  // oracle for quantified atomic subformulas outside the catalog.
  std::size_t oracle_bound = 8;
};

struct EvalResult {
  bool verdict = false;
  // Outermost satisfied existential blocks.
  std::map<std::string, PartialInstance> witnesses;
  std::size_t sat_calls = 0;
  double wall_time = 0;
};

struct DescentTrace {
  std::vector<PartialInstance> steps;     // e(0), e(1), ...
  std::vector<std::size_t> sat_call_ids;  // call that produced each step
  std::size_t final_call = 0;             // the UNSAT call that ended the descent
};

struct OptResult {
  std::optional<PartialInstance> answer;  // nullopt: no satisfier of phi
  DescentTrace trace;
  std::size_t sat_calls = 0;
  double wall_time = 0;
};

// (n+1)^3 when ell = 0, otherwise min((n+1)^(3^(ell+1)), cap).
std::uint64_t iteration_guard(std::size_t ell, std::size_t n, std::uint64_t cap = 1'000'000);
// Parameters of rho: free variables other than the compared pair, plus
// distinct constants.
std::size_t rho_parameter_count(const OptFormula& psi);
std::uint64_t iteration_guard(const OptFormula& psi, std::size_t n, std::uint64_t cap = 1'000'000);

class Engine {
 public:
  explicit Engine(const DecisionTree& tree, EngineOptions options = {});
  ~Engine();

  const DecisionTree& tree() const { return *tree_; }
  const TreeFacts& facts() const { return *facts_; }
  const EngineOptions& options() const { return options_; }
  EngineOptions& options() { return options_; }
  std::size_t sat_calls() const { return calls_; }

  // DT-FOIL, no SAT call.
  bool eval_dtfoil(const Formula& f, const Env& env = {});
  // Q-DT-FOIL, one SAT call per quantifier block reached.
  EvalResult eval_qdtfoil(const Formula& f, const Env& env = {});
  // Witness for the free variables of f (which must include `vars`), or
  // nullopt when f is unsatisfiable. One SAT call.
  std::optional<std::map<std::string, PartialInstance>> find(const Formula& f,
                                                             const std::vector<std::string>& vars);
  OptResult compute_opt(const OptFormula& psi, const Env& params = {});
  bool verify_answer(const OptFormula& psi, const Env& params,
                     const std::optional<PartialInstance>& answer);

 private:
  bool eval_blocks(const Formula& f, bool positive, EvalResult& r);
  bool ground(const Formula& f);

  const DecisionTree* tree_;
  std::unique_ptr<TreeFacts> facts_;
  EngineOptions options_;
  std::unique_ptr<Oracle> oracle_;
  std::size_t calls_ = 0;
};

bool eval_dtfoil(const Formula& f, const DecisionTree& tree, const Env& env = {});
EvalResult eval_qdtfoil(const Formula& f, const DecisionTree& tree, const Env& env = {},
                        EngineOptions options = {});
OptResult compute_opt(const OptFormula& psi, const DecisionTree& tree, const Env& params = {},
                      EngineOptions options = {});
bool verify_answer(const OptFormula& psi, const DecisionTree& tree, const Env& params,
                   const std::optional<PartialInstance>& answer, EngineOptions options = {});

// Substitutes env values for free variables; throws Error naming the first
// free variable left unbound unless it is listed in `open`.
Formula bind(const Formula& f, const Env& env, const std::vector<std::string>& open = {});

}  // namespace dtfoil
