#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dtfoil/catalog.hpp"
#include "dtfoil/formula.hpp"
#include "dtfoil/instance.hpp"
#include "dtfoil/tree.hpp"

namespace dtfoil {

using Env = std::map<std::string, PartialInstance>;

struct OracleOptions {
  std::size_t bound = 8;  // largest dimension accepted
  // Evaluate catalog predicates through their {⊆, ⪯} definitions instead of
  // the direct evaluators.
  bool expand_definitions = false;
};

// All 3^n partial instances in lexicographic cell order (0 < 1 < ⊥).
class Universe {
 public:
  Universe(std::size_t dimension, std::size_t bound);

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return all_.size(); }
  const PartialInstance& operator[](std::size_t i) const { return all_[i]; }
  const std::vector<PartialInstance>& all() const { return all_; }
  std::size_t index_of(const PartialInstance& e) const;
  std::uint32_t defined_mask(std::size_t i) const { return def_[i]; }
  std::uint32_t one_mask(std::size_t i) const { return one_[i]; }

 private:
  std::size_t n_;
  std::vector<PartialInstance> all_;
  std::vector<std::uint32_t> def_, one_;
};

// Textbook first-order evaluation over the full structure of a tree (or over
// the tree-free structure when `tree` is null).
class Oracle {
 public:
  Oracle(std::size_t dimension, const DecisionTree* tree, OracleOptions options = {});
  ~Oracle();
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  const Universe& universe() const { return universe_; }

  bool eval(const Formula& f, const Env& env = {});
  // Every e with f[var := e] true, in universe order.
  std::vector<PartialInstance> satisfiers(const Formula& f, const std::string& var,
                                          const Env& env = {});
  // R[i][j] = rho(universe[i], universe[j]) with lhs := i, rhs := j.
  std::vector<std::vector<bool>> relation(const Formula& rho, const std::string& lhs,
                                          const std::string& rhs, const Env& params = {});
  // ρ-minimal φ-satisfiers: φ(x) and no φ(y) with ρ(y, x).
  std::vector<PartialInstance> minimals(const OptFormula& psi, const Env& params = {});

 private:
  struct Impl;
  friend struct Impl;
  Universe universe_;
  std::unique_ptr<TreeFacts> facts_;
  OracleOptions options_;
  std::vector<std::int8_t> model_cache_[6];
  const std::vector<std::int8_t>& model_table(Pred p);
  std::vector<std::uint32_t> guard_indices(Guard g) const;
};

bool oracle_eval(const Formula& f, const DecisionTree& tree, const Env& env = {},
                 OracleOptions options = {});
std::vector<PartialInstance> oracle_minimals(const OptFormula& psi, const DecisionTree& tree,
                                             const Env& params = {}, OracleOptions options = {});

namespace atoms {
// Closed {⊆, ⪯} formula (constants allowed) evaluated by exhaustive
// quantifier expansion over {0,1,⊥}^n. Throws OracleBoundExceeded above
// `bound`.
bool eval_ground_atomic(const Formula& f, std::size_t n, std::size_t bound = 8);
}  // namespace atoms

}  // namespace dtfoil
