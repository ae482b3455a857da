#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dtfoil/instance.hpp"

namespace dtfoil {

using Lit = int;  // DIMACS literal: +v or -v
using Clause = std::vector<Lit>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

void write_dimacs(const Cnf& cnf, std::ostream& os);
Cnf read_dimacs(std::istream& is);

// Variable pool and clause store. Every formula variable x owns 3n ids
// v(x,i,s) = base(x) + 3i + s with s in {0, 1, ⊥}; auxiliaries follow all
// formula variables. Consistency clauses hold the exactly-one constraints
// and the pins of constants; semantic clauses hold everything else.
class CnfBuilder {
 public:
  explicit CnfBuilder(std::size_t dimension);

  std::size_t dimension() const { return n_; }

  // Registers x (no-op when already registered). Throws InternalError after
  // the first auxiliary was allocated.
  void register_var(const std::string& name);
  // Registers a variable pinned to e by unit clauses; returns its name.
  std::string register_constant(const PartialInstance& e);
  static std::string constant_name(const PartialInstance& e);

  bool has_var(const std::string& name) const { return base_.count(name) > 0; }
  const std::vector<std::string>& vars() const { return order_; }
  // Throws Error for an unregistered variable.
  Lit cell(const std::string& name, std::size_t i, Cell s) const;

  Lit new_aux();
  // An auxiliary pinned true.
  Lit true_lit();
  int num_vars() const { return next_ - 1; }
  int formula_var_ids() const { return static_cast<int>(3 * n_ * order_.size()); }

  void add_consistency(Clause c) { consistency_.push_back(std::move(c)); }
  void add_semantic(Clause c) { semantic_.push_back(std::move(c)); }
  const std::vector<Clause>& consistency() const { return consistency_; }
  const std::vector<Clause>& semantic() const { return semantic_; }
  std::size_t num_clauses() const { return consistency_.size() + semantic_.size(); }

  // Truth value of a literal fixed by a pin, if any.
  std::optional<bool> fixed(Lit l) const;

  // Consistency clauses first.
  Cnf to_cnf() const;
  // "c var x i s id" comment lines when `comments` is set.
  void write_dimacs(std::ostream& os, bool comments = false) const;

 private:
  std::size_t n_;
  int next_ = 1;
  bool aux_started_ = false;
  std::map<std::string, int> base_;
  std::vector<std::string> order_;
  std::vector<Clause> consistency_, semantic_;
  std::unordered_map<int, bool> fixed_;  // variable id -> value
  Lit true_ = 0;
};

// Parses solver "v" lines (and bare literal lines) into a total assignment
// indexed by variable id (entry 0 unused). Throws Error on a malformed line
// or when a variable in 1..num_vars is missing.
std::vector<bool> read_model(std::string_view text, int num_vars);

}  // namespace dtfoil
