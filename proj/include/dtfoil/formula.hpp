#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dtfoil/instance.hpp"
#include "dtfoil/tree.hpp"

namespace dtfoil {

// A term is a variable or a constant partial instance.
class Term {
 public:
  static Term var(std::string name) { return Term(Var{std::move(name)}); }
  static Term constant(PartialInstance e) { return Term(std::move(e)); }

  bool is_var() const { return std::holds_alternative<Var>(v_); }
  const std::string& name() const { return std::get<Var>(v_).name; }
  const PartialInstance& value() const { return std::get<PartialInstance>(v_); }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  struct Var {
    std::string name;
    friend bool operator==(const Var&, const Var&) = default;
  };
  explicit Term(Var v) : v_(std::move(v)) {}
  explicit Term(PartialInstance e) : v_(std::move(e)) {}
  std::variant<Var, PartialInstance> v_;
};

// Primitive predicates. The first group is definable over {⊆, ⪯} alone
// (atomic); the second group depends on the decision tree.
enum class Pred {
  Subset,
  Pref,
  Equal,
  Full,
  Cons,
  Suf,
  Leh,
  Undef,
  Single,
  Comp,
  MaxComp,
  Rel,
  MaxRel,
  Opp,
  Glb,
  Join,
  Predecessor,
  AllPos,
  AllNeg,
  Pos,
  Neg,
  Node,
  Leaf,
  PosLeaf,
  NegLeaf,
};

enum class Quantifier { Exists, Forall };

class Formula;

namespace ast {
struct Const { bool value; };
struct Atom { Pred pred; std::vector<Term> args; };
struct Not;
struct And;
struct Or;
struct Implies;
struct Iff;
// Guarded quantifier when `guard` is set; otherwise an atomic-layer
// quantifier that may only range over {⊆, ⪯} subformulas.
struct Quant;
// Q-DT-FOIL prefix: one quantifier kind over a block of variables.
struct Block;
}  // namespace ast

class Formula {
 public:
  using Node = std::variant<ast::Const, ast::Atom, ast::Not, ast::And, ast::Or, ast::Implies,
                            ast::Iff, ast::Quant, ast::Block>;

  Formula();  // true

  static Formula constant(bool b);
  static Formula atom(Pred p, std::vector<Term> args);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula quant(Quantifier q, std::optional<Guard> guard, std::string var, Formula body);
  static Formula block(Quantifier q, std::vector<std::string> vars, Formula body);

  const Node& node() const;
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  // Identity of the shared node; used as a memo key.
  const void* id() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace ast {
struct Not { Formula child; };
struct And { std::vector<Formula> children; };
struct Or { std::vector<Formula> children; };
struct Implies { Formula lhs, rhs; };
struct Iff { Formula lhs, rhs; };
struct Quant {
  Quantifier q;
  std::optional<Guard> guard;
  std::string var;
  Formula body;
};
struct Block {
  Quantifier q;
  std::vector<std::string> vars;
  Formula body;
};
}  // namespace ast

inline const Formula::Node& Formula::node() const { return *node_; }
template <class T>
const T* Formula::as() const { return std::get_if<T>(node_.get()); }
template <class T>
bool Formula::is() const { return std::holds_alternative<T>(*node_); }

// min[phi(x), rho(y, z)]: the distinguished variable of phi and the compared
// pair of rho are named by `target`, `lhs`, `rhs`; every other free variable
// is a parameter bound by the caller.
struct OptFormula {
  Formula phi;
  Formula rho;
  std::string target = "x";
  std::string lhs = "y";
  std::string rhs = "z";
};

bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const OptFormula& a, const OptFormula& b);

std::set<std::string> free_vars(const Formula& f);

// Capture-avoiding substitution of a free variable. A variable that does not
// occur returns the identical AST; a variable that occurs only bound throws.
Formula substitute(const Formula& f, const std::string& var, const Term& t);
Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Term>>& subst);

// Number of AST nodes (atoms, connectives, quantifiers).
std::size_t formula_size(const Formula& f);

bool is_atomic_pred(Pred p);
bool contains_block(const Formula& f);
// Only atomic predicates, Boolean connectives and unguarded quantifiers.
bool is_atomic_formula(const Formula& f);

}  // namespace dtfoil
