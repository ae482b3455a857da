#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtfoil/catalog.hpp"
#include "dtfoil/cnf.hpp"
#include "dtfoil/formula.hpp"

namespace dtfoil {

struct GuardStats {
  std::size_t expansions = 0;  // guarded quantifiers expanded
  std::size_t copies = 0;      // body instances produced
};

// Replaces every guarded quantifier by the finite conjunction (forall) or
// disjunction (exists) over the guard set of the tree. With `simplify_result`
// each instance is simplified as it is produced, so model atoms of constants
// fold away.
Formula expand_guards(const Formula& f, const TreeFacts& facts, bool simplify_result = true,
                      GuardStats* stats = nullptr);

// Rewrites positively occurring unguarded exists (and negatively occurring
// unguarded forall) into fresh free variables, appended to `fresh`. Catalog
// definitions and the supported inner patterns are left in place.
Formula skolemize(const Formula& f, std::vector<std::string>& fresh);

// Predicate and arguments when f is literally the {⊆, ⪯} definition of a
// catalog predicate that uses quantifiers.
std::optional<std::pair<Pred, std::vector<Term>>> match_catalog(const Formula& f);
// exists w (suf(a, w) and cons(w, b1) and ... and cons(w, bk)), argument
// order of each atom free.
bool is_inner_pattern(const Formula& f);

// Gate builder and circuit library over a CnfBuilder. Variables and
// constants must be registered before the first auxiliary is allocated
// (see `prepare`). Gates are hashed and constant-folded through pinned
// literals; gate clauses go to the semantic list.
class Encoder {
 public:
  explicit Encoder(CnfBuilder& builder, const TreeFacts* facts = nullptr);

  CnfBuilder& builder() { return *b_; }

  // Registers the free variables of f in first-use order, then its constants.
  void prepare(const Formula& f);

  Lit lit_true();
  Lit lit_false() { return -lit_true(); }
  Lit gate_and(std::vector<Lit> in);
  Lit gate_or(std::vector<Lit> in);
  Lit gate_iff(Lit a, Lit b);
  Lit gate_implies(Lit a, Lit b) { return gate_or({-a, b}); }

  Lit encode_subsumption(const std::string& x, const std::string& y);
  Lit encode_card_le(const std::string& x, const std::string& y);
  Lit encode_allpos(const std::string& x);
  Lit encode_allneg(const std::string& x);
  // Any primitive predicate over registered variable or constant names.
  Lit encode_catalog(Pred p, const std::vector<std::string>& args);
  // Throws UnsupportedPattern outside the closed catalog.
  Lit encode_inner_atomic(const Formula& f);
  // Quantifier-free formula modulo inner atomic quantifiers.
  Lit encode(const Formula& f);

  void require(Lit l) { b_->add_semantic({l}); }

  // C[j] true iff |bot(x)| >= j, for j = 0..n.
  const std::vector<Lit>& bot_counter(const std::string& x);
  // Unary sequential counter: C[j] true iff at least j inputs are true.
  std::vector<Lit> counter(const std::vector<Lit>& in);

  std::string term_name(const Term& t) const;

 private:
  Lit cell(const std::string& x, std::size_t i, Cell s) const { return b_->cell(x, i, s); }
  Lit encode_model(Pred p, const std::string& x);
  Lit match_set(const std::string& x, const std::vector<PartialInstance>& set);
  const std::vector<Lit>& reach(const std::string& x);
  const TreeFacts& facts() const;
  bool has_inner_quant(const Formula& f);

  CnfBuilder* b_;
  const TreeFacts* facts_;
  std::map<std::vector<Lit>, Lit> and_cache_;
  std::map<std::pair<Lit, Lit>, Lit> iff_cache_;
  std::map<std::vector<Lit>, std::vector<Lit>> counter_cache_;
  std::map<std::string, std::vector<Lit>> reach_cache_;
  std::unordered_map<const void*, bool> quant_cache_;
};

struct EncodeOptions {
  bool simplify = true;
};

struct Encoding {
  CnfBuilder builder;
  std::vector<std::string> skolems;
  GuardStats guards;
};

// CNF whose models are exactly the assignments satisfying f, up to the
// auxiliaries. Variables in `order` are registered first; f may contain
// guarded quantifiers (expanded against `facts`) and unguarded quantifiers
// that either Skolemize or fall in the inner catalog.
Encoding encode_formula(const Formula& f, std::size_t dimension, const TreeFacts* facts,
                        const std::vector<std::string>& order = {}, EncodeOptions options = {});

}  // namespace dtfoil
