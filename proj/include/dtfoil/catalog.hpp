#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtfoil/formula.hpp"
#include "dtfoil/instance.hpp"
#include "dtfoil/tree.hpp"

namespace dtfoil {

struct PredInfo {
  Pred pred;
  const char* name;  // surface keyword
  std::size_t arity;
  bool model;  // depends on the decision tree
};

const PredInfo& pred_info(Pred p);
const std::vector<PredInfo>& all_preds();
std::optional<Pred> pred_by_name(std::string_view name);

// Definition over {⊆, ⪯} in surface syntax, with arguments named a, b, c.
// Empty for the primitives subset and pref and for model predicates.
std::optional<std::string> foil_definition(Pred p);

// Precomputed guard sets and Boolean facts about a tree.
class TreeFacts {
 public:
  explicit TreeFacts(const DecisionTree& tree);

  const DecisionTree& tree() const { return *tree_; }
  std::size_t dimension() const { return tree_->dimension(); }

  // Every completion classifies 1 (resp. 0).
  bool all_pos(const PartialInstance& e) const;
  bool all_neg(const PartialInstance& e) const;
  bool is_node(const PartialInstance& e) const;
  bool is_leaf(const PartialInstance& e) const;
  bool is_pos_leaf(const PartialInstance& e) const;
  bool is_neg_leaf(const PartialInstance& e) const;

  const std::vector<PartialInstance>& guard(Guard g) const;
  const std::vector<PartialInstance>& leaves() const { return leaves_; }

 private:
  const DecisionTree* tree_;
  std::vector<PartialInstance> nodes_, leaves_, pos_, neg_;
  std::vector<bool> node_pos_, node_neg_;  // node instance by pre-order
};

// Ground evaluation of a primitive predicate. Model predicates require
// `facts`; leh is false when an argument is not full.
bool eval_pred(Pred p, const std::vector<const PartialInstance*>& args, const TreeFacts* facts);

}  // namespace dtfoil
