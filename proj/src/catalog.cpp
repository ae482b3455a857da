#include "dtfoil/catalog.hpp"

#include <algorithm>

#include "dtfoil/atoms.hpp"
#include "dtfoil/error.hpp"

namespace dtfoil {

namespace {

const std::vector<PredInfo> kPreds = {
    {Pred::Subset, "subset", 2, false},   {Pred::Pref, "pref", 2, false},
    {Pred::Equal, "eq", 2, false},        {Pred::Full, "full", 1, false},
    {Pred::Cons, "cons", 2, false},       {Pred::Suf, "suf", 2, false},
    {Pred::Leh, "leh", 3, false},         {Pred::Undef, "undef", 1, false},
    {Pred::Single, "single", 1, false},   {Pred::Comp, "comp", 2, false},
    {Pred::MaxComp, "maxcomp", 2, false}, {Pred::Rel, "rel", 2, false},
    {Pred::MaxRel, "maxrel", 2, false},   {Pred::Opp, "opp", 2, false},
    {Pred::Glb, "glb", 3, false},         {Pred::Join, "join", 3, false},
    {Pred::Predecessor, "pred", 2, false}, {Pred::AllPos, "allpos", 1, true},
    {Pred::AllNeg, "allneg", 1, true},    {Pred::Pos, "pos", 1, true},
    {Pred::Neg, "neg", 1, true},          {Pred::Node, "node", 1, true},
    {Pred::Leaf, "leaf", 1, true},        {Pred::PosLeaf, "posleaf", 1, true},
    {Pred::NegLeaf, "negleaf", 1, true},
};

}  // namespace

const std::vector<PredInfo>& all_preds() { return kPreds; }

const PredInfo& pred_info(Pred p) { return kPreds.at(static_cast<std::size_t>(p)); }

std::optional<Pred> pred_by_name(std::string_view name) {
  for (const auto& info : kPreds)
    if (name == info.name) return info.pred;
  return std::nullopt;
}

std::optional<std::string> foil_definition(Pred p) {
  switch (p) {
    case Pred::Equal: return "a <= b and b <= a";
    case Pred::Full: return "forall t, (a <= t -> t <= a)";
    case Pred::Cons: return "exists t, (a <= t and b <= t)";
    case Pred::Undef: return "not (exists t, t < a)";
    case Pred::Single: return "(exists t, t < a) and (forall t, (t < a -> undef(t)))";
    case Pred::Join:
      return "a <= c and b <= c and not (exists t, (a <= t and b <= t and t < c))";
    case Pred::Glb:
      return "c <= a and c <= b and not (exists t, (t <= a and t <= b and c < t))";
    case Pred::Comp:
      return "exists s, exists t, (undef(t) and join(a, b, s) and glb(a, b, t))";
    case Pred::MaxComp: return "comp(a, b) and not (exists t, (b < t and comp(a, t)))";
    case Pred::Rel: return "not (exists t, (t <= b and single(t) and comp(a, t)))";
    case Pred::MaxRel: return "rel(a, b) and not (exists t, (b < t and rel(a, t)))";
    case Pred::Opp:
      return "(exists s, ((forall t, s <= t) and s < a and not (exists t, (s < t and t < a)))) and "
             "(exists s, ((forall t, s <= t) and s < b and not (exists t, (s < t and t < b)))) and "
             "not (exists t, (a <= t and b <= t))";
    case Pred::Suf:
      return "forall s, forall t, (opp(s, t) -> "
             "((s <= a and s <= b and not (t <= a) and not (t <= b)) or "
             "(t <= a and t <= b and not (s <= a) and not (s <= b)) or "
             "(s <= a and t <= b and not (s <= b) and not (t <= a)) or "
             "(s <= b and t <= a and not (s <= a) and not (t <= b)) or "
             "(not (s <= a) and not (s <= b) and not (t <= a) and not (t <= b))))";
    case Pred::Leh:
      return "full(a) and full(b) and full(c) and "
             "exists s, exists t, (glb(a, b, s) and glb(a, c, t) and pref(t, s))";
    case Pred::Predecessor: return "a < b and not (exists t, (a < t and t < b))";
    default: return std::nullopt;
  }
}

TreeFacts::TreeFacts(const DecisionTree& tree) : tree_(&tree) {
  nodes_ = guard_instances(tree, Guard::Node);
  pos_ = guard_instances(tree, Guard::PosLeaf);
  neg_ = guard_instances(tree, Guard::NegLeaf);
  for (NodeId u : tree.preorder())
    if (tree.is_leaf(u)) leaves_.push_back(node_instance(tree, u));
  std::sort(pos_.begin(), pos_.end());
  std::sort(neg_.begin(), neg_.end());
  std::sort(leaves_.begin(), leaves_.end());
}

namespace {

// True iff no completion of e reaches a leaf labeled `avoid`.
bool avoids(const DecisionTree& tree, const PartialInstance& e, bool avoid) {
  if (e.dimension() != tree.dimension()) throw DimensionMismatch(tree.dimension(), e.dimension());
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    const TreeNode& n = tree.node(u);
    if (const auto* leaf = std::get_if<LeafNode>(&n)) {
      if (leaf->label == avoid) return false;
      continue;
    }
    const auto& in = std::get<InternalNode>(n);
    Cell c = e[in.feature];
    if (c != Cell::One) stack.push_back(in.child0);
    if (c != Cell::Zero) stack.push_back(in.child1);
  }
  return true;
}

bool contains(const std::vector<PartialInstance>& sorted, const PartialInstance& e) {
  return std::binary_search(sorted.begin(), sorted.end(), e);
}

}  // namespace

bool TreeFacts::all_pos(const PartialInstance& e) const { return avoids(*tree_, e, false); }
bool TreeFacts::all_neg(const PartialInstance& e) const { return avoids(*tree_, e, true); }

bool TreeFacts::is_node(const PartialInstance& e) const {
  return std::find(nodes_.begin(), nodes_.end(), e) != nodes_.end();
}
bool TreeFacts::is_leaf(const PartialInstance& e) const { return contains(leaves_, e); }
bool TreeFacts::is_pos_leaf(const PartialInstance& e) const { return contains(pos_, e); }
bool TreeFacts::is_neg_leaf(const PartialInstance& e) const { return contains(neg_, e); }

const std::vector<PartialInstance>& TreeFacts::guard(Guard g) const {
  switch (g) {
    case Guard::Node: return nodes_;
    case Guard::PosLeaf: return pos_;
    default: return neg_;
  }
}

bool eval_pred(Pred p, const std::vector<const PartialInstance*>& args, const TreeFacts* facts) {
  const PredInfo& info = pred_info(p);
  if (args.size() != info.arity)
    throw Error(std::string("predicate ") + info.name + " expects " +
                std::to_string(info.arity) + " arguments");
  if (info.model && !facts) throw Error(std::string("predicate ") + info.name + " needs a model");
  const PartialInstance& a = *args[0];
  auto b = [&]() -> const PartialInstance& { return *args[1]; };
  auto c = [&]() -> const PartialInstance& { return *args[2]; };
  if (facts && a.dimension() != facts->dimension())
    throw DimensionMismatch(facts->dimension(), a.dimension());
  switch (p) {
    case Pred::Subset: return atoms::subsumes(a, b());
    case Pred::Pref: return atoms::card_le(a, b());
    case Pred::Equal:
      if (a.dimension() != b().dimension()) throw DimensionMismatch(a.dimension(), b().dimension());
      return a == b();
    case Pred::Full: return atoms::full(a);
    case Pred::Cons: return atoms::cons(a, b());
    case Pred::Suf: return atoms::suf(a, b());
    case Pred::Leh:
      if (!a.is_full() || !b().is_full() || !c().is_full()) {
        if (a.dimension() != b().dimension()) throw DimensionMismatch(a.dimension(), b().dimension());
        if (a.dimension() != c().dimension()) throw DimensionMismatch(a.dimension(), c().dimension());
        return false;
      }
      return atoms::leh(a, b(), c());
    case Pred::Undef: return atoms::undef(a);
    case Pred::Single: return atoms::single(a);
    case Pred::Comp: return atoms::comp(a, b());
    case Pred::MaxComp: return atoms::max_comp(a, b());
    case Pred::Rel: return atoms::rel(a, b());
    case Pred::MaxRel: return atoms::max_rel(a, b());
    case Pred::Opp: return atoms::opp(a, b());
    case Pred::Glb: {
      PartialInstance m = atoms::meet(a, b());
      if (m.dimension() != c().dimension()) throw DimensionMismatch(m.dimension(), c().dimension());
      return m == c();
    }
    case Pred::Join: {
      auto j = atoms::join(a, b());
      if (a.dimension() != c().dimension()) throw DimensionMismatch(a.dimension(), c().dimension());
      return j && *j == c();
    }
    case Pred::Predecessor: return atoms::pred(a, b());
    case Pred::AllPos: return facts->all_pos(a);
    case Pred::AllNeg: return facts->all_neg(a);
    case Pred::Pos: return a.is_full() && facts->all_pos(a);
    case Pred::Neg: return a.is_full() && facts->all_neg(a);
    case Pred::Node: return facts->is_node(a);
    case Pred::Leaf: return facts->is_leaf(a);
    case Pred::PosLeaf: return facts->is_pos_leaf(a);
    case Pred::NegLeaf: return facts->is_neg_leaf(a);
  }
  throw InternalError("unknown predicate");
}

}  // namespace dtfoil
