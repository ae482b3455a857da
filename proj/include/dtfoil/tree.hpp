#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dtfoil/instance.hpp"

namespace dtfoil {

using NodeId = std::uint32_t;

struct InternalNode {
  std::size_t feature;  // 0-indexed
  NodeId child0;
  NodeId child1;
};

struct LeafNode {
  bool label;
};

using TreeNode = std::variant<InternalNode, LeafNode>;

enum class Guard { Node, PosLeaf, NegLeaf };

const char* guard_name(Guard g);

// Rooted binary decision tree over instances of a fixed dimension. The node
// arena is validated on construction and immutable afterwards.
class DecisionTree {
 public:
  // Throws InvalidTree when the arena is not a tree, a feature is out of
  // range, or a feature repeats on a root-to-leaf path.
  DecisionTree(std::size_t dimension, std::vector<TreeNode> nodes, NodeId root);

  static DecisionTree constant(std::size_t dimension, bool label);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return root_; }
  const TreeNode& node(NodeId id) const;
  bool is_leaf(NodeId id) const { return std::holds_alternative<LeafNode>(node(id)); }
  std::size_t leaf_count() const;

  // Pre-order ids (child0 before child1).
  const std::vector<NodeId>& preorder() const { return preorder_; }

  friend bool operator==(const DecisionTree&, const DecisionTree&);

 private:
  std::size_t dimension_;
  std::vector<TreeNode> nodes_;
  NodeId root_;
  std::vector<NodeId> preorder_;
};

bool operator==(const InternalNode& a, const InternalNode& b);
bool operator==(const LeafNode& a, const LeafNode& b);

bool classify(const DecisionTree& tree, const Instance& e);
// Convenience overload; throws if e has undefined features.
bool classify(const DecisionTree& tree, const PartialInstance& e);

// e_u: the cells fixed by the edges on the root path of u.
PartialInstance node_instance(const DecisionTree& tree, NodeId u);

// Node instances of every node matching the guard, deduplicated, pre-order.
std::vector<PartialInstance> guard_instances(const DecisionTree& tree, Guard guard);

DecisionTree load_tree(const std::filesystem::path& path);
DecisionTree tree_from_json(const std::string& text);
std::string tree_to_json(const DecisionTree& tree);
void save_tree(const DecisionTree& tree, const std::filesystem::path& path);

// Grows a tree by splitting a uniformly chosen expandable leaf on a uniformly
// chosen unused feature until it has `leaf_budget` leaves; labels are fair
// coins. Throws Error when leaf_budget is zero or exceeds 2^dimension.
DecisionTree random_tree(std::size_t dimension, std::size_t leaf_budget, std::uint64_t seed);

// Human-readable indented rendering (1-indexed features).
std::string render_tree(const DecisionTree& tree);

}  // namespace dtfoil
