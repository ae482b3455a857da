#include "dtfoil/tree.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dtfoil/error.hpp"

namespace dtfoil {

using json = nlohmann::json;

const char* guard_name(Guard g) {
  switch (g) {
    case Guard::Node: return "Node";
    case Guard::PosLeaf: return "PosLeaf";
    case Guard::NegLeaf: return "NegLeaf";
  }
  return "?";
}

bool operator==(const InternalNode& a, const InternalNode& b) {
  return a.feature == b.feature && a.child0 == b.child0 && a.child1 == b.child1;
}
bool operator==(const LeafNode& a, const LeafNode& b) { return a.label == b.label; }

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  return a.dimension_ == b.dimension_ && a.root_ == b.root_ && a.nodes_ == b.nodes_;
}

DecisionTree::DecisionTree(std::size_t dimension, std::vector<TreeNode> nodes, NodeId root)
    : dimension_(dimension), nodes_(std::move(nodes)), root_(root) {
  if (nodes_.empty()) throw InvalidTree("no nodes");
  if (root_ >= nodes_.size()) throw InvalidTree("root id " + std::to_string(root_) + " is dangling");

  std::vector<int> parents(nodes_.size(), 0);
  for (const TreeNode& n : nodes_) {
    if (const auto* in = std::get_if<InternalNode>(&n)) {
      if (in->feature >= dimension_)
        throw InvalidTree("feature " + std::to_string(in->feature + 1) + " outside 1.." +
                          std::to_string(dimension_));
      for (NodeId c : {in->child0, in->child1}) {
        if (c >= nodes_.size()) throw InvalidTree("child id " + std::to_string(c) + " is dangling");
        ++parents[c];
      }
    }
  }
  if (parents[root_] != 0) throw InvalidTree("root has a parent");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (i != root_ && parents[i] != 1)
      throw InvalidTree("node " + std::to_string(i) + " has " + std::to_string(parents[i]) +
                        " parents");

  // Walk from the root; reaching every node exactly once rules out cycles.
  std::vector<bool> on_path(dimension_, false);
  std::vector<bool> seen(nodes_.size(), false);
  struct Frame { NodeId id; bool exiting; };
  std::vector<Frame> stack{{root_, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const TreeNode& n = nodes_[f.id];
    const auto* in = std::get_if<InternalNode>(&n);
    if (f.exiting) {
      on_path[in->feature] = false;
      continue;
    }
    if (seen[f.id]) throw InvalidTree("cycle through node " + std::to_string(f.id));
    seen[f.id] = true;
    preorder_.push_back(f.id);
    if (!in) continue;
    if (on_path[in->feature])
      throw InvalidTree("feature " + std::to_string(in->feature + 1) + " repeats on a path");
    on_path[in->feature] = true;
    stack.push_back({f.id, true});
    stack.push_back({in->child1, false});
    stack.push_back({in->child0, false});
  }
  if (preorder_.size() != nodes_.size()) throw InvalidTree("nodes unreachable from the root");
}

DecisionTree DecisionTree::constant(std::size_t dimension, bool label) {
  return DecisionTree(dimension, {LeafNode{label}}, 0);
}

const TreeNode& DecisionTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw Error("unknown node id " + std::to_string(id));
  return nodes_[id];
}

std::size_t DecisionTree::leaf_count() const {
  std::size_t k = 0;
  for (const TreeNode& n : nodes_) k += std::holds_alternative<LeafNode>(n);
  return k;
}

bool classify(const DecisionTree& tree, const Instance& e) {
  if (e.dimension() != tree.dimension()) throw DimensionMismatch(tree.dimension(), e.dimension());
  NodeId u = tree.root();
  for (;;) {
    const TreeNode& n = tree.node(u);
    if (const auto* leaf = std::get_if<LeafNode>(&n)) return leaf->label;
    const auto& in = std::get<InternalNode>(n);
    u = e.bit(in.feature) ? in.child1 : in.child0;
  }
}

bool classify(const DecisionTree& tree, const PartialInstance& e) {
  return classify(tree, Instance(e));
}

PartialInstance node_instance(const DecisionTree& tree, NodeId u) {
  tree.node(u);  // validates id
  std::vector<NodeId> parent(tree.size(), tree.root());
  std::vector<std::pair<std::size_t, Cell>> edge_of(tree.size(), {0, Cell::Bot});
  for (NodeId id : tree.preorder()) {
    if (const auto* in = std::get_if<InternalNode>(&tree.node(id))) {
      parent[in->child0] = id;
      parent[in->child1] = id;
      edge_of[in->child0] = {in->feature, Cell::Zero};
      edge_of[in->child1] = {in->feature, Cell::One};
    }
  }
  PartialInstance e = PartialInstance::all_bot(tree.dimension());
  for (NodeId v = u; v != tree.root(); v = parent[v]) e[edge_of[v].first] = edge_of[v].second;
  return e;
}

std::vector<PartialInstance> guard_instances(const DecisionTree& tree, Guard guard) {
  std::vector<PartialInstance> out;
  std::set<PartialInstance> seen;
  // One pre-order walk that carries the current e_u.
  PartialInstance cur = PartialInstance::all_bot(tree.dimension());
  struct Frame { NodeId id; std::size_t feature; Cell value; bool restore; };
  std::vector<Frame> stack{{tree.root(), 0, Cell::Bot, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.restore) {
      cur[f.feature] = Cell::Bot;
      continue;
    }
    if (f.value != Cell::Bot) cur[f.feature] = f.value;
    const TreeNode& n = tree.node(f.id);
    bool match = false;
    if (const auto* leaf = std::get_if<LeafNode>(&n)) {
      match = guard == Guard::Node || (guard == Guard::PosLeaf && leaf->label) ||
              (guard == Guard::NegLeaf && !leaf->label);
    } else {
      match = guard == Guard::Node;
    }
    if (match && seen.insert(cur).second) out.push_back(cur);
    if (const auto* in = std::get_if<InternalNode>(&n)) {
      // the restore frame for a child resets the feature set on entry
      stack.push_back({0, in->feature, Cell::Bot, true});
      stack.push_back({in->child1, in->feature, Cell::One, false});
      stack.push_back({0, in->feature, Cell::Bot, true});
      stack.push_back({in->child0, in->feature, Cell::Zero, false});
    }
  }
  return out;
}

namespace {

DecisionTree from_json_value(const json& j) {
  if (!j.is_object()) throw InvalidTree("top-level value must be an object");
  for (const char* key : {"dimension", "root", "nodes"})
    if (!j.contains(key)) throw InvalidTree(std::string("missing key \"") + key + "\"");
  if (!j["dimension"].is_number_unsigned() && !(j["dimension"].is_number_integer() && j["dimension"].get<long long>() >= 0))
    throw InvalidTree("\"dimension\" must be a non-negative integer");
  if (!j["root"].is_number_integer() || j["root"].get<long long>() < 0)
    throw InvalidTree("\"root\" must be a non-negative integer");
  if (!j["nodes"].is_array()) throw InvalidTree("\"nodes\" must be an array");

  std::size_t dim = j["dimension"].get<std::size_t>();
  const json& arr = j["nodes"];
  std::vector<TreeNode> nodes(arr.size(), LeafNode{false});
  std::vector<bool> filled(arr.size(), false);
  auto id_field = [&](const json& obj, const char* key) -> NodeId {
    if (!obj.contains(key) || !obj[key].is_number_integer() || obj[key].get<long long>() < 0)
      throw InvalidTree(std::string("node field \"") + key + "\" must be a non-negative integer");
    long long v = obj[key].get<long long>();
    if (static_cast<unsigned long long>(v) >= arr.size())
      throw InvalidTree(std::string("\"") + key + "\" = " + std::to_string(v) + " is dangling");
    return static_cast<NodeId>(v);
  };
  for (const json& obj : arr) {
    if (!obj.is_object()) throw InvalidTree("node entries must be objects");
    NodeId id = id_field(obj, "id");
    if (filled[id]) throw InvalidTree("duplicate node id " + std::to_string(id));
    filled[id] = true;
    if (!obj.contains("kind") || !obj["kind"].is_string()) throw InvalidTree("node without \"kind\"");
    std::string kind = obj["kind"].get<std::string>();
    if (kind == "leaf") {
      if (!obj.contains("label") || !obj["label"].is_boolean())
        throw InvalidTree("leaf " + std::to_string(id) + " needs a boolean \"label\"");
      nodes[id] = LeafNode{obj["label"].get<bool>()};
    } else if (kind == "internal") {
      if (!obj.contains("feature") || !obj["feature"].is_number_integer())
        throw InvalidTree("internal node " + std::to_string(id) + " needs an integer \"feature\"");
      long long f = obj["feature"].get<long long>();
      if (f < 1 || static_cast<unsigned long long>(f) > dim)
        throw InvalidTree("feature " + std::to_string(f) + " outside 1.." + std::to_string(dim));
      nodes[id] = InternalNode{static_cast<std::size_t>(f - 1), id_field(obj, "child0"),
                               id_field(obj, "child1")};
    } else {
      throw InvalidTree("unknown node kind \"" + kind + "\"");
    }
  }
  long long root = j["root"].get<long long>();
  if (static_cast<unsigned long long>(root) >= arr.size())
    throw InvalidTree("root id " + std::to_string(root) + " is dangling");
  return DecisionTree(dim, std::move(nodes), static_cast<NodeId>(root));
}

}  // namespace

DecisionTree tree_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  return from_json_value(j);
}

DecisionTree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return tree_from_json(ss.str());
}

std::string tree_to_json(const DecisionTree& tree) {
  json nodes = json::array();
  for (NodeId id = 0; id < tree.size(); ++id) {
    json obj;
    obj["id"] = id;
    if (const auto* leaf = std::get_if<LeafNode>(&tree.node(id))) {
      obj["kind"] = "leaf";
      obj["label"] = leaf->label;
    } else {
      const auto& in = std::get<InternalNode>(tree.node(id));
      obj["kind"] = "internal";
      obj["feature"] = in.feature + 1;
      obj["child0"] = in.child0;
      obj["child1"] = in.child1;
    }
    nodes.push_back(std::move(obj));
  }
  json j;
  j["dimension"] = tree.dimension();
  j["root"] = tree.root();
  j["nodes"] = std::move(nodes);
  return j.dump(1);
}

void save_tree(const DecisionTree& tree, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << tree_to_json(tree) << '\n';
}

DecisionTree random_tree(std::size_t dimension, std::size_t leaf_budget, std::uint64_t seed) {
  if (dimension < 1) throw Error("random_tree: dimension must be at least 1");
  if (leaf_budget < 1) throw Error("random_tree: leaf budget must be at least 1");
  if (dimension < 63 && leaf_budget > (std::size_t{1} << dimension))
    throw Error("random_tree: leaf budget " + std::to_string(leaf_budget) + " exceeds 2^" +
                std::to_string(dimension));

  std::mt19937_64 rng(seed);
  struct Grow {
    std::vector<bool> used;  // features on the root path
    std::size_t depth;
  };
  std::vector<TreeNode> nodes{LeafNode{false}};
  std::vector<Grow> info{{std::vector<bool>(dimension, false), 0}};
  std::vector<NodeId> expandable;
  if (dimension > 0) expandable.push_back(0);
  std::size_t leaves = 1;
  while (leaves < leaf_budget) {
    std::uniform_int_distribution<std::size_t> pick_leaf(0, expandable.size() - 1);
    std::size_t slot = pick_leaf(rng);
    NodeId leaf = expandable[slot];
    expandable[slot] = expandable.back();
    expandable.pop_back();

    std::vector<std::size_t> unused;
    for (std::size_t f = 0; f < dimension; ++f)
      if (!info[leaf].used[f]) unused.push_back(f);
    std::uniform_int_distribution<std::size_t> pick_feature(0, unused.size() - 1);
    std::size_t feature = unused[pick_feature(rng)];

    NodeId c0 = static_cast<NodeId>(nodes.size());
    NodeId c1 = c0 + 1;
    Grow child{info[leaf].used, info[leaf].depth + 1};
    child.used[feature] = true;
    nodes.push_back(LeafNode{false});
    nodes.push_back(LeafNode{false});
    info.push_back(child);
    info.push_back(child);
    nodes[leaf] = InternalNode{feature, c0, c1};
    if (child.depth < dimension) {
      expandable.push_back(c0);
      expandable.push_back(c1);
    }
    ++leaves;
  }
  std::bernoulli_distribution coin(0.5);
  for (TreeNode& n : nodes)
    if (auto* leaf = std::get_if<LeafNode>(&n)) leaf->label = coin(rng);
  return DecisionTree(dimension, std::move(nodes), 0);
}

std::string render_tree(const DecisionTree& tree) {
  std::ostringstream out;
  struct Frame { NodeId id; int depth; std::string edge; };
  std::vector<Frame> stack{{tree.root(), 0, ""}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    out << std::string(static_cast<std::size_t>(f.depth) * 2, ' ') << f.edge;
    if (const auto* leaf = std::get_if<LeafNode>(&tree.node(f.id))) {
      out << (leaf->label ? "true" : "false") << "  [" << f.id << "]\n";
    } else {
      const auto& in = std::get<InternalNode>(tree.node(f.id));
      out << "x" << in.feature + 1 << "  [" << f.id << "]\n";
      stack.push_back({in.child1, f.depth + 1, "1: "});
      stack.push_back({in.child0, f.depth + 1, "0: "});
    }
  }
  return out.str();
}

}  // namespace dtfoil
