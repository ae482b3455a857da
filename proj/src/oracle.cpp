#include "dtfoil/oracle.hpp"

#include <bit>
#include <unordered_map>

#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"

namespace dtfoil {

Universe::Universe(std::size_t dimension, std::size_t bound) : n_(dimension) {
  if (n_ > bound || n_ > 16) throw OracleBoundExceeded(n_, std::min<std::size_t>(bound, 16));
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_; ++i) total *= 3;
  all_.reserve(total);
  def_.reserve(total);
  one_.reserve(total);
  std::vector<Cell> cells(n_, Cell::Zero);
  for (std::size_t k = 0; k < total; ++k) {
    std::uint32_t d = 0, o = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (cells[i] != Cell::Bot) d |= 1u << i;
      if (cells[i] == Cell::One) o |= 1u << i;
    }
    all_.emplace_back(cells);
    def_.push_back(d);
    one_.push_back(o);
    for (std::size_t i = n_; i-- > 0;) {
      if (cells[i] != Cell::Bot) {
        cells[i] = static_cast<Cell>(static_cast<int>(cells[i]) + 1);
        break;
      }
      cells[i] = Cell::Zero;
    }
  }
}

std::size_t Universe::index_of(const PartialInstance& e) const {
  if (e.dimension() != n_) throw DimensionMismatch(n_, e.dimension());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i) idx = idx * 3 + static_cast<std::size_t>(e[i]);
  return idx;
}

namespace {

int model_slot(Pred p) {
  switch (p) {
    case Pred::AllPos: return 0;
    case Pred::AllNeg: return 1;
    case Pred::Node: return 2;
    case Pred::Leaf: return 3;
    case Pred::PosLeaf: return 4;
    case Pred::NegLeaf: return 5;
    default: return -1;
  }
}

}  // namespace

Oracle::Oracle(std::size_t dimension, const DecisionTree* tree, OracleOptions options)
    : universe_(dimension, options.bound), options_(options) {
  if (tree) {
    if (tree->dimension() != dimension) throw DimensionMismatch(dimension, tree->dimension());
    facts_ = std::make_unique<TreeFacts>(*tree);
  }
}

Oracle::~Oracle() = default;

const std::vector<std::int8_t>& Oracle::model_table(Pred p) {
  int slot = model_slot(p);
  auto& table = model_cache_[slot];
  if (table.empty()) {
    table.resize(universe_.size());
    for (std::size_t i = 0; i < universe_.size(); ++i)
      table[i] = eval_pred(p, {&universe_[i]}, facts_.get());
  }
  return table;
}

std::vector<std::uint32_t> Oracle::guard_indices(Guard g) const {
  std::vector<std::uint32_t> out;
  for (const auto& e : facts_->guard(g)) out.push_back(static_cast<std::uint32_t>(universe_.index_of(e)));
  return out;
}

struct Oracle::Impl {
  struct Arg {
    bool slot;
    std::uint32_t v;  // slot number or universe index
  };
  enum class Kind { Const, Atom, Not, And, Or, Implies, Iff, Quant };
  struct Node {
    Kind kind;
    bool value = false;
    Pred pred = Pred::Subset;
    std::vector<Arg> args;
    std::vector<int> kids;
    bool exists = true;
    std::vector<std::uint32_t> range;  // guard domain; empty means whole universe
    bool guarded = false;
    std::vector<int> qslots;
    std::vector<int> free;
    bool memo = false;
    std::unordered_map<std::uint64_t, bool> cache;
  };

  Oracle& o;
  std::vector<Node> nodes;
  std::map<std::string, int> scope;
  int nslots = 0;
  std::map<Pred, Formula> definitions;

  explicit Impl(Oracle& oracle) : o(oracle) {}

  int bind(const std::string& name) {
    scope[name] = nslots;
    return nslots++;
  }

  const Formula& definition(Pred p) {
    auto it = definitions.find(p);
    if (it == definitions.end())
      it = definitions.emplace(p, parse_formula(*foil_definition(p), ParseMode::Raw)).first;
    return it->second;
  }

  int add(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int compile(const Formula& f) {
    return std::visit(
        [&](const auto& x) -> int {
          using T = std::decay_t<decltype(x)>;
          Node n;
          if constexpr (std::is_same_v<T, ast::Const>) {
            n.kind = Kind::Const;
            n.value = x.value;
          } else if constexpr (std::is_same_v<T, ast::Atom>) {
            const PredInfo& info = pred_info(x.pred);
            if (x.args.size() != info.arity)
              throw Error(std::string("predicate ") + info.name + " arity mismatch");
            if (info.model && !o.facts_)
              throw Error(std::string("predicate ") + info.name + " needs a model");
            if (o.options_.expand_definitions && foil_definition(x.pred)) {
              static const char* names[] = {"a", "b", "c"};
              std::vector<std::pair<std::string, Term>> subst;
              for (std::size_t i = 0; i < x.args.size(); ++i) subst.emplace_back(names[i], x.args[i]);
              return compile(substitute(definition(x.pred), subst));
            }
            n.kind = Kind::Atom;
            n.pred = x.pred;
            for (const Term& t : x.args) {
              if (t.is_var()) {
                auto it = scope.find(t.name());
                if (it == scope.end()) throw Error("unbound variable '" + t.name() + "'");
                n.args.push_back({true, static_cast<std::uint32_t>(it->second)});
              } else {
                n.args.push_back({false, static_cast<std::uint32_t>(o.universe_.index_of(t.value()))});
              }
            }
          } else if constexpr (std::is_same_v<T, ast::Not>) {
            n.kind = Kind::Not;
            n.kids.push_back(compile(x.child));
          } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
            n.kind = std::is_same_v<T, ast::And> ? Kind::And : Kind::Or;
            for (const Formula& c : x.children) n.kids.push_back(compile(c));
          } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
            n.kind = std::is_same_v<T, ast::Implies> ? Kind::Implies : Kind::Iff;
            n.kids.push_back(compile(x.lhs));
            n.kids.push_back(compile(x.rhs));
          } else {
            n.kind = Kind::Quant;
            n.exists = x.q == Quantifier::Exists;
            std::vector<std::string> vars;
            if constexpr (std::is_same_v<T, ast::Quant>) {
              vars.push_back(x.var);
              if (x.guard) {
                if (!o.facts_) throw Error("guarded quantifier needs a model");
                n.guarded = true;
                n.range = o.guard_indices(*x.guard);
              }
            } else {
              vars = x.vars;
            }
            std::map<std::string, int> saved = scope;
            for (const auto& v : vars) n.qslots.push_back(bind(v));
            n.kids.push_back(compile(x.body));
            scope = std::move(saved);
          }
          return add(std::move(n));
        },
        f.node());
  }

  std::vector<int> free_of(int id) {
    Node& n = nodes[id];
    std::vector<int> out;
    for (const Arg& a : n.args)
      if (a.slot) out.push_back(static_cast<int>(a.v));
    for (int k : n.kids) {
      auto sub = free_of(k);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (n.kind == Kind::Quant) {
      std::erase_if(out, [&](int s) {
        return std::find(n.qslots.begin(), n.qslots.end(), s) != n.qslots.end();
      });
      n.free = out;
      n.memo = out.size() <= 4 && o.universe_.size() <= 65536;
    }
    return out;
  }

  bool atom(const Node& n, const std::vector<std::uint32_t>& env) {
    auto val = [&](std::size_t i) -> std::uint32_t {
      return n.args[i].slot ? env[n.args[i].v] : n.args[i].v;
    };
    const Universe& u = o.universe_;
    switch (n.pred) {
      case Pred::Subset: {
        auto a = val(0), b = val(1);
        std::uint32_t da = u.defined_mask(a), db = u.defined_mask(b);
        return (da & ~db) == 0 && ((u.one_mask(a) ^ u.one_mask(b)) & da) == 0;
      }
      case Pred::Pref:
        return std::popcount(u.defined_mask(val(0))) <= std::popcount(u.defined_mask(val(1)));
      case Pred::Equal: return val(0) == val(1);
      case Pred::AllPos:
      case Pred::AllNeg:
      case Pred::Node:
      case Pred::Leaf:
      case Pred::PosLeaf:
      case Pred::NegLeaf: return o.model_table(n.pred)[val(0)];
      case Pred::Pos: return u[val(0)].is_full() && o.model_table(Pred::AllPos)[val(0)];
      case Pred::Neg: return u[val(0)].is_full() && o.model_table(Pred::AllNeg)[val(0)];
      default: {
        std::vector<const PartialInstance*> args;
        for (std::size_t i = 0; i < n.args.size(); ++i) args.push_back(&u[val(i)]);
        return eval_pred(n.pred, args, o.facts_.get());
      }
    }
  }

  bool quant(Node& n, std::vector<std::uint32_t>& env, std::size_t k) {
    if (k == n.qslots.size()) return eval(n.kids[0], env);
    int slot = n.qslots[k];
    if (n.guarded) {
      for (std::uint32_t v : n.range) {
        env[slot] = v;
        if (quant(n, env, k + 1) == n.exists) return n.exists;
      }
    } else {
      std::uint32_t total = static_cast<std::uint32_t>(o.universe_.size());
      for (std::uint32_t v = 0; v < total; ++v) {
        env[slot] = v;
        if (quant(n, env, k + 1) == n.exists) return n.exists;
      }
    }
    return !n.exists;
  }

  bool eval(int id, std::vector<std::uint32_t>& env) {
    Node& n = nodes[id];
    switch (n.kind) {
      case Kind::Const: return n.value;
      case Kind::Atom: return atom(n, env);
      case Kind::Not: return !eval(n.kids[0], env);
      case Kind::And:
        for (int k : n.kids)
          if (!eval(k, env)) return false;
        return true;
      case Kind::Or:
        for (int k : n.kids)
          if (eval(k, env)) return true;
        return false;
      case Kind::Implies: return !eval(n.kids[0], env) || eval(n.kids[1], env);
      case Kind::Iff: return eval(n.kids[0], env) == eval(n.kids[1], env);
      case Kind::Quant: {
        std::uint64_t key = 0;
        if (n.memo) {
          for (int s : n.free) key = (key << 16) | env[s];
          auto it = n.cache.find(key);
          if (it != n.cache.end()) return it->second;
        }
        std::vector<std::uint32_t> saved;
        for (int s : n.qslots) saved.push_back(env[s]);
        bool r = quant(n, env, 0);
        for (std::size_t i = 0; i < n.qslots.size(); ++i) env[n.qslots[i]] = saved[i];
        if (n.memo) n.cache.emplace(key, r);
        return r;
      }
    }
    throw InternalError("oracle node kind");
  }

  // Compiles f with `env` bound to the first slots; returns the root.
  int prepare(const Formula& f, const Env& env, std::vector<std::uint32_t>& values) {
    for (const auto& [name, e] : env) {
      bind(name);
      values.push_back(static_cast<std::uint32_t>(o.universe_.index_of(e)));
    }
    int root = compile(f);
    free_of(root);
    values.resize(static_cast<std::size_t>(nslots), 0);
    return root;
  }
};

bool Oracle::eval(const Formula& f, const Env& env) {
  Impl impl(*this);
  std::vector<std::uint32_t> values;
  int root = impl.prepare(f, env, values);
  return impl.eval(root, values);
}

std::vector<PartialInstance> Oracle::satisfiers(const Formula& f, const std::string& var,
                                                const Env& env) {
  Impl impl(*this);
  Env bound = env;
  bound.erase(var);
  std::vector<std::uint32_t> values;
  int slot = impl.bind(var);
  values.push_back(0);
  int root = impl.prepare(f, bound, values);
  std::vector<PartialInstance> out;
  for (std::uint32_t v = 0; v < universe_.size(); ++v) {
    values[static_cast<std::size_t>(slot)] = v;
    if (impl.eval(root, values)) out.push_back(universe_[v]);
  }
  return out;
}

std::vector<PartialInstance> Oracle::minimals(const OptFormula& psi, const Env& params) {
  std::vector<PartialInstance> sats = satisfiers(psi.phi, psi.target, params);
  Impl impl(*this);
  Env bound = params;
  bound.erase(psi.lhs);
  bound.erase(psi.rhs);
  std::vector<std::uint32_t> values;
  int ls = impl.bind(psi.lhs);
  int rs = impl.bind(psi.rhs);
  values.assign(2, 0);
  int root = impl.prepare(psi.rho, bound, values);
  std::vector<std::uint32_t> idx;
  for (const auto& e : sats) idx.push_back(static_cast<std::uint32_t>(universe_.index_of(e)));
  std::vector<PartialInstance> out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    bool minimal = true;
    values[static_cast<std::size_t>(rs)] = idx[i];
    for (std::size_t j = 0; j < idx.size() && minimal; ++j) {
      values[static_cast<std::size_t>(ls)] = idx[j];
      if (impl.eval(root, values)) minimal = false;
    }
    if (minimal) out.push_back(sats[i]);
  }
  return out;
}

std::vector<std::vector<bool>> Oracle::relation(const Formula& rho, const std::string& lhs,
                                                const std::string& rhs, const Env& params) {
  Impl impl(*this);
  Env bound = params;
  bound.erase(lhs);
  bound.erase(rhs);
  std::vector<std::uint32_t> values;
  int ls = impl.bind(lhs);
  int rs = impl.bind(rhs);
  values.assign(2, 0);
  int root = impl.prepare(rho, bound, values);
  std::size_t total = universe_.size();
  std::vector<std::vector<bool>> out(total, std::vector<bool>(total));
  for (std::uint32_t i = 0; i < total; ++i) {
    values[static_cast<std::size_t>(ls)] = i;
    for (std::uint32_t j = 0; j < total; ++j) {
      values[static_cast<std::size_t>(rs)] = j;
      out[i][j] = impl.eval(root, values);
    }
  }
  return out;
}

bool oracle_eval(const Formula& f, const DecisionTree& tree, const Env& env, OracleOptions options) {
  Oracle o(tree.dimension(), &tree, options);
  return o.eval(f, env);
}

std::vector<PartialInstance> oracle_minimals(const OptFormula& psi, const DecisionTree& tree,
                                             const Env& params, OracleOptions options) {
  Oracle o(tree.dimension(), &tree, options);
  return o.minimals(psi, params);
}

namespace atoms {

bool eval_ground_atomic(const Formula& f, std::size_t n, std::size_t bound) {
  OracleOptions options;
  options.bound = bound;
  Oracle o(n, nullptr, options);
  return o.eval(f);
}

}  // namespace atoms

}  // namespace dtfoil
