#include "dtfoil/encoder.hpp"

#include <algorithm>
#include <set>

#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"
#include "dtfoil/transform.hpp"

namespace dtfoil {

namespace {

Formula expand_rec(const Formula& f, const TreeFacts& facts, bool simp, GuardStats* stats) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
          return f;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return Formula::negate(expand_rec(x.child, facts, simp, stats));
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          std::vector<Formula> kids;
          kids.reserve(x.children.size());
          for (const Formula& c : x.children) kids.push_back(expand_rec(c, facts, simp, stats));
          return std::is_same_v<T, ast::And> ? Formula::conj(std::move(kids))
                                             : Formula::disj(std::move(kids));
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          return Formula::implies(expand_rec(x.lhs, facts, simp, stats),
                                  expand_rec(x.rhs, facts, simp, stats));
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          return Formula::iff(expand_rec(x.lhs, facts, simp, stats),
                              expand_rec(x.rhs, facts, simp, stats));
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          if (!x.guard)
            return Formula::quant(x.q, x.guard, x.var, expand_rec(x.body, facts, simp, stats));
          if (stats) ++stats->expansions;
          bool forall = x.q == Quantifier::Forall;
          std::vector<Formula> parts;
          for (const PartialInstance& c : facts.guard(*x.guard)) {
            if (stats) ++stats->copies;
            Formula inst = substitute(x.body, x.var, Term::constant(c));
            if (simp) {
              inst = simplify(inst, &facts);
              if (const auto* k = inst.as<ast::Const>()) {
                if (k->value != forall) return Formula::constant(!forall);
                continue;
              }
            }
            parts.push_back(expand_rec(inst, facts, simp, stats));
          }
          if (parts.empty()) return Formula::constant(forall);
          if (parts.size() == 1) return parts[0];
          return forall ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
        } else {
          return Formula::block(x.q, x.vars, expand_rec(x.body, facts, simp, stats));
        }
      },
      f.node());
}

// Structural matcher of a formula against a definition with free
// placeholders; bound variables correspond positionally.
struct Matcher {
  std::map<std::string, Term> bind;
  std::vector<std::pair<std::string, std::string>> bound;  // pattern name, formula name

  bool term(const Term& p, const Term& t) {
    if (!p.is_var()) return p == t;
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == p.name()) return t.is_var() && t.name() == it->second;
    if (t.is_var())
      for (const auto& [pb, fb] : bound)
        if (fb == t.name()) return false;
    auto [it, inserted] = bind.emplace(p.name(), t);
    return inserted || it->second == t;
  }

  bool list(const std::vector<Formula>& p, const std::vector<Formula>& g) {
    if (p.size() != g.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!formula(p[i], g[i])) return false;
    return true;
  }

  bool formula(const Formula& p, const Formula& g) {
    if (p.node().index() != g.node().index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          const T& y = *g.template as<T>();
          if constexpr (std::is_same_v<T, ast::Const>) {
            return x.value == y.value;
          } else if constexpr (std::is_same_v<T, ast::Atom>) {
            if (x.pred != y.pred) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i)
              if (!term(x.args[i], y.args[i])) return false;
            return true;
          } else if constexpr (std::is_same_v<T, ast::Not>) {
            return formula(x.child, y.child);
          } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
            return list(x.children, y.children);
          } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
            return formula(x.lhs, y.lhs) && formula(x.rhs, y.rhs);
          } else if constexpr (std::is_same_v<T, ast::Quant>) {
            if (x.q != y.q || x.guard != y.guard) return false;
            bound.emplace_back(x.var, y.var);
            bool ok = formula(x.body, y.body);
            bound.pop_back();
            return ok;
          } else {
            return false;
          }
        },
        p.node());
  }
};

bool has_quant(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
          return false;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return has_quant(x.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          return std::any_of(x.children.begin(), x.children.end(), has_quant);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          return has_quant(x.lhs) || has_quant(x.rhs);
        } else {
          return true;
        }
      },
      f.node());
}

struct Definition {
  Pred pred;
  Formula body;
};

const std::vector<Definition>& quantified_definitions() {
  static const std::vector<Definition> defs = [] {
    std::vector<Definition> out;
    for (const PredInfo& info : all_preds()) {
      auto text = foil_definition(info.pred);
      if (!text) continue;
      Formula body = parse_formula(*text, ParseMode::Raw);
      if (has_quant(body)) out.push_back({info.pred, body});
    }
    return out;
  }();
  return defs;
}

std::vector<Formula> conjuncts(const Formula& f) {
  if (const auto* a = f.as<ast::And>()) return a->children;
  return {f};
}

// (a, [b1..bk]) of an inner pattern over bound variable w.
std::optional<std::pair<Term, std::vector<Term>>> inner_parts(const Formula& f) {
  const auto* q = f.as<ast::Quant>();
  if (!q || q->guard || q->q != Quantifier::Exists) return std::nullopt;
  const std::string& w = q->var;
  auto is_w = [&](const Term& t) { return t.is_var() && t.name() == w; };
  std::optional<Term> a;
  std::vector<Term> bs;
  for (const Formula& c : conjuncts(q->body)) {
    const auto* at = c.as<ast::Atom>();
    if (!at || (at->pred != Pred::Suf && at->pred != Pred::Cons)) return std::nullopt;
    const Term& l = at->args[0];
    const Term& r = at->args[1];
    if (is_w(l) == is_w(r)) return std::nullopt;
    const Term& other = is_w(l) ? r : l;
    if (at->pred == Pred::Suf) {
      if (a) return std::nullopt;
      a = other;
    } else {
      bs.push_back(other);
    }
  }
  if (!a) return std::nullopt;
  return std::make_pair(*a, bs);
}

enum class Polarity { Pos, Neg, Both };

Polarity flip(Polarity p) {
  return p == Polarity::Pos ? Polarity::Neg : p == Polarity::Neg ? Polarity::Pos : Polarity::Both;
}

class Skolemizer {
 public:
  Skolemizer(std::vector<std::string>& fresh, std::set<std::string> taken)
      : fresh_(fresh), taken_(std::move(taken)) {}

  Formula run(const Formula& f, Polarity pol) {
    return std::visit(
        [&](const auto& x) -> Formula {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
            return f;
          } else {
            if (!has_quant(f) || match_catalog(f) || is_inner_pattern(f)) return f;
            if constexpr (std::is_same_v<T, ast::Not>) {
              return Formula::negate(run(x.child, flip(pol)));
            } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
              std::vector<Formula> kids;
              for (const Formula& c : x.children) kids.push_back(run(c, pol));
              return std::is_same_v<T, ast::And> ? Formula::conj(std::move(kids))
                                                 : Formula::disj(std::move(kids));
            } else if constexpr (std::is_same_v<T, ast::Implies>) {
              return Formula::implies(run(x.lhs, flip(pol)), run(x.rhs, pol));
            } else if constexpr (std::is_same_v<T, ast::Iff>) {
              return Formula::iff(run(x.lhs, Polarity::Both), run(x.rhs, Polarity::Both));
            } else if constexpr (std::is_same_v<T, ast::Quant>) {
              bool witness = !x.guard && ((x.q == Quantifier::Exists && pol == Polarity::Pos) ||
                                          (x.q == Quantifier::Forall && pol == Polarity::Neg));
              if (!witness) return Formula::quant(x.q, x.guard, x.var, run(x.body, pol));
              std::string name;
              do name = x.var + "%" + std::to_string(++counter_);
              while (taken_.count(name));
              taken_.insert(name);
              fresh_.push_back(name);
              return run(substitute(x.body, x.var, Term::var(name)), pol);
            } else {
              return Formula::block(x.q, x.vars, run(x.body, pol));
            }
          }
        },
        f.node());
  }

 private:
  std::vector<std::string>& fresh_;
  std::set<std::string> taken_;
  int counter_ = 0;
};

void all_names(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Atom>) {
          for (const Term& t : x.args)
            if (t.is_var()) out.insert(t.name());
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          all_names(x.child, out);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children) all_names(c, out);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          all_names(x.lhs, out);
          all_names(x.rhs, out);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          out.insert(x.var);
          all_names(x.body, out);
        } else if constexpr (std::is_same_v<T, ast::Block>) {
          out.insert(x.vars.begin(), x.vars.end());
          all_names(x.body, out);
        }
      },
      f.node());
}

// Free variables and constants in first-use order.
void first_use(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& vars,
               std::set<std::string>& seen_vars, std::vector<PartialInstance>& consts,
               std::set<PartialInstance>& seen_consts) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Atom>) {
          for (const Term& t : x.args) {
            if (!t.is_var()) {
              if (seen_consts.insert(t.value()).second) consts.push_back(t.value());
            } else if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() &&
                       seen_vars.insert(t.name()).second) {
              vars.push_back(t.name());
            }
          }
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          first_use(x.child, bound, vars, seen_vars, consts, seen_consts);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children)
            first_use(c, bound, vars, seen_vars, consts, seen_consts);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          first_use(x.lhs, bound, vars, seen_vars, consts, seen_consts);
          first_use(x.rhs, bound, vars, seen_vars, consts, seen_consts);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          bound.push_back(x.var);
          first_use(x.body, bound, vars, seen_vars, consts, seen_consts);
          bound.pop_back();
        } else if constexpr (std::is_same_v<T, ast::Block>) {
          bound.insert(bound.end(), x.vars.begin(), x.vars.end());
          first_use(x.body, bound, vars, seen_vars, consts, seen_consts);
          bound.resize(bound.size() - x.vars.size());
        }
      },
      f.node());
}

}  // namespace

Formula expand_guards(const Formula& f, const TreeFacts& facts, bool simplify_result,
                      GuardStats* stats) {
  Formula out = expand_rec(f, facts, simplify_result, stats);
  return simplify_result ? simplify(out, &facts) : out;
}

std::optional<std::pair<Pred, std::vector<Term>>> match_catalog(const Formula& f) {
  for (const Definition& d : quantified_definitions()) {
    Matcher m;
    if (!m.formula(d.body, f)) continue;
    std::vector<Term> args;
    static const char* names[] = {"a", "b", "c"};
    std::size_t arity = pred_info(d.pred).arity;
    for (std::size_t i = 0; i < arity; ++i) {
      auto it = m.bind.find(names[i]);
      if (it == m.bind.end()) break;
      args.push_back(it->second);
    }
    if (args.size() == arity) return std::make_pair(d.pred, args);
  }
  return std::nullopt;
}

bool is_inner_pattern(const Formula& f) { return inner_parts(f).has_value(); }

Formula skolemize(const Formula& f, std::vector<std::string>& fresh) {
  std::set<std::string> taken;
  all_names(f, taken);
  Skolemizer s(fresh, std::move(taken));
  return s.run(f, Polarity::Pos);
}

Encoder::Encoder(CnfBuilder& builder, const TreeFacts* facts) : b_(&builder), facts_(facts) {
  if (facts && facts->dimension() != builder.dimension())
    throw DimensionMismatch(builder.dimension(), facts->dimension());
}

void Encoder::prepare(const Formula& f) {
  std::vector<std::string> bound, vars;
  std::set<std::string> seen_vars;
  std::vector<PartialInstance> consts;
  std::set<PartialInstance> seen_consts;
  first_use(f, bound, vars, seen_vars, consts, seen_consts);
  for (const auto& v : vars) b_->register_var(v);
  for (const auto& c : consts) b_->register_constant(c);
}

const TreeFacts& Encoder::facts() const {
  if (!facts_) throw Error("model predicate needs a loaded tree");
  return *facts_;
}

std::string Encoder::term_name(const Term& t) const {
  if (t.is_var()) return t.name();
  std::string name = CnfBuilder::constant_name(t.value());
  if (!b_->has_var(name)) throw InternalError("constant " + t.value().to_string() + " not prepared");
  return name;
}

Lit Encoder::lit_true() { return b_->true_lit(); }

Lit Encoder::gate_and(std::vector<Lit> in) {
  std::vector<Lit> lits;
  lits.reserve(in.size());
  for (Lit l : in) {
    if (auto v = b_->fixed(l)) {
      if (!*v) return lit_false();
      continue;
    }
    lits.push_back(l);
  }
  std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i] == -lits[i - 1]) return lit_false();
  if (lits.empty()) return lit_true();
  if (lits.size() == 1) return lits[0];
  auto it = and_cache_.find(lits);
  if (it != and_cache_.end()) return it->second;
  Lit g = b_->new_aux();
  Clause back{g};
  for (Lit l : lits) {
    b_->add_semantic({-g, l});
    back.push_back(-l);
  }
  b_->add_semantic(std::move(back));
  and_cache_.emplace(std::move(lits), g);
  return g;
}

Lit Encoder::gate_or(std::vector<Lit> in) {
  for (Lit& l : in) l = -l;
  return -gate_and(std::move(in));
}

Lit Encoder::gate_iff(Lit a, Lit b) {
  if (auto v = b_->fixed(a)) return *v ? b : -b;
  if (auto v = b_->fixed(b)) return *v ? a : -a;
  if (a == b) return lit_true();
  if (a == -b) return lit_false();
  bool neg = (a < 0) != (b < 0);
  Lit x = std::min(std::abs(a), std::abs(b));
  Lit y = std::max(std::abs(a), std::abs(b));
  auto key = std::make_pair(x, y);
  Lit g;
  auto it = iff_cache_.find(key);
  if (it != iff_cache_.end()) {
    g = it->second;
  } else {
    g = b_->new_aux();
    b_->add_semantic({-g, -x, y});
    b_->add_semantic({-g, x, -y});
    b_->add_semantic({g, x, y});
    b_->add_semantic({g, -x, -y});
    iff_cache_.emplace(key, g);
  }
  return neg ? -g : g;
}

std::vector<Lit> Encoder::counter(const std::vector<Lit>& in) {
  auto it = counter_cache_.find(in);
  if (it != counter_cache_.end()) return it->second;
  Lit T = lit_true();
  Lit F = -T;
  std::vector<Lit> s{T};
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::vector<Lit> t(i + 2);
    t[0] = T;
    for (std::size_t j = 1; j <= i + 1; ++j) {
      Lit prev = j <= i ? s[j] : F;
      t[j] = gate_or({prev, gate_and({s[j - 1], in[i]})});
    }
    s = std::move(t);
  }
  counter_cache_.emplace(in, s);
  return s;
}

const std::vector<Lit>& Encoder::bot_counter(const std::string& x) {
  std::vector<Lit> bots;
  for (std::size_t i = 0; i < b_->dimension(); ++i) bots.push_back(cell(x, i, Cell::Bot));
  counter(bots);
  return counter_cache_.at(bots);
}

Lit Encoder::encode_subsumption(const std::string& x, const std::string& y) {
  std::vector<Lit> parts;
  for (std::size_t i = 0; i < b_->dimension(); ++i)
    parts.push_back(gate_or({cell(x, i, Cell::Bot),
                             gate_and({cell(x, i, Cell::Zero), cell(y, i, Cell::Zero)}),
                             gate_and({cell(x, i, Cell::One), cell(y, i, Cell::One)})}));
  return gate_and(std::move(parts));
}

Lit Encoder::encode_card_le(const std::string& x, const std::string& y) {
  std::vector<Lit> cx = bot_counter(x);
  std::vector<Lit> cy = bot_counter(y);
  std::vector<Lit> parts;
  for (std::size_t j = 1; j < cx.size(); ++j) parts.push_back(gate_implies(cy[j], cx[j]));
  return gate_and(std::move(parts));
}

const std::vector<Lit>& Encoder::reach(const std::string& x) {
  auto it = reach_cache_.find(x);
  if (it != reach_cache_.end()) return it->second;
  const DecisionTree& tree = facts().tree();
  std::vector<Lit> r(tree.size(), 0);
  r[tree.root()] = lit_true();
  for (NodeId u : tree.preorder()) {
    if (tree.is_leaf(u)) continue;
    const auto& in = std::get<InternalNode>(tree.node(u));
    r[in.child0] = gate_and({r[u], -cell(x, in.feature, Cell::One)});
    r[in.child1] = gate_and({r[u], -cell(x, in.feature, Cell::Zero)});
  }
  return reach_cache_.emplace(x, std::move(r)).first->second;
}

Lit Encoder::encode_allpos(const std::string& x) {
  const DecisionTree& tree = facts().tree();
  const std::vector<Lit>& r = reach(x);
  std::vector<Lit> parts;
  for (NodeId u : tree.preorder())
    if (tree.is_leaf(u) && !std::get<LeafNode>(tree.node(u)).label) parts.push_back(-r[u]);
  return gate_and(std::move(parts));
}

Lit Encoder::encode_allneg(const std::string& x) {
  const DecisionTree& tree = facts().tree();
  const std::vector<Lit>& r = reach(x);
  std::vector<Lit> parts;
  for (NodeId u : tree.preorder())
    if (tree.is_leaf(u) && std::get<LeafNode>(tree.node(u)).label) parts.push_back(-r[u]);
  return gate_and(std::move(parts));
}

Lit Encoder::match_set(const std::string& x, const std::vector<PartialInstance>& set) {
  std::vector<Lit> options;
  for (const PartialInstance& c : set) {
    std::vector<Lit> cells;
    for (std::size_t i = 0; i < b_->dimension(); ++i) cells.push_back(cell(x, i, c[i]));
    options.push_back(gate_and(std::move(cells)));
  }
  return gate_or(std::move(options));
}

Lit Encoder::encode_model(Pred p, const std::string& x) {
  switch (p) {
    case Pred::AllPos: return encode_allpos(x);
    case Pred::AllNeg: return encode_allneg(x);
    case Pred::Pos: return gate_and({encode_catalog(Pred::Full, {x}), encode_allpos(x)});
    case Pred::Neg: return gate_and({encode_catalog(Pred::Full, {x}), encode_allneg(x)});
    case Pred::Node: return match_set(x, facts().guard(Guard::Node));
    case Pred::Leaf: return match_set(x, facts().leaves());
    case Pred::PosLeaf: return match_set(x, facts().guard(Guard::PosLeaf));
    case Pred::NegLeaf: return match_set(x, facts().guard(Guard::NegLeaf));
    default: throw InternalError("not a model predicate");
  }
}

Lit Encoder::encode_catalog(Pred p, const std::vector<std::string>& args) {
  const PredInfo& info = pred_info(p);
  if (args.size() != info.arity)
    throw Error(std::string(info.name) + " expects " + std::to_string(info.arity) + " arguments");
  if (info.model) return encode_model(p, args[0]);
  const std::size_t n = b_->dimension();
  auto c = [&](std::size_t k, std::size_t i, Cell s) { return cell(args[k], i, s); };
  std::vector<Lit> parts;
  switch (p) {
    case Pred::Subset: return encode_subsumption(args[0], args[1]);
    case Pred::Pref: return encode_card_le(args[0], args[1]);
    case Pred::Equal:
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(gate_or({gate_and({c(0, i, Cell::Zero), c(1, i, Cell::Zero)}),
                                 gate_and({c(0, i, Cell::One), c(1, i, Cell::One)}),
                                 gate_and({c(0, i, Cell::Bot), c(1, i, Cell::Bot)})}));
      break;
    case Pred::Full:
      for (std::size_t i = 0; i < n; ++i) parts.push_back(-c(0, i, Cell::Bot));
      break;
    case Pred::Cons:
      for (std::size_t i = 0; i < n; ++i) {
        parts.push_back(-gate_and({c(0, i, Cell::Zero), c(1, i, Cell::One)}));
        parts.push_back(-gate_and({c(0, i, Cell::One), c(1, i, Cell::Zero)}));
      }
      break;
    case Pred::Suf:
    case Pred::MaxRel:
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(gate_iff(c(0, i, Cell::Bot), c(1, i, Cell::Bot)));
      break;
    case Pred::Leh: {
      std::vector<Lit> d1, d2;
      for (std::size_t i = 0; i < n; ++i) {
        d1.push_back(-gate_iff(c(0, i, Cell::One), c(1, i, Cell::One)));
        d2.push_back(-gate_iff(c(0, i, Cell::One), c(2, i, Cell::One)));
      }
      std::vector<Lit> k1 = counter(d1);
      std::vector<Lit> k2 = counter(d2);
      for (std::size_t a = 0; a < 3; ++a) parts.push_back(encode_catalog(Pred::Full, {args[a]}));
      for (std::size_t j = 1; j <= n; ++j) parts.push_back(gate_implies(k1[j], k2[j]));
      break;
    }
    case Pred::Undef:
      for (std::size_t i = 0; i < n; ++i) parts.push_back(c(0, i, Cell::Bot));
      break;
    case Pred::Single: {
      std::vector<Lit> defined;
      for (std::size_t i = 0; i < n; ++i) defined.push_back(-c(0, i, Cell::Bot));
      std::vector<Lit> k = counter(defined);
      parts.push_back(n >= 1 ? k[1] : lit_false());
      if (n >= 2) parts.push_back(-k[2]);
      break;
    }
    case Pred::Comp:
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(gate_or({c(0, i, Cell::Bot), c(1, i, Cell::Bot)}));
      break;
    case Pred::MaxComp:
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(-gate_iff(c(0, i, Cell::Bot), c(1, i, Cell::Bot)));
      break;
    case Pred::Rel:
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(gate_or({c(1, i, Cell::Bot), -c(0, i, Cell::Bot)}));
      break;
    case Pred::Opp:
      parts.push_back(encode_catalog(Pred::Single, {args[0]}));
      parts.push_back(encode_catalog(Pred::Single, {args[1]}));
      for (std::size_t i = 0; i < n; ++i) {
        parts.push_back(gate_iff(c(0, i, Cell::Bot), c(1, i, Cell::Bot)));
        parts.push_back(-gate_and({c(0, i, Cell::Zero), c(1, i, Cell::Zero)}));
        parts.push_back(-gate_and({c(0, i, Cell::One), c(1, i, Cell::One)}));
      }
      break;
    case Pred::Glb:
      for (std::size_t i = 0; i < n; ++i)
        for (Cell s : {Cell::Zero, Cell::One})
          parts.push_back(gate_iff(c(2, i, s), gate_and({c(0, i, s), c(1, i, s)})));
      break;
    case Pred::Join:
      parts.push_back(encode_catalog(Pred::Cons, {args[0], args[1]}));
      for (std::size_t i = 0; i < n; ++i)
        for (Cell s : {Cell::Zero, Cell::One})
          parts.push_back(gate_iff(c(2, i, s), gate_or({c(0, i, s), c(1, i, s)})));
      break;
    case Pred::Predecessor: {
      parts.push_back(encode_subsumption(args[0], args[1]));
      std::vector<Lit> ka = bot_counter(args[0]);
      std::vector<Lit> kb = bot_counter(args[1]);
      for (std::size_t j = 1; j <= n; ++j) parts.push_back(gate_iff(ka[j], kb[j - 1]));
      parts.push_back(-kb[n]);
      break;
    }
    default: throw InternalError("unhandled predicate");
  }
  return gate_and(std::move(parts));
}

Lit Encoder::encode_inner_atomic(const Formula& f) {
  if (auto m = match_catalog(f)) {
    std::vector<std::string> names;
    for (const Term& t : m->second) names.push_back(term_name(t));
    return encode_catalog(m->first, names);
  }
  if (auto parts = inner_parts(f)) {
    std::string a = term_name(parts->first);
    std::vector<std::string> bs;
    for (const Term& t : parts->second) bs.push_back(term_name(t));
    std::vector<Lit> out;
    for (std::size_t i = 0; i < b_->dimension(); ++i) {
      std::vector<Lit> zero, one;
      for (const auto& b : bs) {
        zero.push_back(cell(b, i, Cell::Zero));
        one.push_back(cell(b, i, Cell::One));
      }
      out.push_back(gate_or({cell(a, i, Cell::Bot), -gate_and({gate_or(zero), gate_or(one)})}));
    }
    return gate_and(std::move(out));
  }
  throw UnsupportedPattern(print(f));
}

bool Encoder::has_inner_quant(const Formula& f) {
  auto it = quant_cache_.find(f.id());
  if (it != quant_cache_.end()) return it->second;
  bool v = has_quant(f);
  quant_cache_.emplace(f.id(), v);
  return v;
}

Lit Encoder::encode(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> Lit {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          return x.value ? lit_true() : lit_false();
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          std::vector<std::string> names;
          for (const Term& t : x.args) names.push_back(term_name(t));
          return encode_catalog(x.pred, names);
        } else {
          if constexpr (!std::is_same_v<T, ast::Block>) {
            if (has_inner_quant(f))
              if (match_catalog(f) || is_inner_pattern(f)) return encode_inner_atomic(f);
          }
          if constexpr (std::is_same_v<T, ast::Not>) {
            return -encode(x.child);
          } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
            std::vector<Lit> kids;
            kids.reserve(x.children.size());
            for (const Formula& c : x.children) kids.push_back(encode(c));
            return std::is_same_v<T, ast::And> ? gate_and(std::move(kids))
                                               : gate_or(std::move(kids));
          } else if constexpr (std::is_same_v<T, ast::Implies>) {
            return gate_implies(encode(x.lhs), encode(x.rhs));
          } else if constexpr (std::is_same_v<T, ast::Iff>) {
            return gate_iff(encode(x.lhs), encode(x.rhs));
          } else if constexpr (std::is_same_v<T, ast::Quant>) {
            if (x.guard) throw Error("guarded quantifier needs a loaded tree");
            return encode_inner_atomic(f);
          } else {
            throw InternalError("quantifier block reached the encoder");
          }
        }
      },
      f.node());
}

Encoding encode_formula(const Formula& f, std::size_t dimension, const TreeFacts* facts,
                        const std::vector<std::string>& order, EncodeOptions options) {
  Encoding enc{CnfBuilder(dimension), {}, {}};
  if (facts && facts->dimension() != dimension)
    throw DimensionMismatch(dimension, facts->dimension());
  Formula g = f;
  if (facts) g = expand_guards(g, *facts, options.simplify, &enc.guards);
  if (options.simplify) g = simplify(g, facts);
  g = skolemize(g, enc.skolems);
  for (const auto& v : order) enc.builder.register_var(v);
  Encoder e(enc.builder, facts);
  e.prepare(g);
  e.require(e.encode(g));
  return enc;
}

}  // namespace dtfoil
