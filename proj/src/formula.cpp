#include "dtfoil/formula.hpp"

#include <algorithm>
#include <map>

#include "dtfoil/error.hpp"

namespace dtfoil {

Formula::Formula() : Formula(constant(true)) {}

Formula Formula::constant(bool b) {
  return Formula(std::make_shared<const Node>(ast::Const{b}));
}
Formula Formula::atom(Pred p, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(ast::Atom{p, std::move(args)}));
}
Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(ast::Not{std::move(f)}));
}
Formula Formula::conj(std::vector<Formula> fs) {
  return Formula(std::make_shared<const Node>(ast::And{std::move(fs)}));
}
Formula Formula::disj(std::vector<Formula> fs) {
  return Formula(std::make_shared<const Node>(ast::Or{std::move(fs)}));
}
Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(ast::Implies{std::move(a), std::move(b)}));
}
Formula Formula::iff(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(ast::Iff{std::move(a), std::move(b)}));
}
Formula Formula::quant(Quantifier q, std::optional<Guard> guard, std::string var, Formula body) {
  return Formula(
      std::make_shared<const Node>(ast::Quant{q, guard, std::move(var), std::move(body)}));
}
Formula Formula::block(Quantifier q, std::vector<std::string> vars, Formula body) {
  return Formula(std::make_shared<const Node>(ast::Block{q, std::move(vars), std::move(body)}));
}

namespace {

bool eq_list(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.id() == b.id()) return true;
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, ast::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          return x.pred == y.pred && x.args == y.args;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return structurally_equal(x.child, y.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          return eq_list(x.children, y.children);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          return structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          return x.q == y.q && x.guard == y.guard && x.var == y.var &&
                 structurally_equal(x.body, y.body);
        } else {
          return x.q == y.q && x.vars == y.vars && structurally_equal(x.body, y.body);
        }
      },
      a.node());
}

bool structurally_equal(const OptFormula& a, const OptFormula& b) {
  return a.target == b.target && a.lhs == b.lhs && a.rhs == b.rhs &&
         structurally_equal(a.phi, b.phi) && structurally_equal(a.rho, b.rho);
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Atom>) {
          for (const Term& t : x.args)
            if (t.is_var() && !bound.count(t.name())) out.insert(t.name());
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          collect_free(x.child, bound, out);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children) collect_free(c, bound, out);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          collect_free(x.lhs, bound, out);
          collect_free(x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          bool fresh = bound.insert(x.var).second;
          collect_free(x.body, bound, out);
          if (fresh) bound.erase(x.var);
        } else if constexpr (std::is_same_v<T, ast::Block>) {
          std::vector<std::string> added;
          for (const auto& v : x.vars)
            if (bound.insert(v).second) added.push_back(v);
          collect_free(x.body, bound, out);
          for (const auto& v : added) bound.erase(v);
        }
      },
      f.node());
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Atom>) {
          for (const Term& t : x.args)
            if (t.is_var()) out.insert(t.name());
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          collect_names(x.child, out);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children) collect_names(c, out);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          collect_names(x.lhs, out);
          collect_names(x.rhs, out);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          out.insert(x.var);
          collect_names(x.body, out);
        } else if constexpr (std::is_same_v<T, ast::Block>) {
          out.insert(x.vars.begin(), x.vars.end());
          collect_names(x.body, out);
        }
      },
      f.node());
}

class Substituter {
 public:
  explicit Substituter(std::map<std::string, Term> s) : subst_(std::move(s)) {
    for (const auto& [name, t] : subst_)
      if (t.is_var()) avoid_.insert(t.name());
  }

  Formula run(const Formula& f) {
    std::set<std::string> names;
    collect_names(f, names);
    used_ = names;
    used_.insert(avoid_.begin(), avoid_.end());
    return go(f);
  }

 private:
  std::string fresh(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!used_.count(cand)) {
        used_.insert(cand);
        return cand;
      }
    }
  }

  // Binds `var`; returns the (possibly renamed) name and the saved mapping.
  struct Scope {
    std::string name;
    std::optional<Term> saved;
    bool had;
  };
  Scope enter(const std::string& var) {
    Scope s{var, std::nullopt, false};
    auto it = subst_.find(var);
    if (it != subst_.end()) {
      s.had = true;
      s.saved = it->second;
      subst_.erase(it);
    }
    if (avoid_.count(var)) {
      s.name = fresh(var);
      subst_.insert_or_assign(var, Term::var(s.name));
    }
    return s;
  }
  void leave(const std::string& var, const Scope& s) {
    subst_.erase(var);
    if (s.had) subst_.insert_or_assign(var, *s.saved);
  }

  Formula go(const Formula& f) {
    return std::visit(
        [&](const auto& x) -> Formula {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ast::Const>) {
            return f;
          } else if constexpr (std::is_same_v<T, ast::Atom>) {
            std::vector<Term> args;
            bool changed = false;
            for (const Term& t : x.args) {
              if (t.is_var()) {
                auto it = subst_.find(t.name());
                if (it != subst_.end()) {
                  args.push_back(it->second);
                  changed = true;
                  continue;
                }
              }
              args.push_back(t);
            }
            return changed ? Formula::atom(x.pred, std::move(args)) : f;
          } else if constexpr (std::is_same_v<T, ast::Not>) {
            return Formula::negate(go(x.child));
          } else if constexpr (std::is_same_v<T, ast::And>) {
            std::vector<Formula> cs;
            for (const Formula& c : x.children) cs.push_back(go(c));
            return Formula::conj(std::move(cs));
          } else if constexpr (std::is_same_v<T, ast::Or>) {
            std::vector<Formula> cs;
            for (const Formula& c : x.children) cs.push_back(go(c));
            return Formula::disj(std::move(cs));
          } else if constexpr (std::is_same_v<T, ast::Implies>) {
            return Formula::implies(go(x.lhs), go(x.rhs));
          } else if constexpr (std::is_same_v<T, ast::Iff>) {
            return Formula::iff(go(x.lhs), go(x.rhs));
          } else if constexpr (std::is_same_v<T, ast::Quant>) {
            Scope s = enter(x.var);
            Formula body = go(x.body);
            leave(x.var, s);
            return Formula::quant(x.q, x.guard, s.name, body);
          } else {
            std::vector<Scope> scopes;
            std::vector<std::string> names;
            for (const auto& v : x.vars) {
              scopes.push_back(enter(v));
              names.push_back(scopes.back().name);
            }
            Formula body = go(x.body);
            for (std::size_t i = x.vars.size(); i-- > 0;) leave(x.vars[i], scopes[i]);
            return Formula::block(x.q, std::move(names), body);
          }
        },
        f.node());
  }

  std::map<std::string, Term> subst_;
  std::set<std::string> avoid_;
  std::set<std::string> used_;
};

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Term>>& subst) {
  std::map<std::string, Term> m;
  std::set<std::string> fv = free_vars(f);
  std::set<std::string> names;
  collect_names(f, names);
  for (const auto& [var, t] : subst) {
    if (!fv.count(var)) {
      if (names.count(var)) throw Error("cannot substitute bound variable '" + var + "'");
      continue;
    }
    m.insert_or_assign(var, t);
  }
  if (m.empty()) return f;
  return Substituter(std::move(m)).run(f);
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  return substitute(f, std::vector<std::pair<std::string, Term>>{{var, t}});
}

std::size_t formula_size(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
          return 1;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return 1 + formula_size(x.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          std::size_t s = 1;
          for (const Formula& c : x.children) s += formula_size(c);
          return s;
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          return 1 + formula_size(x.lhs) + formula_size(x.rhs);
        } else {
          return 1 + formula_size(x.body);
        }
      },
      f.node());
}

bool is_atomic_pred(Pred p) { return static_cast<int>(p) < static_cast<int>(Pred::AllPos); }

bool contains_block(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
          return false;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return contains_block(x.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          return std::any_of(x.children.begin(), x.children.end(), contains_block);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          return contains_block(x.lhs) || contains_block(x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          return contains_block(x.body);
        } else {
          return true;
        }
      },
      f.node());
}

bool is_atomic_formula(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          return true;
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          return is_atomic_pred(x.pred);
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return is_atomic_formula(x.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          return std::all_of(x.children.begin(), x.children.end(), is_atomic_formula);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          return is_atomic_formula(x.lhs) && is_atomic_formula(x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          return !x.guard && is_atomic_formula(x.body);
        } else {
          return false;
        }
      },
      f.node());
}

}  // namespace dtfoil
