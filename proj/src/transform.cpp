#include "dtfoil/transform.hpp"

#include <bit>
#include <random>
#include <sstream>

#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"

namespace dtfoil {

namespace {

std::optional<bool> const_value(const Formula& f) {
  if (const auto* c = f.as<ast::Const>()) return c->value;
  return std::nullopt;
}

Formula negated(const Formula& f) {
  if (auto v = const_value(f)) return Formula::constant(!*v);
  if (const auto* n = f.as<ast::Not>()) return n->child;
  return Formula::negate(f);
}

Formula simplify_rec(const Formula& f, const TreeFacts* facts) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          return f;
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          const PredInfo& info = pred_info(x.pred);
          if (info.model && !facts) return f;
          std::vector<const PartialInstance*> args;
          for (const Term& t : x.args) {
            if (t.is_var()) return f;
            args.push_back(&t.value());
          }
          return Formula::constant(eval_pred(x.pred, args, facts));
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return negated(simplify_rec(x.child, facts));
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          constexpr bool is_and = std::is_same_v<T, ast::And>;
          std::vector<Formula> kept;
          for (const Formula& c : x.children) {
            Formula s = simplify_rec(c, facts);
            if (auto v = const_value(s)) {
              if (*v != is_and) return Formula::constant(!is_and);
              continue;
            }
            if (const auto* same = s.template as<T>())
              kept.insert(kept.end(), same->children.begin(), same->children.end());
            else
              kept.push_back(s);
          }
          if (kept.empty()) return Formula::constant(is_and);
          if (kept.size() == 1) return kept[0];
          return is_and ? Formula::conj(std::move(kept)) : Formula::disj(std::move(kept));
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          Formula a = simplify_rec(x.lhs, facts);
          Formula b = simplify_rec(x.rhs, facts);
          if (auto v = const_value(a)) return *v ? b : Formula::constant(true);
          if (auto v = const_value(b)) return *v ? Formula::constant(true) : negated(a);
          return Formula::implies(a, b);
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          Formula a = simplify_rec(x.lhs, facts);
          Formula b = simplify_rec(x.rhs, facts);
          if (auto v = const_value(a)) return *v ? b : negated(b);
          if (auto v = const_value(b)) return *v ? a : negated(a);
          return Formula::iff(a, b);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          Formula body = simplify_rec(x.body, facts);
          bool used = free_vars(body).count(x.var) > 0;
          if (!x.guard) {
            if (!used) return body;
            return Formula::quant(x.q, x.guard, x.var, body);
          }
          if (facts && !used) {
            bool nonempty = !facts->guard(*x.guard).empty();
            if (nonempty) return body;
            return Formula::constant(x.q == Quantifier::Forall);
          }
          return Formula::quant(x.q, x.guard, x.var, body);
        } else {
          Formula body = simplify_rec(x.body, facts);
          std::set<std::string> fv = free_vars(body);
          std::vector<std::string> vars;
          for (const auto& v : x.vars)
            if (fv.count(v)) vars.push_back(v);
          if (vars.empty()) return body;
          return Formula::block(x.q, std::move(vars), body);
        }
      },
      f.node());
}

}  // namespace

Formula simplify(const Formula& f, const TreeFacts* facts) { return simplify_rec(f, facts); }

std::string OrderReport::to_string() const {
  std::ostringstream os;
  if (ok) {
    os << "order check passed (" << assignments << " parameter assignments)";
    return os.str();
  }
  for (const auto& v : violations) {
    if (&v != &violations.front()) os << "; ";
    os << v.axiom << " fails at n=" << v.dimension;
    for (const auto& [name, e] : v.params) os << ' ' << name << '=' << e.to_string();
    os << ':';
    for (const auto& e : v.witness) os << ' ' << e.to_string();
  }
  return os.str();
}

namespace {

void check_matrix(const std::vector<std::vector<bool>>& r, const Universe& u, std::size_t n,
                  const Env& params, const OrderCheckOptions& options, OrderReport& report) {
  std::size_t total = r.size();
  std::size_t words = (total + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(total, std::vector<std::uint64_t>(words, 0));
  for (std::size_t a = 0; a < total; ++a)
    for (std::size_t b = 0; b < total; ++b)
      if (r[a][b]) rows[a][b / 64] |= 1ull << (b % 64);
  for (std::size_t a = 0; a < total; ++a) {
    if (r[a][a]) {
      report.ok = false;
      if (report.violations.size() < options.max_violations)
        report.violations.push_back({"irreflexivity", n, params, {u[a]}});
      return;
    }
  }
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      if (!r[a][b]) continue;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t missing = rows[b][w] & ~rows[a][w];
        if (!missing) continue;
        std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(missing));
        report.ok = false;
        if (report.violations.size() < options.max_violations)
          report.violations.push_back({"transitivity", n, params, {u[a], u[b], u[c]}});
        return;
      }
    }
  }
}

}  // namespace

OrderReport check_strict_order(const Formula& rho, const std::string& lhs, const std::string& rhs,
                               const std::vector<std::size_t>& dims, OrderCheckOptions options) {
  OrderReport report;
  std::vector<std::string> params;
  for (const auto& v : free_vars(rho))
    if (v != lhs && v != rhs) params.push_back(v);
  std::mt19937_64 rng(options.seed);
  for (std::size_t n : dims) {
    OracleOptions oo;
    oo.bound = options.bound;
    Oracle oracle(n, nullptr, oo);
    const Universe& u = oracle.universe();
    auto run = [&](const Env& env) {
      ++report.assignments;
      check_matrix(oracle.relation(rho, lhs, rhs, env), u, n, env, options, report);
    };
    std::size_t combos = 1;
    bool exhaustive = n <= options.exhaustive_up_to;
    for (std::size_t i = 0; i < params.size() && exhaustive; ++i) {
      combos *= u.size();
      if (combos > 1'000'000) exhaustive = false;
    }
    if (exhaustive) {
      std::vector<std::size_t> idx(params.size(), 0);
      for (;;) {
        Env env;
        for (std::size_t i = 0; i < params.size(); ++i) env.emplace(params[i], u[idx[i]]);
        run(env);
        if (report.violations.size() >= options.max_violations && !report.ok) return report;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == u.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
      for (std::size_t s = 0; s < options.samples; ++s) {
        Env env;
        for (const auto& p : params) env.emplace(p, u[pick(rng)]);
        run(env);
        if (report.violations.size() >= options.max_violations && !report.ok) return report;
      }
    }
  }
  return report;
}

OrderReport check_strict_order(const OptFormula& psi, const std::vector<std::size_t>& dims,
                               OrderCheckOptions options) {
  return check_strict_order(psi.rho, psi.lhs, psi.rhs, dims, options);
}

}  // namespace dtfoil
