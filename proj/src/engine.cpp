#include "dtfoil/engine.hpp"

#include <chrono>
#include <set>

#include "dtfoil/encoder.hpp"
#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"
#include "dtfoil/transform.hpp"

namespace dtfoil {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void collect_constants(const Formula& f, std::set<PartialInstance>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Atom>) {
          for (const Term& t : x.args)
            if (!t.is_var()) out.insert(t.value());
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          collect_constants(x.child, out);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children) collect_constants(c, out);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          collect_constants(x.lhs, out);
          collect_constants(x.rhs, out);
        } else if constexpr (std::is_same_v<T, ast::Quant> || std::is_same_v<T, ast::Block>) {
          collect_constants(x.body, out);
        }
      },
      f.node());
}

// Per-feature reading of exists w (suf(a, w) and cons(w, b1) and ...).
bool eval_inner(const Formula& f) {
  const auto& q = *f.as<ast::Quant>();
  std::optional<PartialInstance> a;
  std::vector<PartialInstance> bs;
  std::vector<Formula> parts;
  if (const auto* c = q.body.as<ast::And>()) parts = c->children;
  else parts = {q.body};
  for (const Formula& p : parts) {
    const auto& at = *p.as<ast::Atom>();
    const Term& other = at.args[0].is_var() && at.args[0].name() == q.var ? at.args[1] : at.args[0];
    if (at.pred == Pred::Suf) a = other.value();
    else bs.push_back(other.value());
  }
  for (std::size_t i = 0; i < a->dimension(); ++i) {
    if (!a->defined(i)) continue;
    bool zero = false, one = false;
    for (const auto& b : bs) {
      if (b.dimension() != a->dimension()) throw DimensionMismatch(a->dimension(), b.dimension());
      zero |= b[i] == Cell::Zero;
      one |= b[i] == Cell::One;
    }
    if (zero && one) return false;
  }
  return true;
}

bool all_constant(const std::vector<Term>& args) {
  for (const Term& t : args)
    if (t.is_var()) return false;
  return true;
}

}  // namespace

std::uint64_t iteration_guard(std::size_t ell, std::size_t n, std::uint64_t cap) {
  auto power = [&](std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (r > limit / base) return limit;
      r *= base;
    }
    return std::min(r, limit);
  };
  std::uint64_t base = n + 1;
  if (ell == 0) return power(base, 3, UINT64_MAX);
  std::uint64_t exp = power(3, ell + 1, UINT64_MAX);
  return power(base, exp, cap);
}

std::size_t rho_parameter_count(const OptFormula& psi) {
  std::size_t ell = 0;
  for (const auto& v : free_vars(psi.rho))
    if (v != psi.lhs && v != psi.rhs) ++ell;
  std::set<PartialInstance> consts;
  collect_constants(psi.rho, consts);
  return ell + consts.size();
}

std::uint64_t iteration_guard(const OptFormula& psi, std::size_t n, std::uint64_t cap) {
  return iteration_guard(rho_parameter_count(psi), n, cap);
}

Formula bind(const Formula& f, const Env& env, const std::vector<std::string>& open) {
  std::vector<std::pair<std::string, Term>> subst;
  for (const auto& v : free_vars(f)) {
    auto it = env.find(v);
    if (it != env.end()) {
      subst.emplace_back(v, Term::constant(it->second));
    } else if (std::find(open.begin(), open.end(), v) == open.end()) {
      throw Error("unbound variable '" + v + "'");
    }
  }
  return subst.empty() ? f : substitute(f, subst);
}

Engine::Engine(const DecisionTree& tree, EngineOptions options)
    : tree_(&tree), facts_(std::make_unique<TreeFacts>(tree)), options_(std::move(options)) {}

Engine::~Engine() = default;

bool Engine::ground(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          std::vector<const PartialInstance*> args;
          for (const Term& t : x.args) {
            if (t.is_var()) throw InternalError("free variable in ground evaluation");
            args.push_back(&t.value());
          }
          return eval_pred(x.pred, args, facts_.get());
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return !ground(x.child);
        } else if constexpr (std::is_same_v<T, ast::And>) {
          for (const Formula& c : x.children)
            if (!ground(c)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children)
            if (ground(c)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          return !ground(x.lhs) || ground(x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          return ground(x.lhs) == ground(x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          if (x.guard) {
            bool forall = x.q == Quantifier::Forall;
            for (const auto& c : facts_->guard(*x.guard))
              if (ground(simplify(substitute(x.body, x.var, Term::constant(c)), facts_.get())) !=
                  forall)
                return !forall;
            return forall;
          }
          if (auto m = match_catalog(f); m && all_constant(m->second)) {
            std::vector<const PartialInstance*> args;
            for (const Term& t : m->second) args.push_back(&t.value());
            return eval_pred(m->first, args, facts_.get());
          }
          if (is_inner_pattern(f) && free_vars(f).empty()) return eval_inner(f);
          if (tree_->dimension() > options_.oracle_bound || tree_->dimension() > 16)
            throw UnsupportedPattern(print(f));
          if (!oracle_) {
            OracleOptions oo;
            oo.bound = options_.oracle_bound;
            oracle_ = std::make_unique<Oracle>(tree_->dimension(), tree_, oo);
          }
          return oracle_->eval(f);
        } else {
          throw WellFormednessError("DT-FOIL guarded quantification",
                                    "quantifier block in a DT-FOIL formula");
        }
      },
      f.node());
}

bool Engine::eval_dtfoil(const Formula& f, const Env& env) {
  Formula g = bind(f, env);
  if (contains_block(g))
    throw WellFormednessError("DT-FOIL guarded quantification",
                              "quantifier block in a DT-FOIL formula");
  g = expand_guards(g, *facts_, true);
  return ground(g);
}

std::optional<std::map<std::string, PartialInstance>> Engine::find(
    const Formula& f, const std::vector<std::string>& vars) {
  Encoding enc = encode_formula(f, tree_->dimension(), facts_.get(), vars);
  ++calls_;
  SatVerdict v = solve(enc.builder.to_cnf(), options_.solver);
  if (!v.sat) return std::nullopt;
  std::map<std::string, PartialInstance> out;
  for (const auto& name : vars) out.emplace(name, decode_var(v, enc.builder, name));
  return out;
}

bool Engine::eval_blocks(const Formula& f, bool positive, EvalResult& r) {
  if (!contains_block(f)) return eval_dtfoil(f);
  if (const auto* b = f.as<ast::Block>()) {
    if (contains_block(b->body))
      throw WellFormednessError("Q-DT-FOIL no quantifier alternation", "nested quantifier block");
    bool exists = b->q == Quantifier::Exists;
    Formula body = exists ? b->body : Formula::negate(b->body);
    std::size_t before = calls_;
    auto w = find(body, b->vars);
    r.sat_calls += calls_ - before;
    if (exists && w && positive)
      for (auto& [k, v] : *w) r.witnesses.insert_or_assign(k, v);
    return exists ? w.has_value() : !w.has_value();
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Not>) {
          return !eval_blocks(x.child, !positive, r);
        } else if constexpr (std::is_same_v<T, ast::And>) {
          for (const Formula& c : x.children)
            if (!eval_blocks(c, positive, r)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children)
            if (eval_blocks(c, positive, r)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          return !eval_blocks(x.lhs, !positive, r) || eval_blocks(x.rhs, positive, r);
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          return eval_blocks(x.lhs, false, r) == eval_blocks(x.rhs, false, r);
        } else {
          throw WellFormednessError("Q-DT-FOIL block placement",
                                    "quantifier block below a quantifier");
        }
      },
      f.node());
}

EvalResult Engine::eval_qdtfoil(const Formula& f, const Env& env) {
  auto t0 = Clock::now();
  EvalResult r;
  r.verdict = eval_blocks(bind(f, env), true, r);
  if (!r.verdict) r.witnesses.clear();
  r.wall_time = seconds_since(t0);
  return r;
}

OptResult Engine::compute_opt(const OptFormula& psi, const Env& params) {
  auto t0 = Clock::now();
  std::size_t start = calls_;
  Formula phi = bind(psi.phi, params, {psi.target});
  Formula rho = bind(psi.rho, params, {psi.lhs, psi.rhs});
  OptFormula bound{phi, rho, psi.target, psi.lhs, psi.rhs};
  std::uint64_t guard = iteration_guard(bound, tree_->dimension(), options_.guard_cap);
  OptResult out;
  auto w = find(phi, {psi.target});
  if (!w) {
    out.trace.final_call = calls_;
    out.sat_calls = calls_ - start;
    out.wall_time = seconds_since(t0);
    return out;
  }
  PartialInstance cur = w->at(psi.target);
  out.trace.steps.push_back(cur);
  out.trace.sat_call_ids.push_back(calls_);
  for (;;) {
    Formula step = substitute(
        rho, {{psi.lhs, Term::var(psi.target)}, {psi.rhs, Term::constant(cur)}});
    auto next = find(Formula::conj({phi, step}), {psi.target});
    if (!next) break;
    PartialInstance e = next->at(psi.target);
    if (out.trace.steps.size() >= guard)
      throw IterationGuardExceeded("descent exceeded " + std::to_string(guard) +
                                   " steps; last pair " + e.to_string() + " below " +
                                   cur.to_string());
    out.trace.steps.push_back(e);
    out.trace.sat_call_ids.push_back(calls_);
    cur = std::move(e);
  }
  out.trace.final_call = calls_;
  out.answer = cur;
  out.sat_calls = calls_ - start;
  out.wall_time = seconds_since(t0);
  return out;
}

bool Engine::verify_answer(const OptFormula& psi, const Env& params,
                           const std::optional<PartialInstance>& answer) {
  Formula phi = bind(psi.phi, params, {psi.target});
  Formula rho = bind(psi.rho, params, {psi.lhs, psi.rhs});
  if (!answer) return !find(phi, {psi.target});
  Env at{{psi.target, *answer}};
  if (!eval_dtfoil(phi, at)) return false;
  Formula below = substitute(
      rho, {{psi.lhs, Term::var(psi.target)}, {psi.rhs, Term::constant(*answer)}});
  return !find(Formula::conj({phi, below}), {psi.target});
}

bool eval_dtfoil(const Formula& f, const DecisionTree& tree, const Env& env) {
  Engine e(tree);
  return e.eval_dtfoil(f, env);
}

EvalResult eval_qdtfoil(const Formula& f, const DecisionTree& tree, const Env& env,
                        EngineOptions options) {
  Engine e(tree, std::move(options));
  return e.eval_qdtfoil(f, env);
}

OptResult compute_opt(const OptFormula& psi, const DecisionTree& tree, const Env& params,
                      EngineOptions options) {
  Engine e(tree, std::move(options));
  return e.compute_opt(psi, params);
}

bool verify_answer(const OptFormula& psi, const DecisionTree& tree, const Env& params,
                   const std::optional<PartialInstance>& answer, EngineOptions options) {
  Engine e(tree, std::move(options));
  return e.verify_answer(psi, params, answer);
}

}  // namespace dtfoil
