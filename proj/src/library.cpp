#include "dtfoil/library.hpp"

#include <map>

#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"

namespace dtfoil {

namespace {

const std::vector<TemplateInfo> kTemplates = {
    {"Leaf", {"x"}, "node(x) and (forall y in Node, (x <= y -> y <= x))", Logic::DtFoil},
    {"AllPos", {"x"}, "forall y in Node, ((Leaf(y) and cons(x, y)) -> posleaf(y))",
     Logic::DtFoil},
    {"AllNeg", {"x"}, "forall y in Node, ((Leaf(y) and cons(x, y)) -> negleaf(y))",
     Logic::DtFoil},
    {"Pos", {"x"}, "full(x) and AllPos(x)", Logic::DtFoil},
    {"Neg", {"x"}, "full(x) and AllNeg(x)", Logic::DtFoil},
    {"SR", {"x", "y"},
     "full(x) and y <= x and (pos(x) -> allpos(y)) and (not pos(x) -> allneg(y))",
     Logic::DtFoil},
    {"MinimalSR", {"x", "y"}, "SR(x, y) and (forall z, (z < y -> not SR(x, z)))",
     Logic::QDtFoil},
    {"MinimumSR", {"x", "y"},
     "SR(x, y) and (forall z, ((pref(z, y) and not pref(y, z)) -> not SR(x, z)))",
     Logic::QDtFoil},
    {"DFS", {"x"},
     "forall y in Node, (allpos(y) -> (forall z in Node, (allneg(z) -> "
     "not (exists w, (suf(x, w) and cons(w, y) and cons(w, z))))))",
     Logic::DtFoil},
    {"MinimalDFS", {"x"}, "DFS(x) and (forall y, (y < x -> not DFS(y)))", Logic::QDtFoil},
    {"MinimumCR", {"x", "y"},
     "full(x) and full(y) and not (pos(x) <-> pos(y)) and "
     "(forall z, ((full(z) and not (pos(x) <-> pos(z))) -> leh(x, y, z)))",
     Logic::QDtFoil},
    {"MaximumCA", {"x", "y"},
     "full(x) and full(y) and (pos(x) <-> pos(y)) and "
     "(forall z, ((full(z) and (pos(x) <-> pos(z))) -> leh(x, z, y)))",
     Logic::QDtFoil},
    {"CSR", {"u1", "u2", "x"}, "SR(u1, x) and SR(u2, x)", Logic::DtFoil},
    {"NSR", {"u", "x1", "x"}, "SR(u, x) and SR(u, x1) and not (x1 <= x)", Logic::DtFoil},
    {"NF", {"x", "v1", "v2"}, "not (v1 <= x) and not (v2 <= x)", Logic::Atomic},
    {"Pr", {"x", "y"}, "pred(x, y)", Logic::Atomic},
    {"rho1", {"y", "z"}, "y < z", Logic::Atomic},
    {"rho2", {"v1", "v2", "y", "z"},
     "exists y1, exists z1, ((NF(y, v1, v2) -> y = y1) and "
     "(not NF(y, v1, v2) -> (Pr(y1, y) and NF(y1, v1, v2))) and "
     "(not NF(z, v1, v2) -> (Pr(z1, z) and NF(z1, v1, v2))) and "
     "(NF(z, v1, v2) -> z = z1) and y1 < z1)",
     Logic::Atomic},
    {"rho3", {"u", "y", "z"}, "leh(u, y, z) and not leh(u, z, y)", Logic::Atomic},
    {"rho4", {"u", "y", "z"}, "rho3(u, z, y)", Logic::Atomic},
};

class Table {
 public:
  Table() {
    TemplateResolver resolver = [this](const std::string& name, const std::vector<Term>& args) {
      return expand(name, args);
    };
    for (const auto& t : kTemplates) bodies_.emplace(t.name, parse_formula(t.body, ParseMode::Raw, resolver));
  }

  std::optional<Formula> expand(const std::string& name, const std::vector<Term>& args) const {
    const TemplateInfo* info = find_template(name);
    if (!info) return std::nullopt;
    auto it = bodies_.find(name);
    if (it == bodies_.end()) throw InternalError("template " + name + " used before definition");
    if (args.size() != info->params.size())
      throw Error(name + " expects " + std::to_string(info->params.size()) + " arguments");
    std::vector<std::pair<std::string, Term>> subst;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].is_var() && args[i].name() == info->params[i]) continue;
      subst.emplace_back(info->params[i], args[i]);
    }
    return substitute(it->second, subst);
  }

  const Formula& body(const std::string& name) const { return bodies_.at(name); }

 private:
  std::map<std::string, Formula> bodies_;
};

const Table& table() {
  static const Table t;
  return t;
}

}  // namespace

const std::vector<TemplateInfo>& templates() { return kTemplates; }

const TemplateInfo* find_template(const std::string& name) {
  for (const auto& t : kTemplates)
    if (t.name == name) return &t;
  return nullptr;
}

std::optional<Formula> expand_template(const std::string& name, const std::vector<Term>& args) {
  if (!find_template(name)) return std::nullopt;
  return table().expand(name, args);
}

Formula template_formula(const std::string& name) {
  const TemplateInfo* info = find_template(name);
  if (!info) throw Error("unknown template '" + name + "'");
  const Formula& f = table().body(name);
  switch (info->logic) {
    case Logic::Atomic: require_atomic(f); return f;
    case Logic::DtFoil: require_dtfoil(f); return f;
    default: return to_query(f);
  }
}

const char* opt_query_name(OptQuery q) {
  switch (q) {
    case OptQuery::MinimalSR: return "MinimalSR";
    case OptQuery::MinimumSR: return "MinimumSR";
    case OptQuery::MinimumCR: return "MinimumCR";
    case OptQuery::MaximumCA: return "MaximumCA";
    default: return "MinimalDFS";
  }
}

std::string opt_query_text(OptQuery q) {
  switch (q) {
    case OptQuery::MinimalSR: return "min[SR(u, x), y < z]";
    case OptQuery::MinimumSR: return "min[SR(u, x), pref(y, z) and not pref(z, y)]";
    case OptQuery::MinimumCR:
      return "min[full(u) and full(x) and not (pos(u) <-> pos(x)), rho3(u, y, z)]";
    case OptQuery::MaximumCA:
      return "min[full(u) and full(x) and (pos(u) <-> pos(x)), rho4(u, y, z)]";
    default: return "min[DFS(x), y < z]";
  }
}

OptFormula opt_query(OptQuery q, const PartialInstance& u) {
  OptFormula f = parse_opt(opt_query_text(q));
  Term c = Term::constant(u);
  f.phi = substitute(f.phi, "u", c);
  f.rho = substitute(f.rho, "u", c);
  return f;
}

}  // namespace dtfoil
