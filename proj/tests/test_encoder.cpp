#include <doctest.h>

#include <sstream>

#include "dtfoil/atoms.hpp"
#include "dtfoil/encoder.hpp"
#include "dtfoil/error.hpp"
#include "dtfoil/library.hpp"
#include "dtfoil/parser.hpp"
#include "dtfoil/sat.hpp"
#include "helpers.hpp"

using namespace dtfoil;
using testutil::P;

namespace {

Formula F(const std::string& s) { return parse_formula(s, ParseMode::Raw); }

// Pins every named variable to an instance and returns the CNF satisfiability
// with the circuit output asserted true and false.
struct Probe {
  bool pos;
  bool neg;
};

Probe probe(const CnfBuilder& b, const std::vector<std::pair<std::string, PartialInstance>>& pins,
            Lit out) {
  Cnf cnf = b.to_cnf();
  for (const auto& [name, e] : pins)
    for (std::size_t i = 0; i < e.dimension(); ++i) cnf.clauses.push_back({b.cell(name, i, e[i])});
  Cnf p = cnf, n = cnf;
  p.clauses.push_back({out});
  n.clauses.push_back({-out});
  return {solve_embedded(p).sat, solve_embedded(n).sat};
}

// Exhaustive truth table of a circuit over `vars` against `expected`.
template <class Build, class Expect>
void exhaustive(std::size_t n, std::size_t arity, const TreeFacts* facts, Build build,
                Expect expected, bool full_only = false) {
  std::vector<std::string> names = {"a", "b", "c"};
  CnfBuilder b(n);
  for (std::size_t k = 0; k < arity; ++k) b.register_var(names[k]);
  Encoder enc(b, facts);
  Lit out = build(enc);
  auto u = full_only ? testutil::full_instances(n) : testutil::universe(n);
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    std::vector<std::pair<std::string, PartialInstance>> pins;
    std::vector<PartialInstance> args;
    for (std::size_t k = 0; k < arity; ++k) {
      pins.emplace_back(names[k], u[idx[k]]);
      args.push_back(u[idx[k]]);
    }
    Probe r = probe(b, pins, out);
    bool e = expected(args);
    CAPTURE(args[0].to_string());
    CHECK(r.pos == e);
    CHECK(r.neg == !e);
    std::size_t k = 0;
    while (k < arity && ++idx[k] == u.size()) idx[k++] = 0;
    if (k == arity) break;
  }
}

}  // namespace

TEST_SUITE("encoder") {
  TEST_CASE("variable numbering") {
    CnfBuilder b(2);
    b.register_var("x");
    b.register_var("y");
    CHECK(b.cell("x", 0, Cell::Zero) == 1);
    CHECK(b.cell("x", 1, Cell::Bot) == 6);
    CHECK(b.cell("y", 0, Cell::One) == 8);
    CHECK(b.formula_var_ids() == 12);
    CHECK(b.new_aux() == 13);
    CHECK_THROWS_AS(b.register_var("z"), InternalError);
    CHECK_THROWS_AS(b.cell("w", 0, Cell::Zero), Error);
  }

  TEST_CASE("dimacs header and exactly-one clauses") {
    CnfBuilder b(1);
    b.register_var("x");
    std::ostringstream os;
    b.write_dimacs(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "p cnf 3 4");
    CHECK(b.consistency().size() == 4);
    CHECK(b.semantic().empty());
    std::istringstream again(os.str());
    Cnf cnf = read_dimacs(again);
    CHECK(cnf.num_vars == 3);
    CHECK(cnf.clauses.size() == 4);
    std::ostringstream commented;
    b.write_dimacs(commented, true);
    CHECK(commented.str().find("c var x 1 ? 3") != std::string::npos);
  }

  TEST_CASE("read_model") {
    auto m = read_model("s SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
    CHECK(m == std::vector<bool>{false, true, false, true});
    CHECK_THROWS_AS(read_model("v 1 0\n", 2), Error);
    CHECK_THROWS_AS(read_model("v 1 x 0\n", 1), Error);
  }

  TEST_CASE("decode round trip of a pinned constant") {
    CnfBuilder b(3);
    b.register_var("x");
    std::string c = b.register_constant(P("(1,?,0)"));
    CHECK(c == "#(1,?,0)");
    Cnf cnf = b.to_cnf();
    for (std::size_t i = 0; i < 3; ++i)
      cnf.clauses.push_back({b.cell("x", i, P("(0,1,?)")[i])});
    SatVerdict v = solve_embedded(cnf);
    REQUIRE(v.sat);
    CHECK(decode_var(v, b, c) == P("(1,?,0)"));
    auto all = decode(v, b);
    CHECK(all.size() == 1);
    CHECK(all.at("x") == P("(0,1,?)"));
  }

  TEST_CASE("gates") {
    CnfBuilder b(1);
    Encoder enc(b);
    Lit x = b.new_aux(), y = b.new_aux();
    Lit a = enc.gate_and({x, y});
    CHECK(enc.gate_and({y, x}) == a);
    CHECK(enc.gate_and({x}) == x);
    CHECK(enc.gate_and({x, enc.lit_true()}) == x);
    CHECK(enc.gate_and({x, enc.lit_false()}) == enc.lit_false());
    CHECK(enc.gate_or({x, enc.lit_true()}) == enc.lit_true());
    Lit nand = -a;
    Lit o = enc.gate_or({x, y});
    Lit e = enc.gate_iff(x, y);
    Lit imp = enc.gate_implies(x, y);
    for (int bx = 0; bx < 2; ++bx)
      for (int by = 0; by < 2; ++by) {
        auto check = [&](Lit g, bool expected) {
          Cnf cnf = b.to_cnf();
          cnf.clauses.push_back({bx ? x : -x});
          cnf.clauses.push_back({by ? y : -y});
          cnf.clauses.push_back({expected ? g : -g});
          CHECK(solve_embedded(cnf).sat);
          cnf.clauses.back() = {expected ? -g : g};
          CHECK_FALSE(solve_embedded(cnf).sat);
        };
        check(nand, !(bx && by));
        check(o, bx || by);
        check(e, bx == by);
        check(imp, !bx || by);
      }
  }

  TEST_CASE("subsumption circuit") {
    exhaustive(3, 2, nullptr, [](Encoder& e) { return e.encode_subsumption("a", "b"); },
               [](const auto& v) { return atoms::subsumes(v[0], v[1]); });
  }

  TEST_CASE("cardinality circuit") {
    exhaustive(3, 2, nullptr, [](Encoder& e) { return e.encode_card_le("a", "b"); },
               [](const auto& v) { return atoms::card_le(v[0], v[1]); });
  }

  TEST_CASE("catalog circuits") {
    for (const auto& info : all_preds()) {
      if (info.model || info.arity == 3) continue;
      CAPTURE(info.name);
      std::size_t n = info.arity == 1 ? 3 : 2;
      exhaustive(
          n, info.arity, nullptr,
          [&](Encoder& e) {
            std::vector<std::string> args = {"a", "b"};
            args.resize(info.arity);
            return e.encode_catalog(info.pred, args);
          },
          [&](const auto& v) {
            std::vector<const PartialInstance*> args;
            for (const auto& x : v) args.push_back(&x);
            return eval_pred(info.pred, args, nullptr);
          });
    }
  }

  TEST_CASE("ternary circuits") {
    exhaustive(2, 3, nullptr, [](Encoder& e) { return e.encode_catalog(Pred::Glb, {"a", "b", "c"}); },
               [](const auto& v) { return atoms::meet(v[0], v[1]) == v[2]; });
    exhaustive(2, 3, nullptr,
               [](Encoder& e) { return e.encode_catalog(Pred::Join, {"a", "b", "c"}); },
               [](const auto& v) { return atoms::join(v[0], v[1]) == v[2]; });
    auto leh = [](const auto& v) {
      return v[0].is_full() && v[1].is_full() && v[2].is_full() && atoms::leh(v[0], v[1], v[2]);
    };
    auto build = [](Encoder& e) { return e.encode_catalog(Pred::Leh, {"a", "b", "c"}); };
    exhaustive(2, 3, nullptr, build, leh);
    exhaustive(3, 3, nullptr, build, leh, true);
  }

  TEST_CASE("model circuits on the example tree") {
    DecisionTree t = testutil::example();
    TreeFacts facts(t);
    for (Pred p : {Pred::AllPos, Pred::AllNeg, Pred::Pos, Pred::Neg, Pred::Node, Pred::Leaf,
                   Pred::PosLeaf, Pred::NegLeaf}) {
      CAPTURE(pred_info(p).name);
      exhaustive(4, 1, &facts, [&](Encoder& e) { return e.encode_catalog(p, {"a"}); },
                 [&](const auto& v) { return eval_pred(p, {&v[0]}, &facts); });
    }
  }

  TEST_CASE("constant arguments") {
    CnfBuilder b(3);
    b.register_var("y");
    std::string c = b.register_constant(P("(1,?,?)"));
    Encoder enc(b);
    Lit out = enc.encode_catalog(Pred::Cons, {c, "y"});
    CHECK(probe(b, {{"y", P("(?,0,1)")}}, out).pos);
    CHECK_FALSE(probe(b, {{"y", P("(0,?,?)")}}, out).pos);
  }

  TEST_CASE("inner pattern") {
    Formula inner = F("exists w, (suf(x, w) and cons(w, y) and cons(w, z))");
    CHECK(is_inner_pattern(inner));
    CHECK(is_inner_pattern(F("exists w, (cons(y, w) and suf(w, x))")));
    CHECK_FALSE(is_inner_pattern(F("exists w, (w <= x and cons(w, y))")));
    std::size_t n = 3;
    auto u = testutil::universe(n);
    CnfBuilder b(n);
    for (auto v : {"x", "y", "z"}) b.register_var(v);
    Encoder enc(b);
    Lit out = enc.encode_inner_atomic(inner);
    Oracle o(n, nullptr);
    std::mt19937_64 rng(5);
    for (const auto& x : u)
      for (const auto& y : u)
        for (std::size_t k = 0; k < 4; ++k) {
          PartialInstance z = u[rng() % u.size()];
          bool expected = o.eval(inner, {{"x", x}, {"y", y}, {"z", z}});
          Probe r = probe(b, {{"x", x}, {"y", y}, {"z", z}}, out);
          CHECK(r.pos == expected);
          CHECK(r.neg == !expected);
        }
  }

  TEST_CASE("catalog definitions are recognized") {
    auto m = match_catalog(F("exists t, (x <= t and y <= t)"));
    REQUIRE(m.has_value());
    CHECK(m->first == Pred::Cons);
    CHECK_FALSE(match_catalog(F("exists t, (x <= t and t <= y)")).has_value());
    Formula suf = parse_formula(*foil_definition(Pred::Suf), ParseMode::Raw);
    exhaustive(4, 2, nullptr, [&](Encoder& e) { return e.encode(suf); },
               [](const auto& v) { return atoms::suf(v[0], v[1]); });
  }

  TEST_CASE("unsupported atomic patterns are rejected") {
    Formula f = F("exists a, exists b, (a < b and b < x)");
    CnfBuilder b(3);
    b.register_var("x");
    Encoder enc(b);
    CHECK_THROWS_AS(enc.encode_inner_atomic(f), UnsupportedPattern);
    CHECK_THROWS_AS(encode_formula(F("not (exists a, exists b, (a < b and b < x))"), 3, nullptr),
                    UnsupportedPattern);
  }

  TEST_CASE("guard expansion") {
    DecisionTree t = testutil::example();
    TreeFacts facts(t);
    GuardStats stats;
    Formula dfs = template_formula("DFS");
    Formula raw = expand_guards(dfs, facts, false, &stats);
    CHECK(stats.copies == 17 + 17 * 17);
    CHECK(stats.expansions == 18);
    DecisionTree yes = DecisionTree::constant(2, true);
    TreeFacts yf(yes);
    Formula one = expand_guards(F("exists z in PosLeaf, cons(x, z)"), yf);
    CHECK(structurally_equal(one, F("cons(x, (?,?))")));
    DecisionTree no = DecisionTree::constant(2, false);
    TreeFacts nf(no);
    CHECK(structurally_equal(expand_guards(F("exists z in PosLeaf, cons(x, z)"), nf),
                             Formula::constant(false)));
    CHECK(structurally_equal(expand_guards(F("forall z in PosLeaf, cons(x, z)"), nf),
                             Formula::constant(true)));
    CHECK(formula_size(raw) > formula_size(expand_guards(dfs, facts)));
  }

  TEST_CASE("connectives keep consistency clauses untouched") {
    Formula f = F("pos(x) and not (x <= y) or (pref(y, x) <-> cons(x, y))");
    DecisionTree t = testutil::example();
    TreeFacts facts(t);
    Encoding a = encode_formula(f, 4, &facts, {"x", "y"});
    Encoding b = encode_formula(Formula::negate(f), 4, &facts, {"x", "y"});
    CHECK(a.builder.consistency() == b.builder.consistency());
    CHECK(solve_embedded(Cnf{a.builder.num_vars(), a.builder.consistency()}).sat);
    for (const auto& c : a.builder.semantic())
      for (const auto& d : a.builder.consistency()) CHECK(c != d);
  }

  TEST_CASE("clause count is linear in the formula") {
    Formula f = F("(a <= b and (b <= c or not (c <= a and (a <= c or (b <= a and c <= b))))) or a <= a");
    CnfBuilder b(2);
    for (auto v : {"a", "b", "c"}) b.register_var(v);
    std::size_t before = b.semantic().size();
    Encoder enc(b);
    enc.require(enc.encode(f));
    std::size_t gates = b.semantic().size() - before;
    // Subsumption atoms cost O(n) each; connective gates cost at most 4 per node.
    std::size_t atom_cost = 0;
    {
      CnfBuilder c(2);
      c.register_var("a");
      c.register_var("b");
      Encoder e(c);
      e.encode_subsumption("a", "b");
      atom_cost = c.semantic().size();
    }
    CHECK(gates <= 4 * formula_size(f) + 7 * atom_cost);
  }

  TEST_CASE("quantifier-free formulas agree with the oracle") {
    std::vector<std::string> atoms_text = {"x <= y", "pref(x, y)", "cons(x, y)", "full(x)",
                                           "suf(y, x)", "pos(x)", "allneg(y)", "x = (0,?,1)"};
    DecisionTree t = random_tree(3, 5, 2);
    TreeFacts facts(t);
    Oracle o(3, &t);
    std::mt19937_64 rng(9);
    std::function<std::string(int)> gen = [&](int depth) -> std::string {
      if (depth == 0 || rng() % 3 == 0) return atoms_text[rng() % atoms_text.size()];
      switch (rng() % 4) {
        case 0: return "not (" + gen(depth - 1) + ")";
        case 1: return "(" + gen(depth - 1) + " and " + gen(depth - 1) + ")";
        case 2: return "(" + gen(depth - 1) + " or " + gen(depth - 1) + ")";
        default: return "(" + gen(depth - 1) + " <-> " + gen(depth - 1) + ")";
      }
    };
    for (int k = 0; k < 30; ++k) {
      Formula f = F(gen(4));
      CAPTURE(print(f));
      Encoding enc = encode_formula(f, 3, &facts, {"x", "y"});
      auto u = testutil::universe(3);
      for (std::size_t r = 0; r < 20; ++r) {
        PartialInstance x = u[rng() % u.size()], y = u[rng() % u.size()];
        Cnf cnf = enc.builder.to_cnf();
        for (std::size_t i = 0; i < 3; ++i) {
          cnf.clauses.push_back({enc.builder.cell("x", i, x[i])});
          cnf.clauses.push_back({enc.builder.cell("y", i, y[i])});
        }
        CHECK(solve_embedded(cnf).sat == o.eval(f, {{"x", x}, {"y", y}}));
      }
    }
  }

  TEST_CASE("satisfiability matches the oracle on random trees") {
    std::vector<std::string> corpus = {"SR((0,1,1,0,1), x)",
                                       "DFS(x) and x <= (1,1,0,0,1)",
                                       "Leaf(x) and allpos(x)",
                                       "exists y in PosLeaf, (cons(x, y) and full(x) and neg(x))",
                                       "forall y in Node, (allneg(y) -> not cons(x, y))",
                                       "NSR((1,1,1,1,1), (1,1,?,?,?), x)"};
    for (std::size_t n : {3, 4, 5}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        DecisionTree t = random_tree(n, 2 + seed * 3, seed + 100 * n);
        TreeFacts facts(t);
        Oracle o(n, &t);
        for (std::string text : corpus) {
          // Trim the constants to dimension n.
          std::string fixed;
          for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '(' || i + 1 >= text.size() ||
                (text[i + 1] != '0' && text[i + 1] != '1' && text[i + 1] != '?')) {
              fixed += text[i];
              continue;
            }
            std::size_t j = text.find(')', i);
            std::string body = text.substr(i + 1, j - i - 1);
            std::string cut;
            for (std::size_t k = 0, cells = 0; k < body.size() && cells < n; ++k) {
              if (body[k] == ',') continue;
              if (!cut.empty()) cut += ',';
              cut += body[k];
              ++cells;
            }
            fixed += "(" + cut + ")";
            i = j;
          }
          CAPTURE(fixed);
          Formula f = parse_formula(fixed, ParseMode::DtFoil);
          auto sats = o.satisfiers(f, "x");
          Encoding enc = encode_formula(f, n, &facts, {"x"});
          SatVerdict v = solve_embedded(enc.builder.to_cnf());
          CHECK(v.sat == !sats.empty());
          if (v.sat) {
            PartialInstance x = decode_var(v, enc.builder, "x");
            CHECK(std::find(sats.begin(), sats.end(), x) != sats.end());
          }
        }
      }
    }
  }

  TEST_CASE("cardinality auxiliaries stay quadratic") {
    std::size_t n = 100;
    CnfBuilder b(n);
    b.register_var("x");
    b.register_var("y");
    Encoder enc(b);
    int before = b.num_vars();
    enc.encode_card_le("x", "y");
    int aux = b.num_vars() - before;
    CHECK(aux <= static_cast<int>(4 * n * n));
    CHECK(aux > 0);
  }
}
