#include <doctest.h>

#include "dtfoil/error.hpp"
#include "dtfoil/library.hpp"
#include "dtfoil/parser.hpp"
#include "dtfoil/transform.hpp"
#include "helpers.hpp"

using namespace dtfoil;
using testutil::P;

namespace {

Formula F(const std::string& s, ParseMode m = ParseMode::Raw) { return parse_formula(s, m); }

}  // namespace

TEST_SUITE("formula") {
  TEST_CASE("query prefix becomes a block") {
    auto parsed = parse("exists y, SR(x, y)");
    REQUIRE(std::holds_alternative<Formula>(parsed));
    const Formula& f = std::get<Formula>(parsed);
    const auto* b = f.as<ast::Block>();
    REQUIRE(b != nullptr);
    CHECK(b->q == Quantifier::Exists);
    CHECK(b->vars == std::vector<std::string>{"y"});
    CHECK(structurally_equal(b->body, *expand_template("SR", {Term::var("x"), Term::var("y")})));
    CHECK(free_vars(f) == std::set<std::string>{"x"});
  }

  TEST_CASE("min formulas") {
    auto parsed = parse("min[SR(u, x), subset(y, z)]");
    REQUIRE(std::holds_alternative<OptFormula>(parsed));
    const OptFormula& o = std::get<OptFormula>(parsed);
    CHECK(o.target == "x");
    CHECK(structurally_equal(o.rho, F("y <= z")));
    CHECK_THROWS_AS(parse("min[SR(u, x), exists t, pos(t)]"), WellFormednessError);
    CHECK_THROWS_AS(parse_formula("min[SR(u, x), y < z]"), ParseError);
  }

  TEST_CASE("well-formedness rules") {
    CHECK_THROWS_AS(parse("forall y, exists z, y <= z and pos(z)"), WellFormednessError);
    CHECK_THROWS_AS(F("exists y, pos(y)", ParseMode::DtFoil), WellFormednessError);
    CHECK_NOTHROW(F("exists y in Node, pos(y)", ParseMode::DtFoil));
    CHECK_NOTHROW(F("exists t, (t <= x and x <= t)", ParseMode::DtFoil));
    CHECK_THROWS_AS(F("pos(x)", ParseMode::Atomic), WellFormednessError);
    CHECK_NOTHROW(F("cons(x, y) and leh(x, y, z)", ParseMode::Atomic));
    try {
      parse("forall y, exists z, y <= z and pos(z)");
      FAIL("expected an error");
    } catch (const WellFormednessError& e) {
      CHECK(e.rule() == "Q-DT-FOIL no quantifier alternation");
    }
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_formula("x <= \n  y and and");
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.col() > 1);
    }
    CHECK_THROWS_AS(parse_formula("subset(x)"), Error);
    CHECK_THROWS_AS(parse_formula("frob(x, y)"), Error);
    CHECK_THROWS_AS(parse_formula("SR(x)"), Error);
    CHECK_THROWS_AS(parse_formula("x <= (1,?"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
  }

  TEST_CASE("print and parse round trip on the query library") {
    for (const auto& t : templates()) {
      CAPTURE(t.name);
      Formula f = template_formula(t.name);
      std::string text = print(f);
      ParseMode mode = t.logic == Logic::Atomic   ? ParseMode::Atomic
                       : t.logic == Logic::DtFoil ? ParseMode::DtFoil
                                                  : ParseMode::Query;
      Formula g = parse_formula(text, mode);
      CHECK(structurally_equal(f, g));
      CHECK(print(g) == text);
    }
    for (OptQuery q : {OptQuery::MinimalSR, OptQuery::MinimumSR, OptQuery::MinimumCR,
                       OptQuery::MaximumCA, OptQuery::MinimalDFS}) {
      OptFormula o = opt_query(q, P("(1,0,1)"));
      CHECK(structurally_equal(parse_opt(print(o)), o));
    }
  }

  TEST_CASE("templates type-check as classified") {
    for (const auto& t : templates()) {
      CAPTURE(t.name);
      CHECK_NOTHROW(template_formula(t.name));
      Formula f = template_formula(t.name);
      if (t.logic == Logic::QDtFoil) CHECK(contains_block(f));
      if (t.logic != Logic::QDtFoil) CHECK_FALSE(contains_block(f));
      if (t.logic == Logic::Atomic) CHECK(is_atomic_formula(f));
    }
    CHECK_FALSE(expand_template("Nope", {}).has_value());
    CHECK_THROWS_AS(expand_template("SR", {Term::var("x")}), Error);
  }

  TEST_CASE("strict cardinality shorthand") {
    Formula f = F("MinimumSR(x, y)");
    Formula g = F("SR(x, y) and (forall z, ((pref(z, y) and not pref(y, z)) -> not SR(x, z)))");
    CHECK(structurally_equal(f, g));
  }

  TEST_CASE("free variables and substitution") {
    Formula sr = F("SR(x, y)");
    CHECK(free_vars(sr) == std::set<std::string>{"x", "y"});
    Formula s = substitute(sr, "x", Term::constant(P("(0,1)")));
    CHECK(free_vars(s) == std::set<std::string>{"y"});
    CHECK(substitute(sr, "q", Term::constant(P("(0,1)"))).id() == sr.id());
    Formula bound = F("exists t, t <= x");
    CHECK_THROWS_AS(substitute(bound, "t", Term::constant(P("(0,1)"))), Error);
    Formula capture = F("exists t, t <= x");
    Formula r = substitute(capture, "x", Term::var("t"));
    CHECK(free_vars(r) == std::set<std::string>{"t"});
  }

  TEST_CASE("simplify") {
    Formula p = F("pos(x)");
    CHECK(structurally_equal(simplify(F("not not pos(x)")), p));
    CHECK(structurally_equal(simplify(F("(1,0,?) <= (1,1,1)")), Formula::constant(false)));
    CHECK(structurally_equal(simplify(F("pos(x) and true")), p));
    CHECK(structurally_equal(simplify(F("pos(x) or true")), Formula::constant(true)));
    CHECK(structurally_equal(simplify(F("exists t, pos(x)")), p));
    DecisionTree t = testutil::example();
    TreeFacts facts(t);
    CHECK(structurally_equal(simplify(F("pos((0,0,1,1))"), &facts), Formula::constant(true)));
    CHECK(structurally_equal(simplify(F("pos((0,0,1,1))")), F("pos((0,0,1,1))")));
  }

  TEST_CASE("simplify preserves truth") {
    DecisionTree t = testutil::example();
    std::vector<std::string> corpus = {
        "exists y, (y <= (0,0,?,?) and not not pos(y))",
        "forall y, (pref(y, (1,?,?,?)) or true) and (0,?,?,?) <= (0,1,?,?)",
        "exists y, (allpos(y) and (not (y <= (1,1,1,1)) or false))",
        "forall y, forall z, ((y <= z and z <= y) -> not not (y = z))",
        "exists y, (full(y) and (neg(y) <-> not pos(y)) and not not true)",
        "not (exists y, ((1,0,?,?) <= y and false)) and (pos((0,0,1,1)) or pos((0,1,1,0)))",
    };
    Oracle oracle(4, &t);
    TreeFacts facts(t);
    for (const auto& text : corpus) {
      CAPTURE(text);
      Formula f = F(text);
      CHECK(oracle.eval(f) == oracle.eval(simplify(f)));
      CHECK(oracle.eval(f) == oracle.eval(simplify(f, &facts)));
    }
  }

  TEST_CASE("strict order check") {
    CHECK(check_strict_order(F("y < z"), "y", "z", {3}).ok);
    OrderReport bad = check_strict_order(F("y <= z"), "y", "z", {2});
    CHECK_FALSE(bad.ok);
    REQUIRE_FALSE(bad.violations.empty());
    CHECK(bad.violations.front().axiom == "irreflexivity");
    CHECK(check_strict_order(F("rho3(u, y, z)"), "y", "z", {3}).ok);
    OrderReport r = check_strict_order(F("rho3(u, y, z)"), "y", "z", {2});
    CHECK(r.assignments == 9);
    CHECK_THROWS_AS(check_strict_order(F("y < z"), "y", "z", {9}), OracleBoundExceeded);
  }
}
