#include <doctest.h>

#include "dtfoil/atoms.hpp"
#include "dtfoil/catalog.hpp"
#include "dtfoil/error.hpp"
#include "dtfoil/parser.hpp"
#include "helpers.hpp"

using namespace dtfoil;
using testutil::P;

namespace {

std::size_t defined_count(const PartialInstance& e) { return e.dimension() - e.bot_count(); }

// Reference definitions by completion sets.
bool ref_subsumes(const PartialInstance& a, const PartialInstance& b) {
  auto cb = completions(b);
  for (const auto& c : cb) {
    auto ca = completions(a);
    if (std::find(ca.begin(), ca.end(), c) == ca.end()) return false;
  }
  return true;
}

bool ref_cons(const PartialInstance& a, const PartialInstance& b) {
  for (const auto& c : completions(a)) {
    auto cb = completions(b);
    if (std::find(cb.begin(), cb.end(), c) != cb.end()) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("atoms") {
  TEST_CASE("subsumption examples") {
    CHECK(atoms::subsumes(P("(1,?)"), P("(1,0)")));
    CHECK_FALSE(atoms::subsumes(P("(1,?)"), P("(0,0)")));
    for (const auto& e : testutil::universe(3)) CHECK(atoms::subsumes(e, e));
    CHECK_THROWS_AS(atoms::subsumes(P("(1)"), P("(1,0)")), DimensionMismatch);
  }

  TEST_CASE("subsumption matches completion inclusion") {
    auto u = testutil::universe(3);
    for (const auto& a : u)
      for (const auto& b : u) {
        CHECK(atoms::subsumes(a, b) == ref_subsumes(a, b));
        CHECK(atoms::strictly_subsumes(a, b) == (ref_subsumes(a, b) && a != b));
      }
  }

  TEST_CASE("cardinality preorder") {
    CHECK(atoms::card_le(P("(?,?)"), P("(1,?)")));
    CHECK_FALSE(atoms::card_le(P("(1,0)"), P("(?,?)")));
    auto u = testutil::universe(3);
    for (const auto& a : u)
      for (const auto& b : u) CHECK(atoms::card_le(a, b) == (a.bot_count() >= b.bot_count()));
  }

  TEST_CASE("unary and binary catalog examples") {
    CHECK(atoms::full(P("(1,0)")));
    CHECK_FALSE(atoms::full(P("(1,?)")));
    CHECK(atoms::full(P("()")));
    CHECK(atoms::cons(P("(1,?)"), P("(?,0)")));
    CHECK_FALSE(atoms::cons(P("(1,?)"), P("(0,?)")));
    CHECK(atoms::cons(P("(?,?)"), P("(0,1)")));
    CHECK(atoms::suf(P("(1,?)"), P("(0,?)")));
    CHECK_FALSE(atoms::suf(P("(1,?)"), P("(1,0)")));
    CHECK(atoms::comp(P("(1,?)"), P("(?,0)")));
    CHECK(atoms::opp(P("(1,?)"), P("(0,?)")));
    CHECK_FALSE(atoms::opp(P("(1,?)"), P("(?,0)")));
    CHECK(atoms::undef(P("(?,?)")));
    CHECK(atoms::single(P("(?,1,?)")));
    CHECK_FALSE(atoms::single(P("(0,1,?)")));
  }

  TEST_CASE("cons matches shared completions") {
    auto u = testutil::universe(3);
    for (const auto& a : u)
      for (const auto& b : u) CHECK(atoms::cons(a, b) == ref_cons(a, b));
  }

  TEST_CASE("join and meet") {
    CHECK(atoms::join(P("(1,0,?,?)"), P("(1,?,?,1)")) == P("(1,0,?,1)"));
    CHECK_FALSE(atoms::join(P("(1,?)"), P("(0,0)")).has_value());
    CHECK(atoms::join(P("(1,0,?)"), P("(?,?,?)")) == P("(1,0,?)"));
    CHECK(atoms::meet(P("(1,0,?,?)"), P("(1,?,?,1)")) == P("(1,?,?,?)"));
    CHECK(atoms::meet(P("(1,?)"), P("(0,0)")) == P("(?,?)"));
    CHECK(atoms::glb(P("(1,0,1)"), P("(1,0,1)")) == P("(1,0,1)"));
  }

  TEST_CASE("join and meet are the lattice bounds") {
    auto u = testutil::universe(2);
    for (const auto& a : u)
      for (const auto& b : u) {
        PartialInstance m = atoms::meet(a, b);
        CHECK(atoms::subsumes(m, a));
        CHECK(atoms::subsumes(m, b));
        for (const auto& c : u)
          if (atoms::subsumes(c, a) && atoms::subsumes(c, b)) CHECK(atoms::subsumes(c, m));
        auto j = atoms::join(a, b);
        CHECK(j.has_value() == atoms::cons(a, b));
        if (j) {
          CHECK(atoms::subsumes(a, *j));
          CHECK(atoms::subsumes(b, *j));
          for (const auto& c : u)
            if (atoms::subsumes(a, c) && atoms::subsumes(b, c)) CHECK(atoms::subsumes(*j, c));
        }
      }
  }

  TEST_CASE("hamming comparison") {
    CHECK(atoms::leh(P("(1,1)"), P("(1,0)"), P("(0,0)")));
    CHECK_FALSE(atoms::leh(P("(1,1)"), P("(0,0)"), P("(1,0)")));
    for (const auto& e : testutil::full_instances(3))
      for (const auto& f : testutil::full_instances(3)) CHECK(atoms::leh(e, e, f));
    CHECK_THROWS_AS(atoms::leh(P("(1,?)"), P("(1,0)"), P("(0,0)")), Error);
    CHECK(atoms::hamming(P("(1,0,1)"), P("(0,0,0)")) == 2);
  }

  TEST_CASE("derived predicates by brute force") {
    auto u = testutil::universe(4);
    for (const auto& a : u)
      for (const auto& b : u) {
        std::size_t common = 0, covered = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          if (a.defined(i) && b.defined(i)) ++common;
          if (a.defined(i) || b.defined(i)) ++covered;
        }
        bool b_in_a = true;
        for (std::size_t i = 0; i < 4; ++i)
          if (b.defined(i) && !a.defined(i)) b_in_a = false;
        CHECK(atoms::max_rel(a, b) == atoms::suf(a, b));
        CHECK(atoms::comp(a, b) == (common == 0));
        CHECK(atoms::max_comp(a, b) == (common == 0 && covered == 4));
        CHECK(atoms::rel(a, b) == b_in_a);
        CHECK(atoms::pred(a, b) ==
              (atoms::strictly_subsumes(a, b) && defined_count(a) + 1 == defined_count(b)));
      }
  }

  TEST_CASE("catalog definitions agree with the direct evaluators") {
    for (const auto& info : all_preds()) {
      if (info.model) continue;
      auto def = foil_definition(info.pred);
      if (!def) continue;
      CAPTURE(info.name);
      std::size_t n = info.arity == 3 ? 2 : 3;
      auto u = testutil::universe(n);
      Formula body = parse_formula(*def, ParseMode::Raw);
      std::vector<std::string> names = {"a", "b", "c"};
      std::vector<std::size_t> idx(info.arity, 0);
      while (true) {
        std::vector<std::pair<std::string, Term>> subst;
        std::vector<const PartialInstance*> args;
        for (std::size_t k = 0; k < info.arity; ++k) {
          subst.emplace_back(names[k], Term::constant(u[idx[k]]));
          args.push_back(&u[idx[k]]);
        }
        bool direct = eval_pred(info.pred, args, nullptr);
        bool defined = atoms::eval_ground_atomic(substitute(body, subst), n);
        CHECK(direct == defined);
        std::size_t k = 0;
        while (k < info.arity && ++idx[k] == u.size()) idx[k++] = 0;
        if (k == info.arity) break;
      }
    }
  }

  TEST_CASE("ground atomic evaluation") {
    CHECK(atoms::eval_ground_atomic(parse_formula("forall y, ((1,0) <= y -> y <= (1,0))",
                                                  ParseMode::Raw),
                                    2));
    CHECK_FALSE(atoms::eval_ground_atomic(parse_formula("forall y, ((1,?) <= y -> y <= (1,?))",
                                                        ParseMode::Raw),
                                          2));
    Formula big = parse_formula("exists y, y <= y", ParseMode::Raw);
    CHECK_THROWS_AS(atoms::eval_ground_atomic(big, 9), OracleBoundExceeded);
    CHECK(atoms::eval_ground_atomic(big, 9, 9));
  }
}
