#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dtfoil/library.hpp"
#include "dtfoil/session.hpp"
#include "helpers.hpp"

using namespace dtfoil;
using testutil::P;

namespace {

std::string run(Session& s, const std::string& line) {
  std::ostringstream os;
  s.execute(line, os);
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("queries need a model") {
    Session s;
    CHECK(run(s, "explain sr (0,0,1,1)") == "error: no model loaded\n");
    CHECK(run(s, "eval exists y, pos(y)") == "error: no model loaded\n");
    CHECK(run(s, "show dim") == "error: no model loaded\n");
    CHECK(s.errors() == 3);
  }

  TEST_CASE("load and show") {
    Session s;
    CHECK(run(s, "load " + testutil::data("example.json")) ==
          "loaded " + testutil::data("example.json") + ": dimension 4, 17 nodes\n");
    CHECK(run(s, "show dim") == "4\n");
    CHECK(run(s, "load /nonexistent.json").rfind("error: ", 0) == 0);
    CHECK(s.has_tree());
  }

  TEST_CASE("eval prints verdict, witnesses and calls") {
    Session s;
    s.set_tree(testutil::example());
    std::string out = run(s, "eval exists y, SR((0,0,1,1), y)");
    CHECK(out.rfind("true\ny = ", 0) == 0);
    CHECK(out.find("sat calls: 1\n") != std::string::npos);
    CHECK(run(s, "eval pos((0,1,1,0))") == "false\nsat calls: 0\n");
    CHECK(run(s, "eval pos(e)") == "error: unbound variable 'e'\n");
    run(s, "let e = (0,0,1,1)");
    CHECK(run(s, "eval pos(e)") == "true\nsat calls: 0\n");
    CHECK(s.bindings().at("e") == P("(0,0,1,1)"));
    CHECK(run(s, "let pos = (0,0,1,1)").rfind("error: ", 0) == 0);
  }

  TEST_CASE("explain minimumsr matches the oracle") {
    Session s;
    s.set_tree(testutil::example());
    std::string out = run(s, "explain minimumsr (0,0,1,1)");
    REQUIRE(s.bindings().count("_last") == 1);
    auto mins = oracle_minimals(opt_query(OptQuery::MinimumSR, P("(0,0,1,1)")), testutil::example());
    CHECK(std::find(mins.begin(), mins.end(), s.bindings().at("_last")) != mins.end());
    CHECK(out.find("answer: " + s.bindings().at("_last").to_string()) == 0);
    CHECK(out.find("descent: ") != std::string::npos);
    CHECK(run(s, "eval SR((0,0,1,1), _last)") == "true\nsat calls: 0\n");
  }

  TEST_CASE("opt checks the order") {
    Session s;
    s.set_tree(testutil::m22());
    CHECK(run(s, "opt min[SR((1,1,1,1), x), y <= z]").rfind("error: order formula", 0) == 0);
    std::string out = run(s, "opt min[SR((1,1,1,1), x), y < z]");
    CHECK(out.find("undefined: 2\n") != std::string::npos);
  }

  TEST_CASE("errors never stop the session") {
    Session s;
    s.set_tree(testutil::example());
    for (const char* line : {"frobnicate", "eval (", "eval forall y, exists z, y <= z",
                             "opt min[pos(x)]", "explain sr", "explain zz (1,0,1,1)",
                             "let = (1)", "show nothing", "gen x y", "bench minsr 0 3 1",
                             "dimacs pos(x)", "seed -1", "load"}) {
      CAPTURE(line);
      CHECK(run(s, line).rfind("error: ", 0) == 0);
    }
    CHECK(s.execute("# comment", std::cout));
    CHECK_FALSE(s.execute("quit", std::cout));
  }

  TEST_CASE("batch output equals line by line") {
    std::string script = "load " + testutil::data("m22.json") +
                         "\nlet u = (1,1,1,1)\nexplain minsr u\nshow bindings\n"
                         "eval exists y, MinimumSR(u, y)\nbogus\nexplain mincr u\n";
    Session a, b;
    std::istringstream in(script);
    std::ostringstream batch;
    a.run(in, batch, false);
    std::ostringstream lines;
    std::istringstream again(script);
    std::string line;
    while (std::getline(again, line)) b.execute(line, lines);
    CHECK(batch.str() == lines.str());
    CHECK(a.history().size() == 7);
  }

  TEST_CASE("gen and dimacs") {
    Session s;
    CHECK(run(s, "seed 5") == "seed 5\n");
    CHECK(run(s, "gen 6 8") == "generated tree: dimension 6, 15 nodes\n");
    std::string path = (std::filesystem::temp_directory_path() / "dtfoil_cli.cnf").string();
    std::string out = run(s, "dimacs pos(x) and x <= y " + path);
    CHECK(out.rfind("wrote " + path, 0) == 0);
    std::ifstream in(path);
    std::string header;
    while (std::getline(in, header) && header.rfind("c ", 0) == 0) {}
    CHECK(header.rfind("p cnf ", 0) == 0);
    std::filesystem::remove(path);
  }

  TEST_CASE("bench csv") {
    auto rows = bench({"minsr"}, {2}, {3}, 2, 0, SolverConfig::embedded());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].dim == 2);
    CHECK(rows[0].nodes == 3);
    std::string csv = bench_csv(rows);
    CHECK(csv.rfind("query,dim,nodes,mean_s,sat_calls\nminsr,2,3,", 0) == 0);
    Session s;
    CHECK(run(s, "bench minsr,dfs 2,3 3 1").rfind("query,dim,nodes,mean_s,sat_calls\n", 0) == 0);
  }

  TEST_CASE("explain queries") {
    for (const auto& key : explain_keys()) {
      if (key == "sr") continue;
      CHECK_NOTHROW(explain_query(key, P("(1,0)")));
    }
    CHECK_THROWS(explain_query("nope", P("(1,0)")));
  }
}
