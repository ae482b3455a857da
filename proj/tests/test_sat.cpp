#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "dtfoil/error.hpp"
#include "dtfoil/sat.hpp"
#include "helpers.hpp"

using namespace dtfoil;
using testutil::P;

namespace fs = std::filesystem;

namespace {

bool satisfies(const Cnf& cnf, const std::vector<bool>& m) {
  for (const auto& c : cnf.clauses) {
    bool ok = false;
    for (Lit l : c) ok = ok || (l > 0 ? m[l] : !m[-l]);
    if (!ok) return false;
  }
  return true;
}

bool brute_force(const Cnf& cnf) {
  std::vector<bool> m(cnf.num_vars + 1);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cnf.num_vars); ++bits) {
    for (int v = 1; v <= cnf.num_vars; ++v) m[v] = (bits >> (v - 1)) & 1;
    if (satisfies(cnf, m)) return true;
  }
  return false;
}

Cnf random_3cnf(int vars, int clauses, std::mt19937_64& rng) {
  Cnf cnf;
  cnf.num_vars = vars;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    for (int k = 0; k < 3; ++k) {
      Lit v = static_cast<Lit>(rng() % vars) + 1;
      c.push_back(rng() % 2 ? v : -v);
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

fs::path script(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << "#!/bin/sh\n" << body;
  fs::permissions(p, fs::perms::owner_all);
  return p;
}

std::size_t cnf_files(const fs::path& dir) {
  std::size_t k = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".cnf") ++k;
  return k;
}

}  // namespace

TEST_SUITE("sat") {
  TEST_CASE("unit cases") {
    CHECK_FALSE(solve_embedded(Cnf{1, {{1}, {-1}}}).sat);
    SatVerdict v = solve_embedded(Cnf{2, {{1, 2}}});
    REQUIRE(v.sat);
    CHECK((v.value(1) || v.value(2)));
    CHECK(solve_embedded(Cnf{0, {}}).sat);
    CHECK_FALSE(solve_embedded(Cnf{0, {{}}}).sat);
    CHECK(solve_embedded(Cnf{3, {{1, -1}, {2, 3, -2}}}).sat);
    CHECK(solve_embedded(Cnf{2, {}}).model.size() == 3);
  }

  TEST_CASE("embedded solver agrees with brute force") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 300; ++k) {
      int vars = 4 + static_cast<int>(rng() % 9);
      Cnf cnf = random_3cnf(vars, static_cast<int>(vars * (3 + rng() % 3)), rng);
      SatVerdict v = solve_embedded(cnf);
      CHECK(v.sat == brute_force(cnf));
      if (v.sat) CHECK(satisfies(cnf, v.model));
    }
  }

  TEST_CASE("pigeonhole is unsatisfiable") {
    int holes = 6, pigeons = 7;
    Cnf cnf;
    cnf.num_vars = holes * pigeons;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    for (int p = 0; p < pigeons; ++p) {
      Clause c;
      for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
      cnf.clauses.push_back(c);
    }
    for (int h = 0; h < holes; ++h)
      for (int p = 0; p < pigeons; ++p)
        for (int q = p + 1; q < pigeons; ++q) cnf.clauses.push_back({-var(p, h), -var(q, h)});
    CHECK_FALSE(solve_embedded(cnf).sat);
  }

  TEST_CASE("embedded solver is deterministic") {
    std::mt19937_64 rng(3);
    Cnf cnf = random_3cnf(60, 240, rng);
    SatVerdict a = solve_embedded(cnf), b = solve_embedded(cnf);
    CHECK(a.sat == b.sat);
    CHECK(a.model == b.model);
  }

  TEST_CASE("embedded and external agree on random 3-CNF") {
    std::string path = testutil::external_solver();
    if (path.empty()) {
      MESSAGE("no external solver found; skipping the cross-check");
      return;
    }
    SolverConfig ext = SolverConfig::external(path);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
      Cnf cnf = random_3cnf(50, 200 + static_cast<int>(rng() % 30), rng);
      SatVerdict a = solve_embedded(cnf);
      SatVerdict b = solve(cnf, ext);
      CHECK(a.sat == b.sat);
      if (b.sat) CHECK(satisfies(cnf, b.model));
    }
  }

  TEST_CASE("decode") {
    CnfBuilder b(2);
    b.register_var("x");
    Cnf cnf = b.to_cnf();
    cnf.clauses.push_back({b.cell("x", 0, Cell::One)});
    cnf.clauses.push_back({b.cell("x", 1, Cell::Bot)});
    SatVerdict v = solve_embedded(cnf);
    REQUIRE(v.sat);
    CHECK(decode(v, b).at("x") == P("(1,?)"));

    SatVerdict broken = v;
    broken.model[b.cell("x", 0, Cell::Zero)] = true;
    CHECK_THROWS_AS(decode_var(broken, b, "x"), InternalError);
    broken = v;
    broken.model[b.cell("x", 0, Cell::One)] = false;
    CHECK_THROWS_AS(decode_var(broken, b, "x"), InternalError);

    CnfBuilder z(0);
    z.register_var("x");
    SatVerdict e = solve_embedded(z.to_cnf());
    REQUIRE(e.sat);
    CHECK(decode_var(e, z, "x") == PartialInstance());
  }

  TEST_CASE("solver configuration") {
    CHECK(SolverConfig::embedded().mode == SolverConfig::Mode::Embedded);
    SolverConfig c = SolverConfig::external("/bin/foo", {"-q"});
    CHECK(c.mode == SolverConfig::Mode::External);
    CHECK(c.args == std::vector<std::string>{"-q"});
    CHECK(c.timeout > 0);
    SolverConfig bad = SolverConfig::external("/bin/true");
    bad.timeout = 0;
    CHECK_THROWS_AS(solve(Cnf{1, {{1}}}, bad), Error);
  }

  TEST_CASE("external solver failures") {
    fs::path dir = fs::temp_directory_path() / "dtfoil_sat_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    Cnf cnf{1, {{1}}};

    SolverConfig missing = SolverConfig::external("/nonexistent/solver");
    missing.workdir = dir;
    CHECK_THROWS_AS(solve(cnf, missing), SolverError);

    SolverConfig odd = SolverConfig::external("/bin/false");
    odd.workdir = dir;
    CHECK_THROWS_AS(solve(cnf, odd), SolverError);
    CHECK(cnf_files(dir) >= 1);

    fs::path slow = script("dtfoil_slow.sh", "sleep 5\n");
    SolverConfig timeout = SolverConfig::external(slow.string());
    timeout.timeout = 0.3;
    timeout.workdir = dir;
    CHECK_THROWS_AS(solve(cnf, timeout), SolverError);

    fs::path liar = script("dtfoil_liar.sh", "echo 's UNSATISFIABLE'\nexit 10\n");
    SolverConfig garbled = SolverConfig::external(liar.string());
    garbled.workdir = dir;
    CHECK_THROWS_AS(solve(cnf, garbled), SolverError);

    fs::path good = script("dtfoil_good.sh", "echo 's SATISFIABLE'\necho 'v 1 0'\nexit 10\n");
    SolverConfig fine = SolverConfig::external(good.string());
    fine.workdir = dir;
    std::size_t before = cnf_files(dir);
    SatVerdict v = solve(cnf, fine);
    CHECK(v.sat);
    CHECK(v.value(1));
    CHECK(cnf_files(dir) == before);

    fs::path unsat = script("dtfoil_unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n");
    SolverConfig no = SolverConfig::external(unsat.string());
    no.workdir = dir;
    CHECK_FALSE(solve(cnf, no).sat);

    for (const auto& p : {slow, liar, good, unsat}) fs::remove(p);
    fs::remove_all(dir);
  }
}
