#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dtfoil/error.hpp"
#include "dtfoil/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Query decision trees with DT-FOIL, Q-DT-FOIL and Opt-DT-FOIL"};
  std::string solver_path, model, script;
  bool embedded = false;
  double timeout = 600;
  app.add_option("--solver", solver_path, "external DIMACS solver binary");
  app.add_flag("--embedded", embedded, "use the embedded solver");
  app.add_option("--timeout", timeout, "solver timeout in seconds")->check(CLI::PositiveNumber);
  app.add_option("--model", model, "decision tree to load (JSON)");
  app.add_option("--script", script, "read commands from a file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    dtfoil::SolverConfig solver = dtfoil::SolverConfig::from_env();
    if (!solver_path.empty()) solver = dtfoil::SolverConfig::external(solver_path);
    if (embedded) solver = dtfoil::SolverConfig::embedded();
    solver.timeout = timeout;
    dtfoil::Session session(solver);
    if (!model.empty()) {
      try {
        session.load(model);
      } catch (const dtfoil::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
      }
    }
    if (!script.empty()) {
      std::ifstream in(script);
      if (!in) {
        std::cerr << "error: cannot open " << script << '\n';
        return 1;
      }
      session.run(in, std::cout, false);
    } else {
      session.run(std::cin, std::cout, ::isatty(STDIN_FILENO) != 0);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
