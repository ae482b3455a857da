#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dtfoil/cnf.hpp"
#include "dtfoil/instance.hpp"

namespace dtfoil {

struct SolverConfig {
  enum class Mode { Embedded, External };
  Mode mode = Mode::Embedded;
  std::string path;               // External: solver binary
  std::vector<std::string> args;  // External: extra arguments before the CNF path
  double timeout = 600;           // seconds, > 0
  std::filesystem::path workdir = std::filesystem::temp_directory_path();

  static SolverConfig embedded();
  static SolverConfig external(std::string path, std::vector<std::string> args = {});
  // External with $DTFOIL_SOLVER when set, Embedded otherwise.
  static SolverConfig from_env();
};

struct SatVerdict {
  bool sat = false;
  std::vector<bool> model;  // indexed by variable id; entry 0 unused
  bool value(Lit l) const { return l > 0 ? model.at(l) : !model.at(-l); }
};

// Throws SolverError on a missing binary, a timeout, unparseable output or
// an exit code other than 10/20. Temp CNF files are kept on failure.
SatVerdict solve(const Cnf& cnf, const SolverConfig& config = SolverConfig::embedded());
SatVerdict solve_embedded(const Cnf& cnf);

// Formula variables (constants excluded) decoded from a satisfying model.
// Throws InternalError when an exactly-one constraint is violated.
std::map<std::string, PartialInstance> decode(const SatVerdict& verdict, const CnfBuilder& builder);
PartialInstance decode_var(const SatVerdict& verdict, const CnfBuilder& builder,
                           const std::string& name);

}  // namespace dtfoil
