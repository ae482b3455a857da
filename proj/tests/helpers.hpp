#pragma once


#include <random>
#include <string>
#include <vector>

#include "dtfoil/instance.hpp"
#include "dtfoil/oracle.hpp"
#include "dtfoil/tree.hpp"

namespace testutil {

inline dtfoil::PartialInstance P(const std::string& s) { return dtfoil::PartialInstance::parse(s); }

inline std::string data(const std::string& name) { return std::string(DTFOIL_TEST_DATA) + "/" + name; }

inline dtfoil::DecisionTree example() { return dtfoil::load_tree(data("example.json")); }
// Accepts 1^2 x {0,1}^2 and {0,1}^2 x 1^2.
inline dtfoil::DecisionTree m22() { return dtfoil::load_tree(data("m22.json")); }

inline std::vector<dtfoil::PartialInstance> universe(std::size_t n) {
  return dtfoil::Universe(n, 8).all();
}

inline std::vector<dtfoil::PartialInstance> full_instances(std::size_t n) {
  std::vector<dtfoil::PartialInstance> out;
  for (const auto& e : universe(n))
    if (e.is_full()) out.push_back(e);
  return out;
}

inline dtfoil::PartialInstance random_instance(std::size_t n, std::mt19937_64& rng, bool full) {
  dtfoil::PartialInstance e(n, dtfoil::Cell::Bot);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rng() % (full ? 2 : 3);
    e[i] = static_cast<dtfoil::Cell>(r);
  }
  return e;
}

inline const char* external_solver() { return DTFOIL_EXTERNAL_SOLVER_PATH; }

}  // namespace testutil
