#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtfoil/formula.hpp"
#include "dtfoil/instance.hpp"

namespace dtfoil {

enum class Logic { Atomic, DtFoil, QDtFoil };

struct TemplateInfo {
  std::string name;
  std::vector<std::string> params;
  std::string body;  // surface syntax over the parameter names
  Logic logic;
};

// The query library, in dependency order.
const std::vector<TemplateInfo>& templates();
const TemplateInfo* find_template(const std::string& name);

// Expansion of NAME(args...) with capture-avoiding substitution. Throws
// Error on an arity mismatch; nullopt for an unknown name.
std::optional<Formula> expand_template(const std::string& name, const std::vector<Term>& args);

// Template body over its parameter names, checked for its logic class.
Formula template_formula(const std::string& name);

enum class OptQuery { MinimalSR, MinimumSR, MinimumCR, MaximumCA, MinimalDFS };

const char* opt_query_name(OptQuery q);
// Optimization query for instance u (unused by MinimalDFS).
OptFormula opt_query(OptQuery q, const PartialInstance& u);
std::string opt_query_text(OptQuery q);

}  // namespace dtfoil
