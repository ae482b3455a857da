#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dtfoil/formula.hpp"

namespace dtfoil {

// Target class of a parsed formula.
//  Query:  Q-DT-FOIL; unguarded quantifiers at the Boolean top level become
//          quantifier blocks.
//  DtFoil: guarded quantification only (unguarded quantifiers over atomic
//          bodies are allowed).
//  Atomic: vocabulary {⊆, ⪯} and the derived atomic catalog only.
//  Raw:    no well-formedness check (template bodies, definitions).
enum class ParseMode { Query, DtFoil, Atomic, Raw };

// Expands an uppercase template call; nullopt when the name is unknown.
using TemplateResolver =
    std::function<std::optional<Formula>(const std::string& name, const std::vector<Term>& args)>;

using Parsed = std::variant<Formula, OptFormula>;

// Accepts a formula or "min[phi, rho]". Formulas are checked as Query,
// min parts as DtFoil / Atomic.
Parsed parse(std::string_view text);
Formula parse_formula(std::string_view text, ParseMode mode = ParseMode::Query);
OptFormula parse_opt(std::string_view text);
Formula parse_formula(std::string_view text, ParseMode mode, const TemplateResolver& resolver);

// Well-formedness passes (throw WellFormednessError naming the rule).
Formula to_query(const Formula& f);
void require_dtfoil(const Formula& f);
void require_atomic(const Formula& f);
void require_opt(const OptFormula& f);

// Canonical text; parse(print(f)) is structurally equal to f.
std::string print(const Formula& f);
std::string print(const OptFormula& f);
std::string print(const Term& t);

}  // namespace dtfoil
