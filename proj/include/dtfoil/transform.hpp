#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtfoil/catalog.hpp"
#include "dtfoil/formula.hpp"
#include "dtfoil/oracle.hpp"

namespace dtfoil {

// Removes double negation, folds ground atoms (model atoms only when `facts`
// is given) and applies the Boolean identities for true/false. Drops
// quantifiers whose variable does not occur in the body.
Formula simplify(const Formula& f, const TreeFacts* facts = nullptr);

struct OrderViolation {
  std::string axiom;  // "irreflexivity" or "transitivity"
  std::size_t dimension;
  Env params;
  std::vector<PartialInstance> witness;  // (a) or (a, b, c)
};

struct OrderReport {
  bool ok = true;
  std::size_t assignments = 0;  // parameter assignments checked
  std::vector<OrderViolation> violations;
  std::string to_string() const;
};

struct OrderCheckOptions {
  std::size_t exhaustive_up_to = 3;  // enumerate all parameter assignments
  std::size_t samples = 1000;        // random assignments above that
  std::uint64_t seed = 0;
  std::size_t bound = 8;
  std::size_t max_violations = 1;
};

// Bounded check that rho(lhs, rhs) is irreflexive and transitive at each
// dimension in `dims`, for every (or sampled) assignment of its remaining
// free variables.
OrderReport check_strict_order(const Formula& rho, const std::string& lhs, const std::string& rhs,
                               const std::vector<std::size_t>& dims, OrderCheckOptions options = {});
OrderReport check_strict_order(const OptFormula& psi, const std::vector<std::size_t>& dims,
                               OrderCheckOptions options = {});

}  // namespace dtfoil
