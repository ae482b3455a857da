#pragma once

#include <optional>

#include "dtfoil/instance.hpp"

// Direct evaluators for the {⊆, ⪯} layer and the predicates derived from it.
// All binary operations require equal dimensions and throw DimensionMismatch
// otherwise.
namespace dtfoil::atoms {

// e1 ⊆ e2: every defined feature of e1 has the same value in e2.
bool subsumes(const PartialInstance& e1, const PartialInstance& e2);
// e1 ⊂ e2
bool strictly_subsumes(const PartialInstance& e1, const PartialInstance& e2);
// e1 ⪯ e2: e1 has at least as many undefined features as e2.
bool card_le(const PartialInstance& e1, const PartialInstance& e2);
bool full(const PartialInstance& e);
bool cons(const PartialInstance& e1, const PartialInstance& e2);
// same undefined features
bool suf(const PartialInstance& e1, const PartialInstance& e2);

// Least upper bound under ⊆; nullopt when the arguments are inconsistent.
std::optional<PartialInstance> join(const PartialInstance& e1, const PartialInstance& e2);
// Greatest lower bound under ⊆ (always exists). Same as glb().
PartialInstance meet(const PartialInstance& e1, const PartialInstance& e2);
inline PartialInstance glb(const PartialInstance& e1, const PartialInstance& e2) {
  return meet(e1, e2);
}

std::size_t hamming(const PartialInstance& e1, const PartialInstance& e2);
// hamming(e1,e2) <= hamming(e1,e3). Throws Error on a non-full argument.
bool leh(const PartialInstance& e1, const PartialInstance& e2, const PartialInstance& e3);

bool undef(const PartialInstance& e);
// exactly one defined feature
bool single(const PartialInstance& e);
// defined feature sets are disjoint
bool comp(const PartialInstance& e1, const PartialInstance& e2);
// defined feature sets are complementary
bool max_comp(const PartialInstance& e1, const PartialInstance& e2);
// every feature defined in e2 is defined in e1
bool rel(const PartialInstance& e1, const PartialInstance& e2);
bool max_rel(const PartialInstance& e1, const PartialInstance& e2);
// both define exactly the same single feature, with opposite values
bool opp(const PartialInstance& e1, const PartialInstance& e2);
// e1 ⊂ e2 with exactly one fewer defined feature (predecessor under ⊂)
bool pred(const PartialInstance& e1, const PartialInstance& e2);

}  // namespace dtfoil::atoms
