#include "dtfoil/atoms.hpp"

#include "dtfoil/error.hpp"

namespace dtfoil::atoms {

namespace {

void same_dim(const PartialInstance& a, const PartialInstance& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
}

}  // namespace

bool subsumes(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1[i] != Cell::Bot && e1[i] != e2[i]) return false;
  return true;
}

bool strictly_subsumes(const PartialInstance& e1, const PartialInstance& e2) {
  return subsumes(e1, e2) && e1 != e2;
}

bool card_le(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  return e1.bot_count() >= e2.bot_count();
}

bool full(const PartialInstance& e) { return e.is_full(); }

bool cons(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1[i] != Cell::Bot && e2[i] != Cell::Bot && e1[i] != e2[i]) return false;
  return true;
}

bool suf(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if ((e1[i] == Cell::Bot) != (e2[i] == Cell::Bot)) return false;
  return true;
}

std::optional<PartialInstance> join(const PartialInstance& e1, const PartialInstance& e2) {
  if (!cons(e1, e2)) return std::nullopt;
  PartialInstance out = e1;
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (out[i] == Cell::Bot) out[i] = e2[i];
  return out;
}

PartialInstance meet(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  PartialInstance out(e1.dimension());
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1[i] == e2[i]) out[i] = e1[i];
  return out;
}

std::size_t hamming(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  std::size_t d = 0;
  for (std::size_t i = 0; i < e1.dimension(); ++i) d += e1[i] != e2[i];
  return d;
}

bool leh(const PartialInstance& e1, const PartialInstance& e2, const PartialInstance& e3) {
  same_dim(e1, e2);
  same_dim(e1, e3);
  if (!e1.is_full() || !e2.is_full() || !e3.is_full())
    throw Error("leh: arguments must be full instances");
  return hamming(e1, e2) <= hamming(e1, e3);
}

bool undef(const PartialInstance& e) { return e.bot_count() == e.dimension(); }

bool single(const PartialInstance& e) { return e.bot_count() + 1 == e.dimension(); }

bool comp(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1.defined(i) && e2.defined(i)) return false;
  return true;
}

bool max_comp(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1.defined(i) == e2.defined(i)) return false;
  return true;
}

bool rel(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e2.defined(i) && !e1.defined(i)) return false;
  return true;
}

bool max_rel(const PartialInstance& e1, const PartialInstance& e2) {
  if (!rel(e1, e2)) return false;
  // maximal: defining any further feature of e2 would break rel
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (!e2.defined(i) && e1.defined(i)) return false;
  return true;
}

bool opp(const PartialInstance& e1, const PartialInstance& e2) {
  same_dim(e1, e2);
  if (!single(e1) || !single(e2)) return false;
  for (std::size_t i = 0; i < e1.dimension(); ++i)
    if (e1.defined(i)) return e2.defined(i) && e1[i] != e2[i];
  return false;
}

bool pred(const PartialInstance& e1, const PartialInstance& e2) {
  return subsumes(e1, e2) && e1.bot_count() == e2.bot_count() + 1;
}

}  // namespace dtfoil::atoms
