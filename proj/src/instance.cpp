#include "dtfoil/instance.hpp"

#include <cctype>

#include "dtfoil/error.hpp"

namespace dtfoil {

std::size_t PartialInstance::bot_count() const {
  std::size_t k = 0;
  for (Cell c : cells_) k += c == Cell::Bot;
  return k;
}

std::vector<std::size_t> PartialInstance::bot_set() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] == Cell::Bot) out.push_back(i);
  return out;
}

std::string PartialInstance::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i) s += ',';
    s += cell_char(cells_[i]);
  }
  s += ')';
  return s;
}

PartialInstance PartialInstance::parse(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> PartialInstance {
    throw ParseError(msg, 1, static_cast<int>(pos) + 1);
  };
  skip();
  if (pos >= text.size() || text[pos] != '(') return fail("expected '(' to start an instance");
  ++pos;
  std::vector<Cell> cells;
  skip();
  if (pos < text.size() && text[pos] == ')') {
    ++pos;
  } else {
    for (;;) {
      skip();
      if (pos >= text.size()) return fail("unterminated instance");
      char c = text[pos];
      if (c == '0') cells.push_back(Cell::Zero);
      else if (c == '1') cells.push_back(Cell::One);
      else if (c == '?') cells.push_back(Cell::Bot);
      else return fail(std::string("unexpected character '") + c + "' in instance");
      ++pos;
      skip();
      if (pos >= text.size()) return fail("unterminated instance");
      if (text[pos] == ',') { ++pos; continue; }
      if (text[pos] == ')') { ++pos; break; }
      return fail("expected ',' or ')'");
    }
  }
  skip();
  if (pos != text.size()) return fail("trailing characters after instance");
  return PartialInstance(std::move(cells));
}

Instance::Instance(PartialInstance p) : p_(std::move(p)) {
  if (!p_.is_full()) throw Error("instance " + p_.to_string() + " has undefined features");
}

Instance::Instance(const std::vector<bool>& bits) {
  std::vector<Cell> cells;
  cells.reserve(bits.size());
  for (bool b : bits) cells.push_back(bit_cell(b));
  p_ = PartialInstance(std::move(cells));
}

std::vector<PartialInstance> completions(const PartialInstance& e) {
  std::vector<std::size_t> bots = e.bot_set();
  std::vector<PartialInstance> out;
  out.reserve(std::size_t{1} << bots.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << bots.size()); ++mask) {
    PartialInstance c = e;
    // most significant bot first, so the output is lexicographic
    for (std::size_t k = 0; k < bots.size(); ++k)
      c[bots[k]] = bit_cell((mask >> (bots.size() - 1 - k)) & 1);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace dtfoil
