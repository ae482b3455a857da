#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace dtfoil {

// One feature value of a partial instance. Bot marks an undefined feature.
enum class Cell : std::uint8_t { Zero = 0, One = 1, Bot = 2 };

inline char cell_char(Cell c) {
  switch (c) {
    case Cell::Zero: return '0';
    case Cell::One: return '1';
    default: return '?';
  }
}

inline Cell bit_cell(bool b) { return b ? Cell::One : Cell::Zero; }

// A vector over {0,1,⊥}. Features are 0-indexed here; the text and JSON
// boundaries use 1-indexed feature labels.
class PartialInstance {
 public:
  PartialInstance() = default;
  explicit PartialInstance(std::size_t dimension, Cell fill = Cell::Bot)
      : cells_(dimension, fill) {}
  explicit PartialInstance(std::vector<Cell> cells) : cells_(std::move(cells)) {}
  PartialInstance(std::initializer_list<Cell> cells) : cells_(cells) {}

  static PartialInstance all_bot(std::size_t n) { return PartialInstance(n, Cell::Bot); }

  // Accepts "(1,0,?,1)", with optional whitespace; "()" is dimension 0.
  // Throws ParseError on malformed text.
  static PartialInstance parse(std::string_view text);

  std::size_t dimension() const { return cells_.size(); }
  Cell operator[](std::size_t i) const { return cells_[i]; }
  Cell& operator[](std::size_t i) { return cells_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }

  bool defined(std::size_t i) const { return cells_[i] != Cell::Bot; }
  std::size_t bot_count() const;
  std::vector<std::size_t> bot_set() const;
  bool is_full() const { return bot_count() == 0; }

  std::string to_string() const;

  friend bool operator==(const PartialInstance&, const PartialInstance&) = default;
  friend auto operator<=>(const PartialInstance& a, const PartialInstance& b) {
    return a.cells_ <=> b.cells_;
  }

 private:
  std::vector<Cell> cells_;
};

// Full instance: a partial instance whose bot set is empty. Kept as a thin
// checked wrapper so APIs that need completeness can say so.
class Instance {
 public:
  explicit Instance(PartialInstance p);
  explicit Instance(const std::vector<bool>& bits);
  const PartialInstance& partial() const { return p_; }
  std::size_t dimension() const { return p_.dimension(); }
  bool bit(std::size_t i) const { return p_[i] == Cell::One; }

 private:
  PartialInstance p_;
};

struct PartialInstanceHash {
  std::size_t operator()(const PartialInstance& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Cell c : e.cells()) {
      h ^= static_cast<std::size_t>(c) + 1;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Completions of e: every full instance it subsumes, in lexicographic order.
std::vector<PartialInstance> completions(const PartialInstance& e);

}  // namespace dtfoil
