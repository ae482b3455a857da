#include "dtfoil/cnf.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "dtfoil/error.hpp"

namespace dtfoil {

void write_dimacs(const Cnf& cnf, std::ostream& os) {
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const Clause& c : cnf.clauses) {
    for (Lit l : c) os << l << ' ';
    os << "0\n";
  }
}

Cnf read_dimacs(std::istream& is) {
  Cnf cnf;
  std::string line;
  bool header = false;
  Clause cur;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      std::size_t m = 0;
      if (!(ls >> p >> fmt >> cnf.num_vars >> m) || fmt != "cnf") throw Error("malformed DIMACS header");
      header = true;
      continue;
    }
    if (!header) throw Error("DIMACS clause before header");
    long long v;
    while (ls >> v) {
      if (v == 0) {
        cnf.clauses.push_back(std::move(cur));
        cur.clear();
      } else {
        if (std::llabs(v) > cnf.num_vars) throw Error("DIMACS literal out of range");
        cur.push_back(static_cast<Lit>(v));
      }
    }
  }
  if (!cur.empty()) throw Error("unterminated DIMACS clause");
  return cnf;
}

CnfBuilder::CnfBuilder(std::size_t dimension) : n_(dimension) {}

void CnfBuilder::register_var(const std::string& name) {
  if (base_.count(name)) return;
  if (aux_started_) throw InternalError("formula variable '" + name + "' registered after auxiliaries");
  base_[name] = next_;
  order_.push_back(name);
  for (std::size_t i = 0; i < n_; ++i) {
    Lit v0 = next_, v1 = next_ + 1, vb = next_ + 2;
    consistency_.push_back({vb, v0, v1});
    consistency_.push_back({-v0, -v1});
    consistency_.push_back({-v0, -vb});
    consistency_.push_back({-v1, -vb});
    next_ += 3;
  }
}

std::string CnfBuilder::constant_name(const PartialInstance& e) { return "#" + e.to_string(); }

std::string CnfBuilder::register_constant(const PartialInstance& e) {
  if (e.dimension() != n_) throw DimensionMismatch(n_, e.dimension());
  std::string name = constant_name(e);
  if (base_.count(name)) return name;
  register_var(name);
  for (std::size_t i = 0; i < n_; ++i) {
    for (Cell s : {Cell::Zero, Cell::One, Cell::Bot}) fixed_[cell(name, i, s)] = e[i] == s;
    consistency_.push_back({cell(name, i, e[i])});
  }
  return name;
}

Lit CnfBuilder::cell(const std::string& name, std::size_t i, Cell s) const {
  auto it = base_.find(name);
  if (it == base_.end()) throw Error("unregistered variable '" + name + "'");
  if (i >= n_) throw Error("feature index out of range");
  return it->second + static_cast<int>(3 * i) + static_cast<int>(s);
}

Lit CnfBuilder::new_aux() {
  aux_started_ = true;
  return next_++;
}

Lit CnfBuilder::true_lit() {
  if (!true_) {
    true_ = new_aux();
    fixed_[true_] = true;
    consistency_.push_back({true_});
  }
  return true_;
}

std::optional<bool> CnfBuilder::fixed(Lit l) const {
  auto it = fixed_.find(std::abs(l));
  if (it == fixed_.end()) return std::nullopt;
  return l > 0 ? it->second : !it->second;
}

Cnf CnfBuilder::to_cnf() const {
  Cnf cnf;
  cnf.num_vars = num_vars();
  cnf.clauses = consistency_;
  cnf.clauses.insert(cnf.clauses.end(), semantic_.begin(), semantic_.end());
  return cnf;
}

void CnfBuilder::write_dimacs(std::ostream& os, bool comments) const {
  if (comments) {
    for (const auto& name : order_)
      for (std::size_t i = 0; i < n_; ++i)
        for (Cell s : {Cell::Zero, Cell::One, Cell::Bot})
          os << "c var " << name << ' ' << i + 1 << ' ' << cell_char(s) << ' ' << cell(name, i, s)
             << '\n';
  }
  dtfoil::write_dimacs(to_cnf(), os);
}

std::vector<bool> read_model(std::string_view text, int num_vars) {
  std::vector<bool> value(static_cast<std::size_t>(num_vars) + 1, false);
  std::vector<bool> seen(static_cast<std::size_t>(num_vars) + 1, false);
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == 's') continue;
    std::istringstream ls(line);
    if (line[0] == 'v') {
      char v;
      ls >> v;
    }
    std::string tok;
    while (ls >> tok) {
      long long lit;
      try {
        std::size_t used = 0;
        lit = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error("malformed model line: '" + line + "'");
      }
      if (lit == 0) continue;
      long long var = std::llabs(lit);
      if (var > num_vars) continue;
      value[static_cast<std::size_t>(var)] = lit > 0;
      seen[static_cast<std::size_t>(var)] = true;
    }
  }
  for (int v = 1; v <= num_vars; ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw Error("model is missing variable " + std::to_string(v));
  return value;
}

}  // namespace dtfoil
