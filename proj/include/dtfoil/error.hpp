#pragma once

#include <stdexcept>
#include <string>

namespace dtfoil {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

class InvalidTree : public Error {
 public:
  explicit InvalidTree(const std::string& what) : Error("invalid tree: " + what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// A syntactically valid formula that violates one of the logic's formation
// rules (guarded quantification, no alternation, atomic rho, ...).
class WellFormednessError : public Error {
 public:
  WellFormednessError(const std::string& rule, const std::string& detail)
      : Error("ill-formed formula (" + rule + "): " + detail), rule_(rule) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

class OracleBoundExceeded : public Error {
 public:
  OracleBoundExceeded(std::size_t dim, std::size_t bound)
      : Error("oracle bound exceeded: dimension " + std::to_string(dim) + " > " +
              std::to_string(bound)) {}
};

class UnsupportedPattern : public Error {
 public:
  explicit UnsupportedPattern(const std::string& what)
      : Error("atomic pattern not in catalog: " + what) {}
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class IterationGuardExceeded : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

}  // namespace dtfoil
