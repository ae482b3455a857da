#include "dtfoil/parser.hpp"

#include <cctype>
#include <sstream>

#include "dtfoil/catalog.hpp"
#include "dtfoil/error.hpp"
#include "dtfoil/library.hpp"

namespace dtfoil {

namespace {

enum class Tok {
  Ident,
  Const,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Arrow,
  DArrow,
  Le,
  Lt,
  Eq,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  PartialInstance value;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      int l = line_, c = col_;
      if (pos_ >= s_.size()) {
        out.push_back({Tok::End, "", {}, l, c});
        return out;
      }
      char ch = s_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t b = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                s_[pos_] == '\''))
          advance();
        out.push_back({Tok::Ident, std::string(s_.substr(b, pos_ - b)), {}, l, c});
      } else if (ch == '(' && constant_ahead()) {
        std::size_t b = pos_;
        while (pos_ < s_.size() && s_[pos_] != ')') advance();
        if (pos_ >= s_.size()) throw ParseError("unterminated constant", l, c);
        advance();
        PartialInstance e;
        try {
          e = PartialInstance::parse(s_.substr(b, pos_ - b));
        } catch (const ParseError&) {
          throw ParseError("malformed constant '" + std::string(s_.substr(b, pos_ - b)) + "'", l, c);
        }
        out.push_back({Tok::Const, std::string(s_.substr(b, pos_ - b)), std::move(e), l, c});
      } else if (s_.substr(pos_, 3) == "<->") {
        advance(3);
        out.push_back({Tok::DArrow, "<->", {}, l, c});
      } else if (s_.substr(pos_, 2) == "->") {
        advance(2);
        out.push_back({Tok::Arrow, "->", {}, l, c});
      } else if (s_.substr(pos_, 2) == "<=") {
        advance(2);
        out.push_back({Tok::Le, "<=", {}, l, c});
      } else {
        Tok k;
        switch (ch) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case '[': k = Tok::LBracket; break;
          case ']': k = Tok::RBracket; break;
          case ',': k = Tok::Comma; break;
          case '<': k = Tok::Lt; break;
          case '=': k = Tok::Eq; break;
          default:
            throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
        }
        advance();
        out.push_back({k, std::string(1, ch), {}, l, c});
      }
    }
  }

 private:
  void advance(std::size_t k = 1) {
    for (std::size_t i = 0; i < k && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool constant_ahead() const {
    std::size_t p = pos_ + 1;
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    return p < s_.size() && (s_[p] == '0' || s_[p] == '1' || s_[p] == '?' || s_[p] == ')');
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "exists" || s == "forall" || s == "in" || s == "not" || s == "and" || s == "or" ||
         s == "true" || s == "false" || s == "min";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const TemplateResolver& resolver)
      : t_(std::move(toks)), resolver_(resolver) {}

  bool at_min() const { return peek().kind == Tok::Ident && peek().text == "min"; }

  OptFormula opt() {
    expect_ident("min");
    expect(Tok::LBracket, "'['");
    OptFormula o;
    o.phi = formula();
    expect(Tok::Comma, "','");
    o.rho = formula();
    expect(Tok::RBracket, "']'");
    return o;
  }

  Formula formula() {
    Formula lhs = implication();
    while (peek().kind == Tok::DArrow) {
      next();
      lhs = Formula::iff(lhs, implication());
    }
    return lhs;
  }

  void end() {
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  const Token& next() { return t_[std::min(i_++, t_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().col);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    next();
  }
  void expect_ident(const char* word) {
    if (peek().kind != Tok::Ident || peek().text != word) fail(std::string("expected '") + word + "'");
    next();
  }
  bool accept_word(const char* word) {
    if (peek().kind == Tok::Ident && peek().text == word) {
      next();
      return true;
    }
    return false;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      next();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept_word("or")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept_word("and")) parts.push_back(unary());
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  Formula unary() {
    if (accept_word("not")) return Formula::negate(unary());
    if (peek().kind == Tok::Ident && (peek().text == "exists" || peek().text == "forall"))
      return quantifier();
    return primary();
  }

  Formula quantifier() {
    Quantifier q = next().text == "exists" ? Quantifier::Exists : Quantifier::Forall;
    std::vector<std::string> vars;
    while (peek().kind == Tok::Ident && !is_keyword(peek().text)) vars.push_back(next().text);
    if (vars.empty()) fail("expected a variable name");
    std::optional<Guard> guard;
    if (accept_word("in")) {
      if (vars.size() != 1) fail("a guarded quantifier binds exactly one variable");
      const Token& g = next();
      if (g.kind != Tok::Ident) fail("expected Node, PosLeaf or NegLeaf");
      if (g.text == "Node" || g.text == "node")
        guard = Guard::Node;
      else if (g.text == "PosLeaf" || g.text == "posleaf")
        guard = Guard::PosLeaf;
      else if (g.text == "NegLeaf" || g.text == "negleaf")
        guard = Guard::NegLeaf;
      else
        throw ParseError("unknown guard '" + g.text + "'", g.line, g.col);
    }
    expect(Tok::Comma, "',' after quantified variables");
    Formula body = formula();
    for (std::size_t k = vars.size(); k-- > 0;) body = Formula::quant(q, guard, vars[k], body);
    return body;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Const) {
      next();
      return Term::constant(t.value);
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      next();
      return Term::var(t.text);
    }
    fail("expected a variable or constant");
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (accept_word("true")) return Formula::constant(true);
    if (accept_word("false")) return Formula::constant(false);
    if (t.kind == Tok::Ident && !is_keyword(t.text) && peek(1).kind == Tok::LParen)
      return call();
    Term lhs = term();
    Tok op = peek().kind;
    if (op != Tok::Le && op != Tok::Lt && op != Tok::Eq) fail("expected '<=', '<' or '='");
    next();
    Term rhs = term();
    if (op == Tok::Le) return Formula::atom(Pred::Subset, {lhs, rhs});
    if (op == Tok::Eq) return Formula::atom(Pred::Equal, {lhs, rhs});
    return Formula::conj({Formula::atom(Pred::Subset, {lhs, rhs}),
                          Formula::negate(Formula::atom(Pred::Subset, {rhs, lhs}))});
  }

  Formula call() {
    Token name = next();
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (peek().kind != Tok::RParen) {
      args.push_back(term());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(term());
      }
    }
    expect(Tok::RParen, "')'");
    if (auto p = pred_by_name(name.text)) {
      const PredInfo& info = pred_info(*p);
      if (args.size() != info.arity)
        throw ParseError(name.text + " expects " + std::to_string(info.arity) + " arguments",
                         name.line, name.col);
      return Formula::atom(*p, std::move(args));
    }
    try {
      if (auto f = resolver_(name.text, args)) return *f;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), name.line, name.col);
    }
    throw ParseError("unknown predicate '" + name.text + "'", name.line, name.col);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  const TemplateResolver& resolver_;
};

const TemplateResolver& library_resolver() {
  static const TemplateResolver r = [](const std::string& name, const std::vector<Term>& args) {
    return expand_template(name, args);
  };
  return r;
}

Formula check_mode(const Formula& f, ParseMode mode) {
  switch (mode) {
    case ParseMode::Query: return to_query(f);
    case ParseMode::DtFoil: require_dtfoil(f); return f;
    case ParseMode::Atomic: require_atomic(f); return f;
    default: return f;
  }
}

std::string quantifier_word(Quantifier q) { return q == Quantifier::Exists ? "exists" : "forall"; }

// Precedence: quantifier 0, <-> 1, -> 2, or 3, and 4, not 5, atom 6.
int prec(const Formula& f) {
  if (f.is<ast::Quant>() || f.is<ast::Block>()) return 0;
  if (f.is<ast::Iff>()) return 1;
  if (f.is<ast::Implies>()) return 2;
  if (const auto* o = f.as<ast::Or>()) return o->children.size() >= 2 ? 3 : 6;
  if (const auto* a = f.as<ast::And>()) return a->children.size() >= 2 ? 4 : 6;
  if (f.is<ast::Not>()) return 5;
  return 6;
}

void print_to(std::ostream& os, const Formula& f, int min_prec);

void print_operand(std::ostream& os, const Formula& f, int min_prec) {
  if (prec(f) < min_prec) {
    os << '(';
    print_to(os, f, 0);
    os << ')';
  } else {
    print_to(os, f, min_prec);
  }
}

void print_to(std::ostream& os, const Formula& f, int) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const>) {
          os << (x.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, ast::Atom>) {
          if (x.pred == Pred::Subset || x.pred == Pred::Equal) {
            os << print(x.args[0]) << (x.pred == Pred::Subset ? " <= " : " = ") << print(x.args[1]);
          } else {
            os << pred_info(x.pred).name << '(';
            for (std::size_t i = 0; i < x.args.size(); ++i)
              os << (i ? ", " : "") << print(x.args[i]);
            os << ')';
          }
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          os << "not ";
          print_operand(os, x.child, 5);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          constexpr bool is_and = std::is_same_v<T, ast::And>;
          if (x.children.empty()) {
            os << (is_and ? "true" : "false");
          } else if (x.children.size() == 1) {
            print_to(os, x.children[0], 0);
          } else {
            for (std::size_t i = 0; i < x.children.size(); ++i) {
              if (i) os << (is_and ? " and " : " or ");
              print_operand(os, x.children[i], is_and ? 5 : 4);
            }
          }
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          print_operand(os, x.lhs, 3);
          os << " -> ";
          print_operand(os, x.rhs, 2);
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          print_operand(os, x.lhs, 1);
          os << " <-> ";
          print_operand(os, x.rhs, 2);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          os << quantifier_word(x.q) << ' ' << x.var;
          if (x.guard) os << " in " << guard_name(*x.guard);
          os << ", ";
          print_to(os, x.body, 0);
        } else {
          os << quantifier_word(x.q);
          for (const auto& v : x.vars) os << ' ' << v;
          os << ", ";
          print_to(os, x.body, 0);
        }
      },
      f.node());
}

}  // namespace

Formula parse_formula(std::string_view text, ParseMode mode, const TemplateResolver& resolver) {
  Parser p(Lexer(text).run(), resolver);
  if (p.at_min()) throw ParseError("min[...] is not allowed here", 1, 1);
  Formula f = p.formula();
  p.end();
  return check_mode(f, mode);
}

Formula parse_formula(std::string_view text, ParseMode mode) {
  return parse_formula(text, mode, library_resolver());
}

OptFormula parse_opt(std::string_view text) {
  Parser p(Lexer(text).run(), library_resolver());
  OptFormula o = p.opt();
  p.end();
  require_opt(o);
  return o;
}

Parsed parse(std::string_view text) {
  Parser p(Lexer(text).run(), library_resolver());
  if (p.at_min()) {
    OptFormula o = p.opt();
    p.end();
    require_opt(o);
    return o;
  }
  Formula f = p.formula();
  p.end();
  return to_query(f);
}

namespace {

std::string describe(const Formula& f) {
  std::string s = print(f);
  return s.size() > 60 ? s.substr(0, 57) + "..." : s;
}

}  // namespace

void require_dtfoil(const Formula& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Not>) {
          require_dtfoil(x.child);
        } else if constexpr (std::is_same_v<T, ast::And> || std::is_same_v<T, ast::Or>) {
          for (const Formula& c : x.children) require_dtfoil(c);
        } else if constexpr (std::is_same_v<T, ast::Implies> || std::is_same_v<T, ast::Iff>) {
          require_dtfoil(x.lhs);
          require_dtfoil(x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          if (x.guard) {
            require_dtfoil(x.body);
          } else if (!is_atomic_formula(x.body)) {
            throw WellFormednessError(
                "DT-FOIL guarded quantification",
                "unguarded quantifier over '" + x.var + "' has a non-atomic body: " + describe(f));
          }
        } else if constexpr (std::is_same_v<T, ast::Block>) {
          throw WellFormednessError("Q-DT-FOIL block placement",
                                    "quantifier block inside a DT-FOIL formula: " + describe(f));
        }
      },
      f.node());
}

void require_atomic(const Formula& f) {
  if (contains_block(f) || !is_atomic_formula(f))
    throw WellFormednessError("atomic formula",
                              "only {<=, pref} and the atomic catalog are allowed: " + describe(f));
}

void require_opt(const OptFormula& f) {
  require_dtfoil(f.phi);
  if (contains_block(f.rho) || !is_atomic_formula(f.rho))
    throw WellFormednessError("Opt-DT-FOIL atomic order",
                              "the order of min[...] must be atomic: " + describe(f.rho));
}

Formula to_query(const Formula& f) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Const> || std::is_same_v<T, ast::Atom>) {
          return f;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          return Formula::negate(to_query(x.child));
        } else if constexpr (std::is_same_v<T, ast::And>) {
          std::vector<Formula> cs;
          for (const Formula& c : x.children) cs.push_back(to_query(c));
          return Formula::conj(std::move(cs));
        } else if constexpr (std::is_same_v<T, ast::Or>) {
          std::vector<Formula> cs;
          for (const Formula& c : x.children) cs.push_back(to_query(c));
          return Formula::disj(std::move(cs));
        } else if constexpr (std::is_same_v<T, ast::Implies>) {
          return Formula::implies(to_query(x.lhs), to_query(x.rhs));
        } else if constexpr (std::is_same_v<T, ast::Iff>) {
          return Formula::iff(to_query(x.lhs), to_query(x.rhs));
        } else if constexpr (std::is_same_v<T, ast::Quant>) {
          if (x.guard) {
            require_dtfoil(f);
            return f;
          }
          std::vector<std::string> vars{x.var};
          Formula body = x.body;
          while (const auto* inner = body.template as<ast::Quant>()) {
            if (inner->guard) break;
            if (inner->q != x.q) {
              if (is_atomic_formula(body)) break;
              throw WellFormednessError("Q-DT-FOIL no quantifier alternation",
                                        "'" + quantifier_word(x.q) + " " + x.var + "' encloses '" +
                                            quantifier_word(inner->q) + " " + inner->var + "'");
            }
            vars.push_back(inner->var);
            body = inner->body;
          }
          try {
            require_dtfoil(body);
          } catch (const WellFormednessError& e) {
            throw WellFormednessError("Q-DT-FOIL no quantifier alternation",
                                      "the body of '" + quantifier_word(x.q) + " " + x.var +
                                          "' is not DT-FOIL (" + e.what() + ")");
          }
          return Formula::block(x.q, std::move(vars), body);
        } else {
          require_dtfoil(x.body);
          return f;
        }
      },
      f.node());
}

std::string print(const Term& t) { return t.is_var() ? t.name() : t.value().to_string(); }

std::string print(const Formula& f) {
  std::ostringstream os;
  print_to(os, f, 0);
  return os.str();
}

std::string print(const OptFormula& f) {
  return "min[" + print(f.phi) + ", " + print(f.rho) + "]";
}

}  // namespace dtfoil
