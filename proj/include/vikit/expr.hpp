#ifndef VIKIT_EXPR_HPP
#define VIKIT_EXPR_HPP

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace vikit {

// Small arithmetic language for defining operator components:
//   binary + - * /, unary -, integer powers via ^ (right associative,
//   literal exponents only, folded at parse time), abs/min/max, and
//   piecewise(cond -> expr, ..., else -> expr) with comparisons chained
//   by 'and'. Variables are x1..xn, with x, y, z as aliases for the
//   first three axes. Evaluation is total: division by zero, 0^negative
//   and non-finite intermediates raise EvalError.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class CmpOp { Lt, Le, Gt, Ge };

struct Comparison {
  ExprPtr lhs;
  CmpOp op;
  ExprPtr rhs;
};

// Conjunction of comparisons ('and' chain).
using Condition = std::vector<Comparison>;

struct Expr {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Min, Max, Piecewise };
  Kind kind;
  double number = 0.0;
  int var = 0;            // 0-based axis index
  std::string var_name;   // spelling kept for printing
  long long exponent = 0; // Pow only
  std::vector<ExprPtr> args;          // operands; for Piecewise the branches, last = else
  std::vector<Condition> conditions;  // Piecewise only, parallel to args[0..k-2]
};

namespace detail_expr {

enum class Tok {
  Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
  Comma, Arrow, Lt, Le, Gt, Ge, End
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;  // 1-based character offset
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto push = [&](Tok k, std::size_t at, std::string text) {
    out.push_back(Token{k, std::move(text), 0.0, at + 1});
  };
  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < n && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
        ++i;
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      std::string text(src.substr(start, i - start));
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size() || !std::isfinite(v))
        throw ParseError("bad number literal '" + text + "'", start + 1);
      Token t{Tok::Number, std::move(text), v, start + 1};
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      push(Tok::Ident, start, std::string(src.substr(start, i - start)));
      continue;
    }
    switch (c) {
      case '+': push(Tok::Plus, start, "+"); ++i; break;
      case '-':
        if (i + 1 < n && src[i + 1] == '>') {
          push(Tok::Arrow, start, "->");
          i += 2;
        } else {
          push(Tok::Minus, start, "-");
          ++i;
        }
        break;
      case '*': push(Tok::Star, start, "*"); ++i; break;
      case '/': push(Tok::Slash, start, "/"); ++i; break;
      case '^': push(Tok::Caret, start, "^"); ++i; break;
      case '(': push(Tok::LParen, start, "("); ++i; break;
      case ')': push(Tok::RParen, start, ")"); ++i; break;
      case ',': push(Tok::Comma, start, ","); ++i; break;
      case '<':
        if (i + 1 < n && src[i + 1] == '=') {
          push(Tok::Le, start, "<=");
          i += 2;
        } else {
          push(Tok::Lt, start, "<");
          ++i;
        }
        break;
      case '>':
        if (i + 1 < n && src[i + 1] == '=') {
          push(Tok::Ge, start, ">=");
          i += 2;
        } else {
          push(Tok::Gt, start, ">");
          ++i;
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start + 1);
    }
  }
  out.push_back(Token{Tok::End, "", 0.0, n + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int dim) : toks_(std::move(toks)), dim_(dim) {}

  ExprPtr parse() {
    ExprPtr e = expression();
    if (cur().kind != Tok::End)
      throw ParseError("unexpected trailing input '" + cur().text + "'", cur().pos);
    return e;
  }

 private:
  const Token& cur() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }
  bool accept(Tok k) {
    if (cur().kind == k) {
      ++at_;
      return true;
    }
    return false;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k))
      throw ParseError(std::string("expected ") + what + " before '" +
                           (cur().text.empty() ? "end of input" : cur().text) + "'",
                       cur().pos);
  }

  static ExprPtr make(Expr e) { return std::make_shared<Expr>(std::move(e)); }

  static ExprPtr binary(Expr::Kind k, ExprPtr l, ExprPtr r) {
    Expr e;
    e.kind = k;
    e.args = {std::move(l), std::move(r)};
    return make(std::move(e));
  }

  ExprPtr expression() { return additive(); }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    for (;;) {
      if (accept(Tok::Plus))
        e = binary(Expr::Kind::Add, e, multiplicative());
      else if (accept(Tok::Minus))
        e = binary(Expr::Kind::Sub, e, multiplicative());
      else
        return e;
    }
  }

  ExprPtr multiplicative() {
    ExprPtr e = unary();
    for (;;) {
      if (accept(Tok::Star))
        e = binary(Expr::Kind::Mul, e, unary());
      else if (accept(Tok::Slash))
        e = binary(Expr::Kind::Div, e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    if (accept(Tok::Minus)) {
      Expr e;
      e.kind = Expr::Kind::Neg;
      e.args = {unary()};
      return make(std::move(e));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept(Tok::Caret)) {
      Expr e;
      e.kind = Expr::Kind::Pow;
      e.exponent = exponent_literal();
      e.args = {std::move(base)};
      return make(std::move(e));
    }
    return base;
  }

  // Exponents are integer literals, optionally negated, right associative
  // when chained; the whole chain folds to one integer at parse time.
  long long exponent_literal() {
    const bool negate = accept(Tok::Minus);
    if (cur().kind != Tok::Number)
      throw ParseError("exponent must be an integer literal", cur().pos);
    const Token t = next();
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("exponent must be an integer literal, got '" + t.text + "'", t.pos);
    long long v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || v > 1000000000)
      throw ParseError("exponent '" + t.text + "' out of range", t.pos);
    if (accept(Tok::Caret)) {
      const long long e = exponent_literal();
      if (e < 0) throw ParseError("negative exponent inside a chained exponent", t.pos);
      long long r = 1;
      for (long long i = 0; i < e; ++i) {
        if (v != 0 && (r > 1000000000 / std::max(1ll, std::abs(v)) || std::abs(r) > 1000000000))
          throw ParseError("chained exponent overflows", t.pos);
        r *= v;
      }
      v = r;
    }
    return negate ? -v : v;
  }

  ExprPtr atom() {
    const Token t = next();
    switch (t.kind) {
      case Tok::Number: {
        Expr e;
        e.kind = Expr::Kind::Number;
        e.number = t.number;
        return make(std::move(e));
      }
      case Tok::LParen: {
        ExprPtr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return ident_atom(t);
      default:
        throw ParseError("expected a value before '" +
                             (t.text.empty() ? "end of input" : t.text) + "'",
                         t.pos);
    }
  }

  ExprPtr ident_atom(const Token& t) {
    if (t.text == "piecewise") return piecewise(t);
    if (t.text == "abs" || t.text == "min" || t.text == "max") {
      expect(Tok::LParen, "'(' after function name");
      std::vector<ExprPtr> args;
      args.push_back(expression());
      while (accept(Tok::Comma)) args.push_back(expression());
      expect(Tok::RParen, "')'");
      Expr e;
      if (t.text == "abs") {
        if (args.size() != 1) throw ParseError("abs takes exactly one argument", t.pos);
        e.kind = Expr::Kind::Abs;
      } else {
        e.kind = (t.text == "min") ? Expr::Kind::Min : Expr::Kind::Max;
      }
      e.args = std::move(args);
      return make(std::move(e));
    }
    if (t.text == "else" || t.text == "and")
      throw ParseError("keyword '" + t.text + "' is not valid here", t.pos);
    return variable(t);
  }

  ExprPtr variable(const Token& t) {
    int idx = -1;
    if (t.text == "x" && dim_ >= 1) idx = 0;
    else if (t.text == "y" && dim_ >= 2) idx = 1;
    else if (t.text == "z" && dim_ >= 3) idx = 2;
    else if (t.text.size() > 1 && t.text[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < t.text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
      if (digits) {
        const long k = std::strtol(t.text.c_str() + 1, nullptr, 10);
        if (k < 1 || k > dim_)
          throw ParseError("variable '" + t.text + "' out of range for dimension " +
                               std::to_string(dim_),
                           t.pos);
        idx = static_cast<int>(k - 1);
      }
    }
    if (idx < 0)
      throw ParseError("unknown identifier '" + t.text +
                           "' (expected x1..x" + std::to_string(dim_) +
                           ", abs, min, max or piecewise)",
                       t.pos);
    Expr e;
    e.kind = Expr::Kind::Var;
    e.var = idx;
    e.var_name = t.text;
    return make(std::move(e));
  }

  Condition condition() {
    Condition cond;
    for (;;) {
      Comparison c;
      c.lhs = additive();
      const Token t = next();
      switch (t.kind) {
        case Tok::Lt: c.op = CmpOp::Lt; break;
        case Tok::Le: c.op = CmpOp::Le; break;
        case Tok::Gt: c.op = CmpOp::Gt; break;
        case Tok::Ge: c.op = CmpOp::Ge; break;
        default:
          throw ParseError("expected a comparison operator before '" +
                               (t.text.empty() ? "end of input" : t.text) + "'",
                           t.pos);
      }
      c.rhs = additive();
      cond.push_back(std::move(c));
      if (cur().kind == Tok::Ident && cur().text == "and") {
        ++at_;
        continue;
      }
      return cond;
    }
  }

  ExprPtr piecewise(const Token& head) {
    expect(Tok::LParen, "'(' after piecewise");
    Expr e;
    e.kind = Expr::Kind::Piecewise;
    bool saw_else = false;
    for (;;) {
      if (cur().kind == Tok::Ident && cur().text == "else") {
        ++at_;
        expect(Tok::Arrow, "'->' after else");
        e.args.push_back(expression());
        saw_else = true;
        break;
      }
      e.conditions.push_back(condition());
      expect(Tok::Arrow, "'->' after condition");
      e.args.push_back(expression());
      if (cur().kind == Tok::RParen)
        throw ParseError("piecewise requires a final else branch", cur().pos);
      expect(Tok::Comma, "',' between piecewise branches");
    }
    expect(Tok::RParen, "')'");
    if (!saw_else) throw ParseError("piecewise requires a final else branch", head.pos);
    return make(std::move(e));
  }

  std::vector<Token> toks_;
  int dim_;
  std::size_t at_ = 0;
};

inline double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

// Integer power by squaring; avoids std::pow so results are reproducible
// across libm versions.
inline double ipow(double base, long long e) {
  if (e < 0) {
    if (base == 0.0) throw EvalError("zero raised to a negative power");
    return 1.0 / ipow(base, -e);
  }
  double r = 1.0;
  double b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline double eval_node(const Expr& e, const Point& p);

inline bool eval_condition(const Condition& cond, const Point& p) {
  for (const Comparison& c : cond) {
    const double l = eval_node(*c.lhs, p);
    const double r = eval_node(*c.rhs, p);
    bool ok = false;
    switch (c.op) {
      case CmpOp::Lt: ok = l < r; break;
      case CmpOp::Le: ok = l <= r; break;
      case CmpOp::Gt: ok = l > r; break;
      case CmpOp::Ge: ok = l >= r; break;
    }
    if (!ok) return false;
  }
  return true;
}

inline double eval_node(const Expr& e, const Point& p) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Var:
      if (e.var >= static_cast<int>(p.size()))
        throw DimensionError("eval: variable '" + e.var_name + "' beyond point dimension");
      return p[e.var];
    case Expr::Kind::Neg:
      return -eval_node(*e.args[0], p);
    case Expr::Kind::Add:
      return finite_or_throw(eval_node(*e.args[0], p) + eval_node(*e.args[1], p), "+");
    case Expr::Kind::Sub:
      return finite_or_throw(eval_node(*e.args[0], p) - eval_node(*e.args[1], p), "-");
    case Expr::Kind::Mul:
      return finite_or_throw(eval_node(*e.args[0], p) * eval_node(*e.args[1], p), "*");
    case Expr::Kind::Div: {
      const double num = eval_node(*e.args[0], p);
      const double den = eval_node(*e.args[1], p);
      if (den == 0.0) throw EvalError("division by zero");
      return finite_or_throw(num / den, "/");
    }
    case Expr::Kind::Pow:
      return finite_or_throw(ipow(eval_node(*e.args[0], p), e.exponent), "^");
    case Expr::Kind::Abs:
      return std::fabs(eval_node(*e.args[0], p));
    case Expr::Kind::Min: {
      double r = eval_node(*e.args[0], p);
      for (std::size_t i = 1; i < e.args.size(); ++i)
        r = std::min(r, eval_node(*e.args[i], p));
      return r;
    }
    case Expr::Kind::Max: {
      double r = eval_node(*e.args[0], p);
      for (std::size_t i = 1; i < e.args.size(); ++i)
        r = std::max(r, eval_node(*e.args[i], p));
      return r;
    }
    case Expr::Kind::Piecewise:
      // Branch conditions are evaluated in order; the first true one wins
      // and ties on boundaries go to the earlier branch.
      for (std::size_t i = 0; i < e.conditions.size(); ++i)
        if (eval_condition(e.conditions[i], p)) return eval_node(*e.args[i], p);
      return eval_node(*e.args.back(), p);
  }
  throw EvalError("corrupt expression node");
}

inline std::string format_double(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

inline void print_node(const Expr& e, std::string& out);

inline void print_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

inline void print_condition(const Condition& cond, std::string& out) {
  for (std::size_t i = 0; i < cond.size(); ++i) {
    if (i) out += " and ";
    print_node(*cond[i].lhs, out);
    switch (cond[i].op) {
      case CmpOp::Lt: out += " < "; break;
      case CmpOp::Le: out += " <= "; break;
      case CmpOp::Gt: out += " > "; break;
      case CmpOp::Ge: out += " >= "; break;
    }
    print_node(*cond[i].rhs, out);
  }
}

inline void print_node(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Number:
      out += format_double(e.number);
      return;
    case Expr::Kind::Var:
      out += e.var_name;
      return;
    case Expr::Kind::Neg:
      out += '-';
      print_child(*e.args[0], 3, out);
      return;
    case Expr::Kind::Add:
      print_child(*e.args[0], 1, out);
      out += " + ";
      print_child(*e.args[1], 2, out);
      return;
    case Expr::Kind::Sub:
      print_child(*e.args[0], 1, out);
      out += " - ";
      print_child(*e.args[1], 2, out);
      return;
    case Expr::Kind::Mul:
      print_child(*e.args[0], 2, out);
      out += "*";
      print_child(*e.args[1], 3, out);
      return;
    case Expr::Kind::Div:
      print_child(*e.args[0], 2, out);
      out += "/";
      print_child(*e.args[1], 3, out);
      return;
    case Expr::Kind::Pow:
      print_child(*e.args[0], 5, out);
      out += '^';
      out += std::to_string(e.exponent);
      return;
    case Expr::Kind::Abs:
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      out += (e.kind == Expr::Kind::Abs) ? "abs" : (e.kind == Expr::Kind::Min) ? "min" : "max";
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*e.args[i], out);
      }
      out += ')';
      return;
    }
    case Expr::Kind::Piecewise: {
      out += "piecewise(";
      for (std::size_t i = 0; i < e.conditions.size(); ++i) {
        print_condition(e.conditions[i], out);
        out += " -> ";
        print_node(*e.args[i], out);
        out += ", ";
      }
      out += "else -> ";
      print_node(*e.args.back(), out);
      out += ')';
      return;
    }
  }
}

}  // namespace detail_expr

// A parsed scalar expression over R^dim.
class Expression {
 public:
  static Expression parse(const std::string& source, int dim) {
    if (dim < 1) throw Error("expression dimension must be >= 1");
    detail_expr::Parser parser(detail_expr::tokenize(source), dim);
    return Expression(parser.parse(), dim);
  }

  double eval(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_)
      throw DimensionError("eval: point dimension " + std::to_string(p.size()) +
                           " does not match expression dimension " + std::to_string(dim_));
    return detail_expr::eval_node(*root_, p);
  }

  // Canonical text form; parsing it back yields an expression with
  // identical values everywhere.
  std::string str() const {
    std::string out;
    detail_expr::print_node(*root_, out);
    return out;
  }

  int dim() const { return dim_; }
  const Expr& root() const { return *root_; }

 private:
  Expression(ExprPtr root, int dim) : root_(std::move(root)), dim_(dim) {}
  ExprPtr root_;
  int dim_;
};

}  // namespace vikit

#endif
