#pragma once

// Scalar expressions in x and y for user-supplied coefficient fields.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | atom
//   atom   := number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | sinh | cosh | tanh | sqrt

#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>

#include "poincare/error.hpp"

namespace poincare {

enum class Func { Sin, Cos, Exp, Sinh, Cosh, Tanh, Sqrt };

inline const char* to_string(Func f) {
  static constexpr std::array<const char*, 7> names{"sin", "cos", "exp", "sinh", "cosh", "tanh", "sqrt"};
  return names[static_cast<int>(f)];
}

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  struct Number { double value; };
  struct Var { int index; };  ///< 0 = x, 1 = y
  struct Pi {};
  struct Neg { Expr arg; };
  struct Binary { char op; Expr lhs, rhs; };
  struct Call { Func f; Expr arg; };

  std::variant<Number, Var, Pi, Neg, Binary, Call> node;
};

namespace expr {

inline Expr number(double v) { return std::make_shared<ExprNode>(ExprNode{ExprNode::Number{v}}); }
inline Expr var(int i) { return std::make_shared<ExprNode>(ExprNode{ExprNode::Var{i}}); }
inline Expr pi() { return std::make_shared<ExprNode>(ExprNode{ExprNode::Pi{}}); }
inline Expr neg(Expr a) { return std::make_shared<ExprNode>(ExprNode{ExprNode::Neg{std::move(a)}}); }
inline Expr binary(char op, Expr a, Expr b) {
  return std::make_shared<ExprNode>(ExprNode{ExprNode::Binary{op, std::move(a), std::move(b)}});
}
inline Expr call(Func f, Expr a) { return std::make_shared<ExprNode>(ExprNode{ExprNode::Call{f, std::move(a)}}); }

}  // namespace expr

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = sum();
    skip_space();
    if (pos_ < src_.size()) fail("end of input", std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected, const std::string& what) const { fail_at(pos_, expected, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& expected, const std::string& what) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(line, col, expected, what + ", expected " + expected);
  }

  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      const std::string what = pos_ < src_.size() ? std::string("unexpected '") + src_[pos_] + "'" : "unexpected end of input";
      fail(std::string(1, c), what);
    }
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) e = expr::binary('+', e, product());
      else if (accept('-')) e = expr::binary('-', e, product());
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = expr::binary('*', e, unary());
      else if (accept('/')) e = expr::binary('/', e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return expr::neg(unary());
    return atom();
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Expr atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("number, identifier or '('", "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      const std::string_view id = src_.substr(start, pos_ - start);
      if (id == "x") return expr::var(0);
      if (id == "y") return expr::var(1);
      if (id == "pi") return expr::pi();
      for (int f = 0; f < 7; ++f)
        if (id == to_string(static_cast<Func>(f))) {
          expect('(');
          Expr arg = sum();
          expect(')');
          return expr::call(static_cast<Func>(f), arg);
        }
      int line = 1, col = 1;
      for (std::size_t i = 0; i < start; ++i) {
        if (src_[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw Error(ErrorCode::UnknownIdentifier, std::to_string(line) + ":" + std::to_string(col) +
                                                    ": unknown identifier '" + std::string(id) + "'");
    }
    fail("number, identifier or '('", std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at(start, "digit", "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("digit", "malformed exponent");
    }
    double v = 0.0;
    const auto r = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (r.ec != std::errc() || !std::isfinite(v)) fail_at(start, "finite number", "number out of range");
    return expr::number(v);
  }
};

inline int precedence(const Expr& e) {
  if (const auto* b = std::get_if<ExprNode::Binary>(&e->node)) return b->op == '+' || b->op == '-' ? 1 : 2;
  if (std::holds_alternative<ExprNode::Neg>(e->node)) return 3;
  return 4;
}

inline std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

/// Parses @p src. Throws SyntaxError with a 1-based position, or UnknownIdentifier.
inline Expr parse_expression(std::string_view src) { return detail::ExprParser(src).parse(); }

/// Canonical text of @p e with the fewest parentheses that keep its structure.
inline std::string print(const Expr& e) {
  using N = ExprNode;
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, N::Number>) {
          std::string s = detail::format_number(std::abs(n.value));
          return std::signbit(n.value) ? "-" + s : s;
        } else if constexpr (std::is_same_v<T, N::Var>) {
          return n.index == 0 ? "x" : "y";
        } else if constexpr (std::is_same_v<T, N::Pi>) {
          return "pi";
        } else if constexpr (std::is_same_v<T, N::Neg>) {
          const std::string a = print(n.arg);
          return detail::precedence(n.arg) < 3 ? "-(" + a + ")" : "-" + a;
        } else if constexpr (std::is_same_v<T, N::Binary>) {
          const int p = detail::precedence(e);
          std::string l = print(n.lhs), r = print(n.rhs);
          if (detail::precedence(n.lhs) < p) l = "(" + l + ")";
          if (detail::precedence(n.rhs) <= p) r = "(" + r + ")";
          return l + n.op + r;
        } else {
          return std::string(to_string(n.f)) + "(" + print(n.arg) + ")";
        }
      },
      e->node);
}

/// Structural equality; numbers compare bitwise.
inline bool equal(const Expr& a, const Expr& b) {
  using N = ExprNode;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const auto& m = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, N::Number>) {
          return std::bit_cast<std::uint64_t>(n.value) == std::bit_cast<std::uint64_t>(m.value);
        } else if constexpr (std::is_same_v<T, N::Var>) {
          return n.index == m.index;
        } else if constexpr (std::is_same_v<T, N::Pi>) {
          return true;
        } else if constexpr (std::is_same_v<T, N::Neg>) {
          return equal(n.arg, m.arg);
        } else if constexpr (std::is_same_v<T, N::Binary>) {
          return n.op == m.op && equal(n.lhs, m.lhs) && equal(n.rhs, m.rhs);
        } else {
          return n.f == m.f && equal(n.arg, m.arg);
        }
      },
      a->node);
}

namespace detail {

template <class T>
T eval_impl(const Expr& e, const T& x, const T& y) {
  using N = ExprNode;
  using std::cos, std::cosh, std::exp, std::sin, std::sinh, std::sqrt, std::tanh;
  return std::visit(
      [&](const auto& n) -> T {
        using U = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<U, N::Number>) {
          return T(n.value);
        } else if constexpr (std::is_same_v<U, N::Var>) {
          return n.index == 0 ? x : y;
        } else if constexpr (std::is_same_v<U, N::Pi>) {
          return T(std::numbers::pi);
        } else if constexpr (std::is_same_v<U, N::Neg>) {
          return -eval_impl(n.arg, x, y);
        } else if constexpr (std::is_same_v<U, N::Binary>) {
          const T a = eval_impl(n.lhs, x, y), b = eval_impl(n.rhs, x, y);
          switch (n.op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: {
              double denom;
              if constexpr (std::is_same_v<T, double>) denom = b;
              else denom = b.v;
              if (denom == 0.0) throw Error(ErrorCode::DomainError, "division by zero");
              return a / b;
            }
          }
        } else {
          const T a = eval_impl(n.arg, x, y);
          switch (n.f) {
            case Func::Sin: return sin(a);
            case Func::Cos: return cos(a);
            case Func::Exp: return exp(a);
            case Func::Sinh: return sinh(a);
            case Func::Cosh: return cosh(a);
            case Func::Tanh: return tanh(a);
            case Func::Sqrt: return sqrt(a);
          }
          return a;
        }
      },
      e->node);
}

}  // namespace detail

/// Evaluates @p e at (x, y). Throws DomainError on division by zero.
inline double evaluate(const Expr& e, double x, double y) { return detail::eval_impl<double>(e, x, y); }

/// The same for a non-builtin scalar such as Jet, with sin etc. found by lookup.
template <class T>
  requires(!std::is_arithmetic_v<T>)
T evaluate(const Expr& e, const T& x, const T& y) {
  return detail::eval_impl<T>(e, x, y);
}

/// True if @p e does not depend on x or y.
inline bool is_constant(const Expr& e) {
  using N = ExprNode;
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, N::Var>) return false;
        else if constexpr (std::is_same_v<T, N::Neg> || std::is_same_v<T, N::Call>) return is_constant(n.arg);
        else if constexpr (std::is_same_v<T, N::Binary>) return is_constant(n.lhs) && is_constant(n.rhs);
        else return true;
      },
      e->node);
}

}  // namespace poincare
