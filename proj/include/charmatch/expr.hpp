#pragma once

// Expression trees for test functions, with a small infix parser.
//
// Grammar (whitespace is ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?        exponent must fold to an integer
//   primary := number | 'x' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'
//   name    := exp | ln | log | sin | cos | tan | sqrt | atan | arctan | j0 | bessel_j0
// Since '^' sits below unary minus, -x^2 parses as -(x^2), and 2^3^2 = 2^9.

#include <cctype>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "charmatch/jet.hpp"
#include "charmatch/polynomial.hpp"
#include "charmatch/rational.hpp"
#include "charmatch/specfun.hpp"

namespace charmatch {

class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& what, std::size_t pos)
      : std::invalid_argument("parse error at " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

template <class S>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};

class Expr {
 public:
  enum class Op { constant, variable, add, sub, mul, div, neg, pow, exp, log, sin, cos, tan, sqrt, atan, j0 };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = v;
    if (std::isfinite(v)) n->exact = Rational(v);  // binary doubles are exact rationals
    return Expr(n);
  }
  static Expr constant(const Rational& r) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = to_double(r);
    n->exact = r;
    return Expr(n);
  }
  /// A constant with no exact value (pi, e).
  static Expr irrational(double v, std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = v;
    n->name = std::move(name);
    return Expr(n);
  }
  static Expr variable() {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    return Expr(n);
  }
  static Expr unary(Op op, const Expr& a) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = a.node_;
    return Expr(n);
  }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return Expr(n);
  }
  static Expr power(const Expr& a, int k) {
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->lhs = a.node_;
    n->exponent = k;
    return Expr(n);
  }

  static Expr parse(const std::string& text);

  Op op() const { return node_->op; }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::div, a, b); }
  friend Expr operator-(const Expr& a) { return unary(Op::neg, a); }

  /// f(g(x)): every occurrence of x is replaced by `inner`.
  Expr substitute(const Expr& inner) const { return Expr(subst(node_, inner.node_)); }

  /// Evaluates at a double (NaN outside the domain) or at a jet of x
  /// (throws evaluation_error naming the primitive).
  template <class S>
  S evaluate(const S& x) const {
    return eval(*node_, x);
  }
  double operator()(double x) const { return evaluate(x); }

  template <class T>
  Jet<T> jet(const T& x0, int order) const {
    return evaluate(Jet<T>::variable(x0, order));
  }

  /// Exact polynomial form when the tree is a polynomial with rational coefficients.
  std::optional<Polynomial<Rational>> to_polynomial() const { return poly(*node_); }

  std::string str() const {
    std::ostringstream os;
    print(os, *node_);
    return os.str();
  }

 private:
  struct Node {
    Op op = Op::constant;
    double value = 0.0;
    std::optional<Rational> exact;
    std::string name;
    int exponent = 0;
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static NodePtr subst(const NodePtr& n, const NodePtr& inner) {
    if (n->op == Op::variable) return inner;
    if (!n->lhs) return n;
    auto copy = std::make_shared<Node>(*n);
    copy->lhs = subst(n->lhs, inner);
    if (n->rhs) copy->rhs = subst(n->rhs, inner);
    return copy;
  }

  static const char* fname(Op op) {
    switch (op) {
      case Op::exp: return "exp";
      case Op::log: return "ln";
      case Op::sin: return "sin";
      case Op::cos: return "cos";
      case Op::tan: return "tan";
      case Op::sqrt: return "sqrt";
      case Op::atan: return "atan";
      case Op::j0: return "j0";
      default: return "?";
    }
  }

  template <class S>
  static S make_constant(const Node& n, const S& x) {
    if constexpr (is_jet<S>::value) {
      using T = typename S::value_type;
      if constexpr (is_exact_v<T>) {
        if (!n.exact) throw inexact_error(n.name.empty() ? "constant" : n.name);
        return S::constant(*n.exact, x.center(), x.order());
      } else {
        return S::constant(n.value, x.center(), x.order());
      }
    } else {
      (void)x;
      return n.value;
    }
  }

  template <class S>
  static S eval(const Node& n, const S& x) {
    using std::atan;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tan;
    switch (n.op) {
      case Op::constant: return make_constant(n, x);
      case Op::variable: return x;
      case Op::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
      case Op::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
      case Op::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
      case Op::div: {
        S num = eval(*n.lhs, x);
        S den = eval(*n.rhs, x);
        if constexpr (!is_jet<S>::value) {
          if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
        }
        return num / den;
      }
      case Op::neg: return -eval(*n.lhs, x);
      case Op::pow: {
        S base = eval(*n.lhs, x);
        if constexpr (is_jet<S>::value) {
          return pow(base, n.exponent);
        } else {
          return std::pow(base, n.exponent);
        }
      }
      case Op::j0: {
        S u = eval(*n.lhs, x);
        return bessel_j(0u, u);
      }
      default: break;
    }
    S u = eval(*n.lhs, x);
    if constexpr (is_jet<S>::value) {
      try {
        switch (n.op) {
          case Op::exp: return exp(u);
          case Op::log: return log(u);
          case Op::sin: return sin(u);
          case Op::cos: return cos(u);
          case Op::tan: return tan(u);
          case Op::sqrt: return sqrt(u);
          case Op::atan: return atan(u);
          default: break;
        }
      } catch (const evaluation_error&) {
        throw;
      } catch (const inexact_error&) {
        throw;
      } catch (const std::domain_error& e) {
        throw evaluation_error(fname(n.op), e.what());
      }
    } else {
      switch (n.op) {
        case Op::exp: return exp(u);
        case Op::log: return u > 0 ? log(u) : std::numeric_limits<double>::quiet_NaN();
        case Op::sin: return sin(u);
        case Op::cos: return cos(u);
        case Op::tan: return tan(u);
        case Op::sqrt: return u >= 0 ? sqrt(u) : std::numeric_limits<double>::quiet_NaN();
        case Op::atan: return atan(u);
        default: break;
      }
    }
    throw std::logic_error("Expr: unhandled node");
  }

  static std::optional<Polynomial<Rational>> poly(const Node& n) {
    switch (n.op) {
      case Op::constant:
        if (!n.exact) return std::nullopt;
        return Polynomial<Rational>({*n.exact});
      case Op::variable: return Polynomial<Rational>({Rational(0), Rational(1)});
      case Op::add:
      case Op::sub:
      case Op::mul: {
        auto a = poly(*n.lhs), b = poly(*n.rhs);
        if (!a || !b) return std::nullopt;
        if (n.op == Op::add) return *a + *b;
        if (n.op == Op::sub) return *a - *b;
        return *a * *b;
      }
      case Op::div: {
        auto a = poly(*n.lhs), b = poly(*n.rhs);
        if (!a || !b || b->degree() != 0 || (*b)[0] == 0) return std::nullopt;
        return *a * Rational(1 / (*b)[0]);
      }
      case Op::neg: {
        auto a = poly(*n.lhs);
        if (!a) return std::nullopt;
        return *a * Rational(-1);
      }
      case Op::pow: {
        auto a = poly(*n.lhs);
        if (!a) return std::nullopt;
        if (n.exponent < 0) {
          if (a->degree() != 0 || (*a)[0] == 0) return std::nullopt;
          return Polynomial<Rational>({gpow((*a)[0], n.exponent)});
        }
        Polynomial<Rational> r({Rational(1)});
        for (int i = 0; i < n.exponent; ++i) r = r * *a;
        return r;
      }
      default: return std::nullopt;
    }
  }

  static void print(std::ostream& os, const Node& n) {
    switch (n.op) {
      case Op::constant:
        if (!n.name.empty()) {
          os << n.name;
        } else if (n.exact) {
          os << n.exact->str();
        } else {
          os << n.value;
        }
        return;
      case Op::variable: os << 'x'; return;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div: {
        const char sym = n.op == Op::add ? '+' : n.op == Op::sub ? '-' : n.op == Op::mul ? '*' : '/';
        os << '(';
        print(os, *n.lhs);
        os << ' ' << sym << ' ';
        print(os, *n.rhs);
        os << ')';
        return;
      }
      case Op::neg:
        os << "(-";
        print(os, *n.lhs);
        os << ')';
        return;
      case Op::pow:
        os << '(';
        print(os, *n.lhs);
        os << ")^" << n.exponent;
        return;
      default:
        os << fname(n.op) << '(';
        print(os, *n.lhs);
        os << ')';
    }
  }

  NodePtr node_;

  friend class Parser;
};

class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (i_ != s_.size()) throw parse_error(std::string("unexpected '") + s_[i_] + "'", i_);
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw parse_error(std::string("expected '") + c + "'", i_);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    const std::size_t at = i_;
    Expr ex = unary();
    auto p = ex.to_polynomial();
    if (!p || p->degree() != 0) throw parse_error("exponent must be an integer constant", at);
    const Rational k = (*p)[0];
    if (boost::multiprecision::denominator(k) != 1 || abs(k) > 4096) {
      throw parse_error("exponent must be an integer constant", at);
    }
    return Expr::power(base, static_cast<int>(boost::multiprecision::numerator(k)));
  }
  Expr primary() {
    skip();
    if (i_ >= s_.size()) throw parse_error("unexpected end of input", i_);
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string name = s_.substr(start, i_ - start);
      if (name == "x") return Expr::variable();
      if (name == "pi") return Expr::irrational(M_PI, "pi");
      if (name == "e") return Expr::irrational(std::exp(1.0), "e");
      Expr::Op op;
      if (name == "exp") {
        op = Expr::Op::exp;
      } else if (name == "ln" || name == "log") {
        op = Expr::Op::log;
      } else if (name == "sin") {
        op = Expr::Op::sin;
      } else if (name == "cos") {
        op = Expr::Op::cos;
      } else if (name == "tan") {
        op = Expr::Op::tan;
      } else if (name == "sqrt") {
        op = Expr::Op::sqrt;
      } else if (name == "atan" || name == "arctan") {
        op = Expr::Op::atan;
      } else if (name == "j0" || name == "bessel_j0") {
        op = Expr::Op::j0;
      } else {
        throw parse_error("unknown identifier '" + name + "'", start);
      }
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::unary(op, arg);
    }
    throw parse_error(std::string("unexpected '") + c + "'", i_);
  }
  Expr number() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
    }
    try {
      return Expr::constant(rational_from_decimal(s_.substr(start, i_ - start)));
    } catch (const std::invalid_argument&) {
      throw parse_error("malformed number", start);
    }
  }

  std::string s_;
  std::size_t i_ = 0;
};

inline Expr Expr::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace charmatch
