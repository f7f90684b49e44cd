#pragma once
// Immutable expression trees over a real variable x and a natural parameter n.
//
// Grammar accepted by parse():
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?          right-associative exponent
//   unary  := '-' unary | atom
//   atom   := number | 'x' | 'n' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | log | abs
//
// Note the exponent binds to a parsed unary, so "-x^2" is (-x)^2.
//
// Integer literals are kept as exact rationals; a quotient of two exact
// constants folds to an exact rational at parse time, so (1/2)^n carries the
// constant 1/2, not a division node. Decimal literals stay IEEE doubles.
//
// Polynomials produced by bernstein_approx are stored in Bernstein
// control-point form (a dedicated leaf) rather than expanded into +/* trees:
// binomial weights overflow doubles near degree 1030, while the control-point
// form evaluates stably at degree 2^14.

#include <cmath>
#include <charconv>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace extrafun {

// ---------------------------------------------------------------- numbers --

// Exact rational when den() != 0, otherwise a plain double. Arithmetic stays
// exact while numerator and denominator fit comfortably in 64 bits and falls
// back to the same double computation eval() would perform.
class number {
 public:
  number() : num_(0), den_(1), dbl_(0) {}

  static number rational(long long num, long long den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = gcd_ll(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    number r;
    r.num_ = num; r.den_ = den; r.dbl_ = 0;
    return r;
  }
  static number integer(long long v) { return rational(v, 1); }
  static number real(double v) {
    number r;
    r.num_ = 0; r.den_ = 0; r.dbl_ = v;
    return r;
  }

  bool exact() const { return den_ != 0; }
  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const { return den_ ? static_cast<double>(num_) / static_cast<double>(den_) : dbl_; }

  bool is_zero() const { return exact() ? num_ == 0 : dbl_ == 0.0; }
  bool is_one() const { return exact() ? (num_ == 1 && den_ == 1) : dbl_ == 1.0; }
  bool is_integer() const {
    if (exact()) return den_ == 1;
    return std::isfinite(dbl_) && std::floor(dbl_) == dbl_;
  }

  bool operator==(const number& o) const {
    if (exact() != o.exact()) return false;
    if (exact()) return num_ == o.num_ && den_ == o.den_;
    return dbl_ == o.dbl_;
  }

  number negated() const {
    return exact() ? rational(-num_, den_) : real(-dbl_);
  }
  number abs_value() const {
    return exact() ? rational(num_ < 0 ? -num_ : num_, den_) : real(std::fabs(dbl_));
  }

  // Binary ops: exact result when both sides are exact and nothing overflows,
  // otherwise the double the evaluator would have produced.
  static number add(const number& a, const number& b) { return combine(a, b, '+'); }
  static number sub(const number& a, const number& b) { return combine(a, b, '-'); }
  static number mul(const number& a, const number& b) { return combine(a, b, '*'); }
  // Quotient; caller must reject a zero divisor first.
  static number div(const number& a, const number& b) { return combine(a, b, '/'); }

  // a^k for integer k, |k| <= 64. Exact when representable.
  static std::optional<number> pow_int(const number& a, long long k) {
    if (!a.exact() || k < -64 || k > 64) return std::nullopt;
    if (k == 0) return integer(1);
    long long n = a.num_, d = a.den_;
    if (k < 0) {
      if (n == 0) return std::nullopt;
      std::swap(n, d);
      if (d < 0) { d = -d; n = -n; }
      k = -k;
    }
    __int128 rn = 1, rd = 1;
    for (long long i = 0; i < k; ++i) {
      rn *= n; rd *= d;
      if (rn > kLimit || rn < -kLimit || rd > kLimit) return std::nullopt;
    }
    return rational(static_cast<long long>(rn), static_cast<long long>(rd));
  }

 private:
  static constexpr __int128 kLimit = static_cast<__int128>(1) << 62;

  static long long gcd_ll(long long a, long long b) {
    while (b) { long long t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }

  static std::optional<number> exact_combine(const number& a, const number& b, char op) {
    __int128 n, d;
    switch (op) {
      case '+': n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_; d = (__int128)a.den_ * b.den_; break;
      case '-': n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_; d = (__int128)a.den_ * b.den_; break;
      case '*': n = (__int128)a.num_ * b.num_; d = (__int128)a.den_ * b.den_; break;
      default:  n = (__int128)a.num_ * b.den_; d = (__int128)a.den_ * b.num_;
                if (d == 0) return std::nullopt;
                if (d < 0) { n = -n; d = -d; }
                break;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > kLimit || n < -kLimit || d > kLimit) return std::nullopt;
    return rational(static_cast<long long>(n), static_cast<long long>(d));
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }

  static number combine(const number& a, const number& b, char op) {
    if (a.exact() && b.exact()) {
      if (auto r = exact_combine(a, b, op)) return *r;
    }
    double x = a.value(), y = b.value();
    switch (op) {
      case '+': return real(x + y);
      case '-': return real(x - y);
      case '*': return real(x * y);
      default:  return real(x / y);
    }
  }

  long long num_, den_;  // den_ == 0 marks the double alternative
  double dbl_;
};

// ------------------------------------------------------------------- trees --

enum class expr_kind {
  constant, var_x, var_n,
  neg, add, sub, mul, div, pow,
  sin, cos, exp, log, abs,
  bernstein,
};

// Bernstein control-point polynomial on [lo, hi]; degree = coeffs.size() - 1.
// Value at x: sum of coeffs[k] * C(d,k) t^k (1-t)^(d-k), t = (x-lo)/(hi-lo).
struct bern_data {
  double lo, hi;
  std::vector<double> coeffs;
};

class expr {
  struct node;
  using node_ptr = std::shared_ptr<const node>;

 public:
  expr() : n_(shared_leaf(expr_kind::constant, number::integer(0))) {}

  expr_kind kind() const { return n_->k; }
  const number& value() const { return n_->val; }         // constant only
  expr left() const { return expr(n_->a); }               // first child
  expr right() const { return expr(n_->b); }              // second child
  const bern_data& bern() const { return *n_->bd; }       // bernstein only
  bool has_left() const { return n_->a != nullptr; }
  bool has_right() const { return n_->b != nullptr; }

  static expr make_const(number v) { return expr(shared_leaf(expr_kind::constant, std::move(v))); }
  static expr make_leaf(expr_kind k) { return expr(shared_leaf(k, number())); }
  static expr make_unary(expr_kind k, expr a) {
    auto n = std::make_shared<node>();
    n->k = k; n->a = std::move(a.n_);
    return expr(node_ptr(std::move(n)));
  }
  static expr make_binary(expr_kind k, expr a, expr b) {
    auto n = std::make_shared<node>();
    n->k = k; n->a = std::move(a.n_); n->b = std::move(b.n_);
    return expr(node_ptr(std::move(n)));
  }
  static expr make_bernstein(double lo, double hi, std::vector<double> coeffs) {
    if (!(lo < hi)) throw shape_error("bernstein interval requires lo < hi");
    if (coeffs.empty()) throw shape_error("bernstein polynomial needs at least one coefficient");
    auto n = std::make_shared<node>();
    n->k = expr_kind::bernstein;
    n->bd = std::make_shared<bern_data>(bern_data{lo, hi, std::move(coeffs)});
    return expr(node_ptr(std::move(n)));
  }

 private:
  struct node {
    expr_kind k = expr_kind::constant;
    number val;
    node_ptr a, b;
    std::shared_ptr<const bern_data> bd;
  };

  explicit expr(node_ptr n) : n_(std::move(n)) {}

  static node_ptr shared_leaf(expr_kind k, number v) {
    auto n = std::make_shared<node>();
    n->k = k; n->val = std::move(v);
    return n;
  }

  node_ptr n_;
};

inline expr constant(number v) { return expr::make_const(std::move(v)); }
inline expr constant(long long v) { return expr::make_const(number::integer(v)); }
inline expr constant(double v) { return expr::make_const(number::real(v)); }
inline expr rational_const(long long num, long long den) { return expr::make_const(number::rational(num, den)); }
inline expr var_x() { return expr::make_leaf(expr_kind::var_x); }
inline expr var_n() { return expr::make_leaf(expr_kind::var_n); }
inline expr neg(expr a) { return expr::make_unary(expr_kind::neg, std::move(a)); }
inline expr add(expr a, expr b) { return expr::make_binary(expr_kind::add, std::move(a), std::move(b)); }
inline expr sub(expr a, expr b) { return expr::make_binary(expr_kind::sub, std::move(a), std::move(b)); }
inline expr mul(expr a, expr b) { return expr::make_binary(expr_kind::mul, std::move(a), std::move(b)); }
inline expr div(expr a, expr b) { return expr::make_binary(expr_kind::div, std::move(a), std::move(b)); }
inline expr pow(expr a, expr b) { return expr::make_binary(expr_kind::pow, std::move(a), std::move(b)); }
inline expr sin(expr a) { return expr::make_unary(expr_kind::sin, std::move(a)); }
inline expr cos(expr a) { return expr::make_unary(expr_kind::cos, std::move(a)); }
inline expr exp(expr a) { return expr::make_unary(expr_kind::exp, std::move(a)); }
inline expr log(expr a) { return expr::make_unary(expr_kind::log, std::move(a)); }
inline expr abs(expr a) { return expr::make_unary(expr_kind::abs, std::move(a)); }

inline expr operator-(expr a) { return neg(std::move(a)); }
inline expr operator+(expr a, expr b) { return add(std::move(a), std::move(b)); }
inline expr operator-(expr a, expr b) { return sub(std::move(a), std::move(b)); }
inline expr operator*(expr a, expr b) { return mul(std::move(a), std::move(b)); }
inline expr operator/(expr a, expr b) { return div(std::move(a), std::move(b)); }

// ------------------------------------------------------------- inspection --

inline bool identical(const expr& a, const expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case expr_kind::constant: return a.value() == b.value();
    case expr_kind::var_x:
    case expr_kind::var_n: return true;
    case expr_kind::bernstein: {
      const bern_data& x = a.bern();
      const bern_data& y = b.bern();
      return x.lo == y.lo && x.hi == y.hi && x.coeffs == y.coeffs;
    }
    case expr_kind::neg:
    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs:
      return identical(a.left(), b.left());
    default:
      return identical(a.left(), b.left()) && identical(a.right(), b.right());
  }
}

inline bool contains_x(const expr& e) {
  switch (e.kind()) {
    case expr_kind::var_x: return true;
    case expr_kind::var_n:
    case expr_kind::constant: return false;
    case expr_kind::bernstein: return e.bern().coeffs.size() > 1;
    case expr_kind::neg:
    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs:
      return contains_x(e.left());
    default:
      return contains_x(e.left()) || contains_x(e.right());
  }
}

inline bool contains_n(const expr& e) {
  switch (e.kind()) {
    case expr_kind::var_n: return true;
    case expr_kind::var_x:
    case expr_kind::constant:
    case expr_kind::bernstein: return false;
    case expr_kind::neg:
    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs:
      return contains_n(e.left());
    default:
      return contains_n(e.left()) || contains_n(e.right());
  }
}

inline bool is_const_value(const expr& e, long long v) {
  return e.kind() == expr_kind::constant && e.value().exact() &&
         e.value().num() == v && e.value().den() == 1;
}

// Replace every occurrence of n by the integer i.
inline expr substitute_n(const expr& e, long long i) {
  switch (e.kind()) {
    case expr_kind::var_n: return constant(i);
    case expr_kind::var_x:
    case expr_kind::constant:
    case expr_kind::bernstein:
      return e;
    case expr_kind::neg:
    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs: {
      expr a = substitute_n(e.left(), i);
      if (identical(a, e.left())) return e;
      return expr::make_unary(e.kind(), std::move(a));
    }
    default: {
      expr a = substitute_n(e.left(), i);
      expr b = substitute_n(e.right(), i);
      if (identical(a, e.left()) && identical(b, e.right())) return e;
      return expr::make_binary(e.kind(), std::move(a), std::move(b));
    }
  }
}

// ------------------------------------------------------------- evaluation --

namespace detail {

// Bernstein value via the weight recurrence started at the basis mode. Inside
// [0,1] the weights decay geometrically away from the mode, so the walk stops
// after O(sqrt(d)) steps; normalizing by the accumulated weight mass cancels
// the lgamma rounding in the seed term.
inline double eval_bernstein(const bern_data& bd, double x) {
  const std::vector<double>& c = bd.coeffs;
  const long long d = static_cast<long long>(c.size()) - 1;
  if (d == 0) return c[0];
  const double t = (x - bd.lo) / (bd.hi - bd.lo);
  if (t == 0.0) return c[0];
  if (t == 1.0) return c[static_cast<std::size_t>(d)];

  if (t > 0.0 && t < 1.0) {
    long long k0 = static_cast<long long>(std::floor(t * static_cast<double>(d + 1)));
    if (k0 < 0) k0 = 0;
    if (k0 > d) k0 = d;
    const double logw0 = std::lgamma(static_cast<double>(d + 1)) -
                         std::lgamma(static_cast<double>(k0 + 1)) -
                         std::lgamma(static_cast<double>(d - k0 + 1)) +
                         static_cast<double>(k0) * std::log(t) +
                         static_cast<double>(d - k0) * std::log1p(-t);
    const double w0 = std::exp(logw0);
    const double ratio = t / (1.0 - t);
    const double cutoff = 1e-18;

    double mass = w0, acc = w0 * c[static_cast<std::size_t>(k0)];
    double w = w0;
    for (long long k = k0; k < d; ++k) {
      w *= ratio * static_cast<double>(d - k) / static_cast<double>(k + 1);
      if (!(w > cutoff * w0)) break;
      mass += w;
      acc += w * c[static_cast<std::size_t>(k + 1)];
    }
    w = w0;
    for (long long k = k0; k > 0; --k) {
      w *= static_cast<double>(k) / (ratio * static_cast<double>(d - k + 1));
      if (!(w > cutoff * w0)) break;
      mass += w;
      acc += w * c[static_cast<std::size_t>(k - 1)];
    }
    return acc / mass;
  }

  // Outside the construction interval: de Casteljau. Exact algorithm, O(d^2);
  // only small degrees are expected here.
  std::vector<double> v = c;
  for (std::size_t r = v.size() - 1; r > 0; --r)
    for (std::size_t k = 0; k < r; ++k)
      v[k] = (1.0 - t) * v[k] + t * v[k + 1];
  return v[0];
}

}  // namespace detail

// Evaluate at real x with the parameter fixed to the natural number n.
inline double eval(const expr& e, double x, long long n) {
  if (n < 1) throw shape_error("parameter n must be a natural number (n >= 1)");
  switch (e.kind()) {
    case expr_kind::constant: return e.value().value();
    case expr_kind::var_x: return x;
    case expr_kind::var_n: return static_cast<double>(n);
    case expr_kind::bernstein: return detail::eval_bernstein(e.bern(), x);
    case expr_kind::neg: return -eval(e.left(), x, n);
    case expr_kind::add: return eval(e.left(), x, n) + eval(e.right(), x, n);
    case expr_kind::sub: return eval(e.left(), x, n) - eval(e.right(), x, n);
    case expr_kind::mul: return eval(e.left(), x, n) * eval(e.right(), x, n);
    case expr_kind::div: {
      double num = eval(e.left(), x, n);
      double den = eval(e.right(), x, n);
      if (den == 0.0) throw domain_error("division by zero");
      return num / den;
    }
    case expr_kind::pow: {
      double b = eval(e.left(), x, n);
      double p = eval(e.right(), x, n);
      if (b == 0.0 && p < 0.0) throw domain_error("zero raised to a negative power");
      if (b < 0.0 && std::floor(p) != p)
        throw domain_error("negative base with non-integer exponent");
      return std::pow(b, p);
    }
    case expr_kind::abs: return std::fabs(eval(e.left(), x, n));
    case expr_kind::sin: return std::sin(eval(e.left(), x, n));
    case expr_kind::cos: return std::cos(eval(e.left(), x, n));
    case expr_kind::exp: return std::exp(eval(e.left(), x, n));
    case expr_kind::log: {
      double v = eval(e.left(), x, n);
      if (v <= 0.0) throw domain_error("log of a non-positive value");
      return std::log(v);
    }
    default: throw error("eval: unknown node");
  }
}

// --------------------------------------------------------------- printing --

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Printing precedence levels: additive 1, multiplicative 2, pow 3, unary
// minus 4, atom 5. A pow base must be strictly tighter than pow itself
// (the grammar takes a unary there); its exponent accepts pow again.
inline int print_prec(const expr& e) {
  switch (e.kind()) {
    case expr_kind::add:
    case expr_kind::sub: return 1;
    case expr_kind::mul:
    case expr_kind::div: return 2;
    case expr_kind::pow: return 3;
    case expr_kind::neg: return 4;
    case expr_kind::constant:
      if (e.value().exact() && e.value().den() != 1) return 2;   // prints as num/den
      if (e.value().value() < 0) return 4;                       // leading minus
      return 5;
    default: return 5;
  }
}

inline void print_rec(std::string& out, const expr& e, int min_prec) {
  const int prec = print_prec(e);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case expr_kind::constant: {
      const number& v = e.value();
      if (v.exact()) {
        out += std::to_string(v.num());
        if (v.den() != 1) { out += '/'; out += std::to_string(v.den()); }
      } else {
        out += format_double(v.value());
      }
      break;
    }
    case expr_kind::var_x: out += 'x'; break;
    case expr_kind::var_n: out += 'n'; break;
    case expr_kind::neg: out += '-'; print_rec(out, e.left(), 4); break;
    case expr_kind::add:
      print_rec(out, e.left(), 1); out += " + "; print_rec(out, e.right(), 2); break;
    case expr_kind::sub:
      print_rec(out, e.left(), 1); out += " - "; print_rec(out, e.right(), 2); break;
    case expr_kind::mul:
      print_rec(out, e.left(), 2); out += " * "; print_rec(out, e.right(), 3); break;
    case expr_kind::div:
      print_rec(out, e.left(), 2); out += " / "; print_rec(out, e.right(), 3); break;
    case expr_kind::pow:
      print_rec(out, e.left(), 4); out += '^'; print_rec(out, e.right(), 3); break;
    case expr_kind::sin: out += "sin("; print_rec(out, e.left(), 0); out += ')'; break;
    case expr_kind::cos: out += "cos("; print_rec(out, e.left(), 0); out += ')'; break;
    case expr_kind::exp: out += "exp("; print_rec(out, e.left(), 0); out += ')'; break;
    case expr_kind::log: out += "log("; print_rec(out, e.left(), 0); out += ')'; break;
    case expr_kind::abs: out += "abs("; print_rec(out, e.left(), 0); out += ')'; break;
    case expr_kind::bernstein: {
      // Display form only; not re-parseable. Long coefficient lists are
      // elided to keep reports readable.
      const bern_data& bd = e.bern();
      out += "bernstein[";
      out += format_double(bd.lo); out += ", "; out += format_double(bd.hi);
      out += "; deg "; out += std::to_string(bd.coeffs.size() - 1); out += "](";
      const std::size_t shown = bd.coeffs.size() <= 9 ? bd.coeffs.size() : 8;
      for (std::size_t i = 0; i < shown; ++i) {
        if (i) out += ", ";
        out += format_double(bd.coeffs[i]);
      }
      if (shown < bd.coeffs.size()) out += ", ...";
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const expr& e) {
  std::string out;
  detail::print_rec(out, e, 0);
  return out;
}

// ---------------------------------------------------------------- parsing --

namespace detail {

struct token {
  enum kind { num, name, plus, minus, star, slash, caret, lparen, rparen, end } k;
  std::string_view text;
  std::size_t off;
  number val;  // num only
};

// Hand-rolled scanner; deliberately avoids <cctype> so behavior cannot drift
// with the locale.
class lexer {
 public:
  explicit lexer(std::string_view src) : src_(src) { advance(); }

  const token& peek() const { return tok_; }

  token take() {
    token t = tok_;
    advance();
    return t;
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
    tok_.off = pos_;
    if (pos_ >= src_.size()) { tok_.k = token::end; tok_.text = "end of input"; return; }
    char c = src_[pos_];
    switch (c) {
      case '+': tok_ = {token::plus, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case '-': tok_ = {token::minus, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case '*': tok_ = {token::star, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case '/': tok_ = {token::slash, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case '^': tok_ = {token::caret, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case '(': tok_ = {token::lparen, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      case ')': tok_ = {token::rparen, src_.substr(pos_, 1), pos_, {}}; ++pos_; return;
      default: break;
    }
    if (is_digit(c)) { lex_number(); return; }
    if (is_alpha(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      tok_ = {token::name, src_.substr(start, pos_ - start), start, {}};
      return;
    }
    throw syntax_error(pos_, {"number", "'x'", "'n'", "'pi'", "function name", "operator", "'('", "')'"},
                       std::string("'") + c + "'");
  }

  void lex_number() {
    std::size_t start = pos_;
    bool integral = true;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      integral = false;
      ++pos_;
      if (pos_ >= src_.size() || !is_digit(src_[pos_]))
        throw syntax_error(pos_, {"digit"}, pos_ >= src_.size() ? "end of input"
                                                                : std::string("'") + src_[pos_] + "'");
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        integral = false;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      } else {
        pos_ = mark;  // the 'e' belongs to an identifier, not this literal
      }
    }
    std::string_view text = src_.substr(start, pos_ - start);
    number v;
    if (integral) {
      long long iv = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), iv);
      if (res.ec == std::errc() && res.ptr == text.data() + text.size()) {
        v = number::integer(iv);
      } else {
        double dv = 0;
        std::from_chars(text.data(), text.data() + text.size(), dv);
        v = number::real(dv);
      }
    } else {
      double dv = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), dv);
      if (res.ec != std::errc())
        throw syntax_error(start, {"number"}, "'" + std::string(text) + "'");
      v = number::real(dv);
    }
    tok_ = {token::num, text, start, v};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  token tok_{};
};

class parser {
 public:
  explicit parser(std::string_view src) : lex_(src) {}

  expr run() {
    expr e = parse_expr();
    if (lex_.peek().k != token::end)
      throw syntax_error(lex_.peek().off,
                         {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"},
                         quoted(lex_.peek()));
    return e;
  }

 private:
  static std::string quoted(const token& t) {
    if (t.k == token::end) return "end of input";
    return "'" + std::string(t.text) + "'";
  }

  static std::vector<std::string> atom_expected() {
    return {"'-'", "number", "'x'", "'n'", "'pi'", "function name", "'('"};
  }

  expr parse_expr() {
    expr e = parse_term();
    while (lex_.peek().k == token::plus || lex_.peek().k == token::minus) {
      token op = lex_.take();
      expr rhs = parse_term();
      e = op.k == token::plus ? add(std::move(e), std::move(rhs))
                              : sub(std::move(e), std::move(rhs));
    }
    return e;
  }

  expr parse_term() {
    expr e = parse_factor();
    while (lex_.peek().k == token::star || lex_.peek().k == token::slash) {
      token op = lex_.take();
      expr rhs = parse_factor();
      if (op.k == token::star) {
        e = mul(std::move(e), std::move(rhs));
      } else {
        e = fold_div(std::move(e), std::move(rhs));
      }
    }
    return e;
  }

  // Quotients of exact constants fold to a rational immediately so that the
  // tree carries (1/2) as a single constant.
  static expr fold_div(expr a, expr b) {
    if (a.kind() == expr_kind::constant && b.kind() == expr_kind::constant &&
        a.value().exact() && b.value().exact() && !b.value().is_zero()) {
      return constant(number::div(a.value(), b.value()));
    }
    return div(std::move(a), std::move(b));
  }

  expr parse_factor() {
    expr base = parse_unary();
    if (lex_.peek().k == token::caret) {
      lex_.take();
      expr exponent = parse_factor();
      return pow(std::move(base), std::move(exponent));
    }
    return base;
  }

  expr parse_unary() {
    if (lex_.peek().k == token::minus) {
      lex_.take();
      expr inner = parse_unary();
      if (inner.kind() == expr_kind::constant)
        return constant(inner.value().negated());
      return neg(std::move(inner));
    }
    return parse_atom();
  }

  expr parse_atom() {
    token t = lex_.peek();
    switch (t.k) {
      case token::num:
        lex_.take();
        return constant(t.val);
      case token::lparen: {
        lex_.take();
        expr e = parse_expr();
        expect_rparen();
        return e;
      }
      case token::name: {
        lex_.take();
        if (t.text == "x") return var_x();
        if (t.text == "n") return var_n();
        if (t.text == "pi") return constant(std::numbers::pi);
        expr_kind k;
        if (t.text == "sin") k = expr_kind::sin;
        else if (t.text == "cos") k = expr_kind::cos;
        else if (t.text == "exp") k = expr_kind::exp;
        else if (t.text == "log") k = expr_kind::log;
        else if (t.text == "abs") k = expr_kind::abs;
        else throw syntax_error(t.off, atom_expected(), quoted(t));
        if (lex_.peek().k != token::lparen)
          throw syntax_error(lex_.peek().off, {"'('"}, quoted(lex_.peek()));
        lex_.take();
        expr arg = parse_expr();
        expect_rparen();
        return expr::make_unary(k, std::move(arg));
      }
      default:
        throw syntax_error(t.off, atom_expected(), quoted(t));
    }
  }

  void expect_rparen() {
    if (lex_.peek().k != token::rparen)
      throw syntax_error(lex_.peek().off, {"')'"}, quoted(lex_.peek()));
    lex_.take();
  }

  lexer lex_;
};

}  // namespace detail

inline expr parse(std::string_view src) {
  return detail::parser(src).run();
}

// ---------------------------------------------------------- simplification --

namespace detail {

inline bool is_exact_const(const expr& e) {
  return e.kind() == expr_kind::constant && e.value().exact();
}

// Collect a multiplication chain into sign, constant coefficient and the
// remaining non-constant factors. Nested negations fold into the sign.
inline void flatten_mul(const expr& e, number& coeff, std::vector<expr>& factors) {
  switch (e.kind()) {
    case expr_kind::mul:
      flatten_mul(e.left(), coeff, factors);
      flatten_mul(e.right(), coeff, factors);
      return;
    case expr_kind::neg:
      coeff = coeff.negated();
      flatten_mul(e.left(), coeff, factors);
      return;
    case expr_kind::constant:
      coeff = number::mul(coeff, e.value());
      return;
    default:
      factors.push_back(e);
      return;
  }
}

inline void flatten_add(const expr& e, bool negated, number& acc, std::vector<std::pair<expr, bool>>& terms) {
  switch (e.kind()) {
    case expr_kind::add:
      flatten_add(e.left(), negated, acc, terms);
      flatten_add(e.right(), negated, acc, terms);
      return;
    case expr_kind::sub:
      flatten_add(e.left(), negated, acc, terms);
      flatten_add(e.right(), !negated, acc, terms);
      return;
    case expr_kind::neg:
      flatten_add(e.left(), !negated, acc, terms);
      return;
    case expr_kind::constant:
      acc = negated ? number::sub(acc, e.value()) : number::add(acc, e.value());
      return;
    default:
      terms.emplace_back(e, negated);
      return;
  }
}

expr simplify_node(const expr& e);  // forward

inline expr rebuild_mul(number coeff, std::vector<expr> factors) {
  if (coeff.is_zero()) return constant(coeff);

  // Merge constant-base powers sharing a structurally equal exponent:
  // a^u * b^u -> (a*b)^u. This is what collapses (1/2)^n * 2^n to 1.
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].kind() != expr_kind::pow || !is_exact_const(factors[i].left())) continue;
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      if (factors[j].kind() != expr_kind::pow || !is_exact_const(factors[j].left())) continue;
      if (!identical(factors[i].right(), factors[j].right())) continue;
      number base = number::mul(factors[i].left().value(), factors[j].left().value());
      factors[i] = simplify_node(pow(constant(base), factors[i].right()));
      factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(j));
      --j;
    }
  }

  std::vector<expr> kept;
  for (expr& f : factors) {
    if (f.kind() == expr_kind::constant) {
      coeff = number::mul(coeff, f.value());
      continue;
    }
    kept.push_back(std::move(f));
  }
  if (coeff.is_zero()) return constant(coeff);

  expr out = constant(coeff);
  bool have = false;
  if (!coeff.is_one()) have = true;
  for (expr& f : kept) {
    if (!have) { out = std::move(f); have = true; }
    else out = mul(std::move(out), std::move(f));
  }
  if (!have) return constant(coeff);
  return out;
}

inline expr rebuild_add(number acc, std::vector<std::pair<expr, bool>> terms) {
  // Cancel structurally equal terms of opposite sign.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[i].second != terms[j].second && identical(terms[i].first, terms[j].first)) {
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(j));
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
        break;
      }
    }
  }

  // Non-constant terms first, the folded constant last, so "n - 1" prints
  // in the customary order rather than "-1 + n".
  expr out = constant(number::integer(0));
  bool have = false;
  for (auto& [t, negated] : terms) {
    if (!have) {
      out = negated ? neg(std::move(t)) : std::move(t);
      have = true;
    } else {
      out = negated ? sub(std::move(out), std::move(t)) : add(std::move(out), std::move(t));
    }
  }
  if (!have) return constant(acc);
  if (!acc.is_zero()) {
    out = acc.value() < 0 ? sub(std::move(out), constant(acc.negated()))
                          : add(std::move(out), constant(acc));
  }
  return out;
}

inline std::optional<number> fold_unary_const(expr_kind k, const number& v) {
  switch (k) {
    case expr_kind::neg: return v.negated();
    case expr_kind::abs: return v.abs_value();
    case expr_kind::sin: {
      double r = std::sin(v.value());
      return number::real(r);
    }
    case expr_kind::cos: return number::real(std::cos(v.value()));
    case expr_kind::exp: {
      double r = std::exp(v.value());
      if (!std::isfinite(r)) return std::nullopt;
      return number::real(r);
    }
    case expr_kind::log: {
      if (v.value() <= 0.0) return std::nullopt;
      return number::real(std::log(v.value()));
    }
    default: return std::nullopt;
  }
}

// One rewriting pass over a node whose children are already simplified.
inline expr simplify_node(const expr& e) {
  switch (e.kind()) {
    case expr_kind::constant: {
      const number& v = e.value();
      if (!v.exact() && v.is_integer() && std::fabs(v.value()) <= 9007199254740992.0)
        return constant(number::integer(static_cast<long long>(v.value())));
      return e;
    }
    case expr_kind::var_x:
    case expr_kind::var_n:
    case expr_kind::bernstein:
      return e;

    case expr_kind::neg:
      if (e.left().kind() == expr_kind::constant) return constant(e.left().value().negated());
      if (e.left().kind() == expr_kind::neg) return e.left().left();
      return e;

    case expr_kind::add:
    case expr_kind::sub: {
      number acc = number::integer(0);
      std::vector<std::pair<expr, bool>> terms;
      flatten_add(e, false, acc, terms);
      return rebuild_add(acc, std::move(terms));
    }

    case expr_kind::mul: {
      number coeff = number::integer(1);
      std::vector<expr> factors;
      flatten_mul(e, coeff, factors);
      return rebuild_mul(coeff, std::move(factors));
    }

    case expr_kind::div: {
      const expr& a = e.left();
      const expr& b = e.right();
      if (b.kind() == expr_kind::constant && b.value().is_one()) return a;
      if (a.kind() == expr_kind::constant && a.value().is_zero()) return a;
      if (a.kind() == expr_kind::constant && b.kind() == expr_kind::constant &&
          !b.value().is_zero())
        return constant(number::div(a.value(), b.value()));
      return e;
    }

    case expr_kind::pow: {
      const expr& b = e.left();
      const expr& p = e.right();
      if (p.kind() == expr_kind::constant && p.value().is_one()) return b;
      if (p.kind() == expr_kind::constant && p.value().is_zero()) return constant(1LL);
      if (b.kind() == expr_kind::constant && b.value().is_one()) return constant(1LL);
      if (b.kind() == expr_kind::constant && p.kind() == expr_kind::constant) {
        const number& bv = b.value();
        const number& pv = p.value();
        if (bv.exact() && pv.exact() && pv.den() == 1) {
          if (auto r = number::pow_int(bv, pv.num())) return constant(*r);
        }
        double base = bv.value(), ex = pv.value();
        bool defined = !(base == 0.0 && ex < 0.0) && !(base < 0.0 && std::floor(ex) != ex);
        if (defined) {
          double r = std::pow(base, ex);
          if (std::isfinite(r)) return constant(number::real(r));
        }
      }
      return e;
    }

    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs:
      if (e.left().kind() == expr_kind::constant) {
        if (auto r = fold_unary_const(e.kind(), e.left().value())) {
          if (e.kind() == expr_kind::sin || e.kind() == expr_kind::cos ||
              e.kind() == expr_kind::exp || e.kind() == expr_kind::log) {
            if (!std::isfinite(r->value())) return e;
          }
          return constant(*r);
        }
      }
      return e;
    default:
      return e;
  }
}

inline expr simplify_rec(const expr& e) {
  expr cur = e;
  switch (cur.kind()) {
    case expr_kind::constant:
    case expr_kind::var_x:
    case expr_kind::var_n:
    case expr_kind::bernstein:
      break;
    case expr_kind::neg:
    case expr_kind::sin:
    case expr_kind::cos:
    case expr_kind::exp:
    case expr_kind::log:
    case expr_kind::abs: {
      expr a = simplify_rec(cur.left());
      if (!identical(a, cur.left())) cur = expr::make_unary(cur.kind(), std::move(a));
      break;
    }
    default: {
      expr a = simplify_rec(cur.left());
      expr b = simplify_rec(cur.right());
      if (!identical(a, cur.left()) || !identical(b, cur.right()))
        cur = expr::make_binary(cur.kind(), std::move(a), std::move(b));
      break;
    }
  }
  for (int round = 0; round < 8; ++round) {
    expr next = simplify_node(cur);
    if (identical(next, cur)) break;
    cur = simplify_rec(next);
  }
  return cur;
}

}  // namespace detail

// Value-preserving rewriting to a stable normal form; idempotent. At points
// where a removed subterm was undefined the simplified tree may evaluate
// where the original raised; wherever both evaluate they agree.
inline expr simplify(const expr& e) {
  expr cur = detail::simplify_rec(e);
  for (int round = 0; round < 32; ++round) {
    expr next = detail::simplify_rec(cur);
    if (identical(next, cur)) return cur;
    cur = next;
  }
  return cur;
}

// ----------------------------------------------------------- differentiation --

// Outcome of symbolic d/dx. The derivative is absent exactly when the input
// contains |.| applied to an argument that depends on x; that offending
// subterm is reported.
struct diff_result {
  std::optional<expr> derivative;
  std::optional<expr> offending;

  bool ok() const { return derivative.has_value(); }
};

namespace detail {

inline diff_result nondiff(const expr& offending) {
  diff_result r;
  r.offending = offending;
  return r;
}

inline diff_result diff_rec(const expr& e) {
  if (!contains_x(e)) {
    diff_result r;
    r.derivative = constant(0LL);
    return r;
  }
  switch (e.kind()) {
    case expr_kind::var_x: {
      diff_result r;
      r.derivative = constant(1LL);
      return r;
    }
    case expr_kind::neg: {
      diff_result u = diff_rec(e.left());
      if (!u.ok()) return u;
      u.derivative = neg(*u.derivative);
      return u;
    }
    case expr_kind::add:
    case expr_kind::sub: {
      diff_result a = diff_rec(e.left());
      if (!a.ok()) return a;
      diff_result b = diff_rec(e.right());
      if (!b.ok()) return b;
      diff_result r;
      r.derivative = expr::make_binary(e.kind(), std::move(*a.derivative), std::move(*b.derivative));
      return r;
    }
    case expr_kind::mul: {
      diff_result a = diff_rec(e.left());
      if (!a.ok()) return a;
      diff_result b = diff_rec(e.right());
      if (!b.ok()) return b;
      diff_result r;
      r.derivative = add(mul(*a.derivative, e.right()), mul(e.left(), *b.derivative));
      return r;
    }
    case expr_kind::div: {
      diff_result a = diff_rec(e.left());
      if (!a.ok()) return a;
      diff_result b = diff_rec(e.right());
      if (!b.ok()) return b;
      diff_result r;
      r.derivative = div(sub(mul(*a.derivative, e.right()), mul(e.left(), *b.derivative)),
                         pow(e.right(), constant(2LL)));
      return r;
    }
    case expr_kind::pow: {
      const expr& u = e.left();
      const expr& v = e.right();
      if (!contains_x(v)) {
        // d/dx u^v = v * u^(v-1) * u'
        diff_result du = diff_rec(u);
        if (!du.ok()) return du;
        diff_result r;
        r.derivative = mul(mul(v, pow(u, sub(v, constant(1LL)))), *du.derivative);
        return r;
      }
      if (!contains_x(u)) {
        // d/dx a^v = a^v * log(a) * v'
        diff_result dv = diff_rec(v);
        if (!dv.ok()) return dv;
        diff_result r;
        r.derivative = mul(mul(pow(u, v), log(u)), *dv.derivative);
        return r;
      }
      diff_result du = diff_rec(u);
      if (!du.ok()) return du;
      diff_result dv = diff_rec(v);
      if (!dv.ok()) return dv;
      diff_result r;
      r.derivative = mul(pow(u, v), add(mul(*dv.derivative, log(u)),
                                        div(mul(v, *du.derivative), u)));
      return r;
    }
    case expr_kind::sin: {
      diff_result u = diff_rec(e.left());
      if (!u.ok()) return u;
      diff_result r;
      r.derivative = mul(cos(e.left()), *u.derivative);
      return r;
    }
    case expr_kind::cos: {
      diff_result u = diff_rec(e.left());
      if (!u.ok()) return u;
      diff_result r;
      r.derivative = mul(neg(sin(e.left())), *u.derivative);
      return r;
    }
    case expr_kind::exp: {
      diff_result u = diff_rec(e.left());
      if (!u.ok()) return u;
      diff_result r;
      r.derivative = mul(e, *u.derivative);
      return r;
    }
    case expr_kind::log: {
      diff_result u = diff_rec(e.left());
      if (!u.ok()) return u;
      diff_result r;
      r.derivative = div(*u.derivative, e.left());
      return r;
    }
    case expr_kind::abs:
      // contains_x(e) holds here, so the argument depends on x.
      return nondiff(e);
    case expr_kind::bernstein: {
      const bern_data& bd = e.bern();
      const std::size_t d = bd.coeffs.size() - 1;
      diff_result r;
      if (d == 0) {
        r.derivative = constant(0LL);
        return r;
      }
      std::vector<double> dc(d);
      const double scale = static_cast<double>(d) / (bd.hi - bd.lo);
      for (std::size_t k = 0; k < d; ++k)
        dc[k] = scale * (bd.coeffs[k + 1] - bd.coeffs[k]);
      r.derivative = expr::make_bernstein(bd.lo, bd.hi, std::move(dc));
      return r;
    }
    default:
      return nondiff(e);
  }
}

}  // namespace detail

inline diff_result differentiate(const expr& e) {
  return detail::diff_rec(e);
}

// --------------------------------------------------------------- bernstein --

// Degree-d Bernstein polynomial of f rescaled to [a, b]: control value k is
// f(a + (b-a) k/d). Reproduces constants and affine functions exactly.
inline expr bernstein_approx(const expr& f, double a, double b, long long degree, long long n = 1) {
  if (!(a < b)) throw shape_error("bernstein_approx requires a < b");
  if (degree < 1) throw shape_error("bernstein_approx requires degree >= 1");
  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
  for (long long k = 0; k <= degree; ++k) {
    double xk = a + (b - a) * (static_cast<double>(k) / static_cast<double>(degree));
    coeffs[static_cast<std::size_t>(k)] = eval(f, xk, n);  // domain_error propagates
  }
  return expr::make_bernstein(a, b, std::move(coeffs));
}

}  // namespace extrafun
