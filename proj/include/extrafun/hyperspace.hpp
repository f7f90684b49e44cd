#pragma once
// Function sequences, the windowed limit test, and the quotient classes it
// induces. A sequence is equivalent to another relative to a probe family
// when every probe's value of the difference tends to zero; with finitely
// many terms that limit is undecidable, so every predicate here returns a
// three-valued decision carrying the evidence it was based on.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "seminorm.hpp"

namespace extrafun {

// -------------------------------------------------------------- sequences --

// Closed-form sequence: term i is e with n replaced by i.
struct expr_seq {
  expr e;
};

// Finitely many explicit leading terms (expressions in x alone), then a
// closed-form tail.
struct list_seq {
  std::vector<expr> head;
  expr tail;
};

// Programmatic sequence; used for smoothed representatives whose terms are
// built on demand. `certified_differentiable` records a construction-time
// guarantee that every generated term is symbolically differentiable, which
// a scan of finitely many terms could not establish.
struct gen_seq {
  std::function<expr(long long)> gen;
  std::string label;
  bool certified_differentiable = false;
};

// Index origin 1 throughout.
class fun_seq {
 public:
  using storage = std::variant<expr_seq, list_seq, gen_seq>;

  static fun_seq from_expr(expr e) { return fun_seq(expr_seq{std::move(e)}); }
  static fun_seq from_list(std::vector<expr> head, expr tail) {
    for (const expr& h : head)
      if (contains_n(h)) throw shape_error("list head terms must not depend on n");
    return fun_seq(list_seq{std::move(head), std::move(tail)});
  }
  static fun_seq from_generator(std::function<expr(long long)> gen, std::string label,
                                bool certified_differentiable) {
    return fun_seq(gen_seq{std::move(gen), std::move(label), certified_differentiable});
  }

  expr term(long long i) const {
    if (i < 1) throw shape_error("sequence index must be >= 1");
    if (const auto* es = std::get_if<expr_seq>(v_.get())) return substitute_n(es->e, i);
    if (const auto* ls = std::get_if<list_seq>(v_.get())) {
      if (static_cast<std::size_t>(i) <= ls->head.size())
        return ls->head[static_cast<std::size_t>(i) - 1];
      return substitute_n(ls->tail, i);
    }
    const auto& gs = std::get<gen_seq>(*v_);
    return substitute_n(gs.gen(i), i);
  }

  const storage& get() const { return *v_; }
  bool is_expr_seq() const { return std::holds_alternative<expr_seq>(*v_); }

  // Syntactic stability: a closed form with no occurrence of n.
  bool syntactically_stable() const {
    const auto* es = std::get_if<expr_seq>(v_.get());
    return es && !contains_n(es->e);
  }

  std::string describe() const {
    if (const auto* es = std::get_if<expr_seq>(v_.get())) return to_string(es->e);
    if (const auto* ls = std::get_if<list_seq>(v_.get())) {
      std::string out = "[";
      for (std::size_t i = 0; i < ls->head.size(); ++i) {
        if (i) out += ", ";
        out += to_string(ls->head[i]);
      }
      out += "; then ";
      out += to_string(ls->tail);
      out += "]";
      return out;
    }
    return std::get<gen_seq>(*v_).label;
  }

 private:
  explicit fun_seq(storage s) : v_(std::make_shared<const storage>(std::move(s))) {}

  std::shared_ptr<const storage> v_;
};

// The constant sequence f, f, f, ...
inline fun_seq embed_stable(expr l) {
  if (contains_n(l)) throw shape_error("stable embedding requires an n-free expression");
  return fun_seq::from_expr(std::move(l));
}

namespace detail {

// Whether every term of the sequence is symbolically differentiable. One
// symbolic check settles a closed form: n-substitution never removes an
// x-dependent subterm, so the verdict cannot flip with the index.
inline bool seq_all_differentiable(const fun_seq& f) {
  if (const auto* es = std::get_if<expr_seq>(&f.get()))
    return differentiate(es->e).ok();
  if (const auto* ls = std::get_if<list_seq>(&f.get())) {
    for (const expr& h : ls->head)
      if (!differentiate(h).ok()) return false;
    return differentiate(ls->tail).ok();
  }
  return std::get<gen_seq>(f.get()).certified_differentiable;
}

template <typename Combine>
fun_seq seq_zip(const fun_seq& f, const fun_seq& g, Combine combine, const char* opname) {
  const auto* fe = std::get_if<expr_seq>(&f.get());
  const auto* ge = std::get_if<expr_seq>(&g.get());
  if (fe && ge) return fun_seq::from_expr(combine(fe->e, ge->e));

  const auto* fl = std::get_if<list_seq>(&f.get());
  const auto* gl = std::get_if<list_seq>(&g.get());
  // Any combination of closed forms and finite-head sequences stays a
  // finite-head sequence; only generators force a generator result.
  if ((fe || fl) && (ge || gl)) {
    const std::size_t flen = fl ? fl->head.size() : 0;
    const std::size_t glen = gl ? gl->head.size() : 0;
    const std::size_t len = flen > glen ? flen : glen;
    std::vector<expr> head;
    head.reserve(len);
    for (std::size_t i = 1; i <= len; ++i) {
      head.push_back(combine(f.term(static_cast<long long>(i)),
                             g.term(static_cast<long long>(i))));
    }
    expr tail = combine(fe ? fe->e : fl->tail, ge ? ge->e : gl->tail);
    return fun_seq::from_list(std::move(head), std::move(tail));
  }

  const bool cert = seq_all_differentiable(f) && seq_all_differentiable(g);
  std::string label = "(" + f.describe() + " " + opname + " " + g.describe() + ")";
  fun_seq fc = f, gc = g;
  return fun_seq::from_generator(
      [fc, gc, combine](long long i) { return combine(fc.term(i), gc.term(i)); },
      std::move(label), cert);
}

}  // namespace detail

inline fun_seq seq_add(const fun_seq& f, const fun_seq& g) {
  return detail::seq_zip(f, g, [](expr a, expr b) { return add(std::move(a), std::move(b)); }, "+");
}

inline fun_seq seq_sub(const fun_seq& f, const fun_seq& g) {
  return detail::seq_zip(f, g, [](expr a, expr b) { return sub(std::move(a), std::move(b)); }, "-");
}

inline fun_seq seq_scale(double c, const fun_seq& f) {
  expr ce = (std::floor(c) == c && std::fabs(c) <= 9.0e15)
                ? constant(static_cast<long long>(c))
                : constant(c);
  if (const auto* fe = std::get_if<expr_seq>(&f.get()))
    return fun_seq::from_expr(mul(ce, fe->e));
  if (const auto* fl = std::get_if<list_seq>(&f.get())) {
    std::vector<expr> head;
    head.reserve(fl->head.size());
    for (const expr& h : fl->head) head.push_back(mul(ce, h));
    return fun_seq::from_list(std::move(head), mul(ce, fl->tail));
  }
  const auto& gs = std::get<gen_seq>(f.get());
  fun_seq fc = f;
  return fun_seq::from_generator(
      [fc, ce](long long i) { return mul(ce, fc.term(i)); },
      detail::format_double(c) + " * " + gs.label, gs.certified_differentiable);
}

// ---------------------------------------------------------------- windows --

// Finite observation window standing in for a limit: indices start..end are
// sampled and epsilon is the smallness threshold at the tail.
struct window {
  long long start;
  long long end;
  double epsilon;

  window(long long start_, long long end_, double epsilon_)
      : start(start_), end(end_), epsilon(epsilon_) {
    if (start < 1 || start >= end) throw shape_error("window requires 1 <= start < end");
    if (!(epsilon > 0)) throw shape_error("window requires epsilon > 0");
  }

  // Quarter length used by the trend rule, at least 1.
  long long quarter() const {
    long long m = (end - start + 3) / 4;
    return m < 1 ? 1 : m;
  }
};

inline window default_window() { return window(8, 64, 1e-6); }
// Number sequences decay slowly (1/n scale), so their default window looks
// much further out with a coarser threshold.
inline window abs_default_window() { return window(8, 512, 1e-2); }

inline window default_window_for(const seminorm_family& q) {
  return q.is_abs() ? abs_default_window() : default_window();
}

// --------------------------------------------------------------- decisions --

enum class verdict { holds, fails, inconclusive };

inline const char* verdict_name(verdict v) {
  switch (v) {
    case verdict::holds: return "Holds";
    case verdict::fails: return "Fails";
    default: return "Inconclusive";
  }
}

// Per-probe evidence: every sampled value in the window plus the derived
// quarter maxima the rule looked at.
struct probe_trace {
  std::string probe_label;
  std::vector<std::pair<long long, double>> values;  // (index, value), full window
  double head_max = 0.0;  // max over the first quarter
  double tail_max = 0.0;  // max over the last quarter
  long long tail_argmax = 0;
  verdict v = verdict::inconclusive;
};

struct decision {
  verdict v = verdict::inconclusive;
  std::vector<probe_trace> traces;
  // Populated when v == fails: the probe and sample that refute the limit.
  std::optional<std::string> witness_probe;
  std::optional<long long> witness_index;
  std::optional<double> witness_value;

  bool holds() const { return v == verdict::holds; }
  bool fails() const { return v == verdict::fails; }
};

namespace detail {

// Fraction by which the tail max must reach the head max before a large tail
// counts as a persistent (non-decreasing) violation rather than slow decay.
inline constexpr double kTrendSlack = 0.05;
// A tail this far below epsilon is accepted as converged even if the head
// quarter happened to be smaller (e.g. both are rounding noise).
inline constexpr double kDeepConvergence = 1e-3;

inline probe_trace run_probe_trace(const probe& p, const fun_seq& f, const window& w) {
  probe_trace tr;
  tr.probe_label = probe_name(p);
  tr.values.reserve(static_cast<std::size_t>(w.end - w.start + 1));
  for (long long i = w.start; i <= w.end; ++i)
    tr.values.emplace_back(i, seminorm_value(p, f.term(i), i));

  const long long m = w.quarter();
  tr.head_max = 0.0;
  for (long long j = 0; j < m && j < static_cast<long long>(tr.values.size()); ++j)
    tr.head_max = std::max(tr.head_max, tr.values[static_cast<std::size_t>(j)].second);
  tr.tail_max = 0.0;
  tr.tail_argmax = w.end;
  const long long count = static_cast<long long>(tr.values.size());
  for (long long j = count - m; j < count; ++j) {
    const auto& [idx, val] = tr.values[static_cast<std::size_t>(j)];
    if (val >= tr.tail_max) { tr.tail_max = val; tr.tail_argmax = idx; }
  }

  // Quarter-tail rule: small tail with a non-increasing trend holds; a tail
  // at or above epsilon that has not decayed relative to the head fails;
  // anything else stays open.
  if (tr.tail_max < w.epsilon &&
      (tr.tail_max <= tr.head_max || tr.tail_max <= w.epsilon * kDeepConvergence)) {
    tr.v = verdict::holds;
  } else if (tr.tail_max >= w.epsilon && tr.tail_max >= tr.head_max * (1.0 - kTrendSlack)) {
    tr.v = verdict::fails;
  } else {
    tr.v = verdict::inconclusive;
  }
  return tr;
}

}  // namespace detail

// Does every probe value of f tend to zero over the window?
inline decision null_check(const fun_seq& f, const seminorm_family& q, const window& w) {
  decision d;
  d.v = verdict::holds;
  for (const probe& p : q.probes()) {
    probe_trace tr = detail::run_probe_trace(p, f, w);
    if (tr.v == verdict::fails && d.v != verdict::fails) {
      d.v = verdict::fails;
      d.witness_probe = tr.probe_label;
      d.witness_index = tr.tail_argmax;
      d.witness_value = tr.tail_max;
    } else if (tr.v == verdict::inconclusive && d.v == verdict::holds) {
      d.v = verdict::inconclusive;
    }
    d.traces.push_back(std::move(tr));
  }
  return d;
}

inline decision equivalent(const fun_seq& f, const fun_seq& g, const seminorm_family& q,
                           const window& w) {
  return null_check(seq_sub(f, g), q, w);
}

// ----------------------------------------------------------------- classes --

// Tag attached to elements presented as an explicit linear combination over a
// named basis; consumed by the basis-linear section. Propagates through the
// vector operations so sums of presented elements stay presented.
struct linear_presentation {
  std::string basis_tag;
  std::vector<double> coeffs;
};

// An element of the quotient space: a representative sequence tagged with the
// probe family that defines its class. Equality of elements is the
// `equivalent` decision, never representative identity.
class hyper_element {
 public:
  hyper_element(fun_seq rep, seminorm_family family)
      : rep_(std::move(rep)), family_(std::move(family)) {}

  const fun_seq& rep() const { return rep_; }
  const seminorm_family& family() const { return family_; }

  const std::optional<linear_presentation>& presentation() const { return presentation_; }
  hyper_element with_presentation(linear_presentation p) const {
    hyper_element out = *this;
    out.presentation_ = std::move(p);
    return out;
  }

 private:
  fun_seq rep_;
  seminorm_family family_;
  std::optional<linear_presentation> presentation_;
};

inline hyper_element project(fun_seq f, seminorm_family q) {
  return hyper_element(std::move(f), std::move(q));
}

// Class-level constructors for the three standard families: compactwise,
// pointwise, and hypernumber elements.
inline hyper_element ec(fun_seq f, const std::vector<std::pair<double, double>>& intervals,
                        long long grid = 1001) {
  return project(std::move(f), compact_sup_family(intervals, grid));
}
inline hyper_element ep(fun_seq f, const std::vector<double>& points) {
  return project(std::move(f), pointwise_family(points));
}
inline hyper_element hn(fun_seq f) { return project(std::move(f), abs_family()); }

namespace detail {

inline void require_same_family(const hyper_element& a, const hyper_element& b,
                                const char* op) {
  if (!families_equal(a.family(), b.family()))
    throw family_mismatch(std::string(op) + ": elements live in different probe families ('" +
                          a.family().label() + "' vs '" + b.family().label() + "')");
}

}  // namespace detail

inline decision hyper_equal(const hyper_element& a, const hyper_element& b, const window& w) {
  detail::require_same_family(a, b, "hyper_equal");
  return equivalent(a.rep(), b.rep(), a.family(), w);
}

inline hyper_element hyper_add(const hyper_element& a, const hyper_element& b) {
  detail::require_same_family(a, b, "hyper_add");
  hyper_element out(seq_add(a.rep(), b.rep()), a.family());
  if (a.presentation() && b.presentation() &&
      a.presentation()->basis_tag == b.presentation()->basis_tag &&
      a.presentation()->coeffs.size() == b.presentation()->coeffs.size()) {
    linear_presentation p = *a.presentation();
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
      p.coeffs[i] += b.presentation()->coeffs[i];
    return out.with_presentation(std::move(p));
  }
  return out;
}

inline hyper_element hyper_sub(const hyper_element& a, const hyper_element& b) {
  detail::require_same_family(a, b, "hyper_sub");
  hyper_element out(seq_sub(a.rep(), b.rep()), a.family());
  if (a.presentation() && b.presentation() &&
      a.presentation()->basis_tag == b.presentation()->basis_tag &&
      a.presentation()->coeffs.size() == b.presentation()->coeffs.size()) {
    linear_presentation p = *a.presentation();
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
      p.coeffs[i] -= b.presentation()->coeffs[i];
    return out.with_presentation(std::move(p));
  }
  return out;
}

inline hyper_element hyper_scale(double c, const hyper_element& a) {
  hyper_element out(seq_scale(c, a.rep()), a.family());
  if (a.presentation()) {
    linear_presentation p = *a.presentation();
    for (double& x : p.coeffs) x *= c;
    return out.with_presentation(std::move(p));
  }
  return out;
}

// Does some probe tell f and g apart (as single functions, not sequences)?
inline bool separates(const seminorm_family& q, const expr& f, const expr& g) {
  for (const probe& p : q.probes()) {
    const double vf = seminorm_value(p, f, 1);
    const double vg = seminorm_value(p, g, 1);
    if (std::fabs(vf - vg) > 1e-12) return true;
  }
  return false;
}

// Semidecision of stability: Holds when the representative is syntactically
// constant in n, or provably equivalent to the constant sequence of its own
// last-window term. Never Fails; absence of a convergent trend only means no
// stable representative was exhibited.
inline decision is_stable_element(const hyper_element& f, const window& w) {
  decision d;
  if (f.rep().syntactically_stable()) {
    d.v = verdict::holds;
    return d;
  }
  expr candidate = f.rep().term(w.end);
  decision eq = equivalent(f.rep(), embed_stable(std::move(candidate)), f.family(), w);
  if (eq.holds()) return eq;
  eq.v = verdict::inconclusive;
  eq.witness_probe.reset();
  eq.witness_index.reset();
  eq.witness_value.reset();
  return eq;
}

}  // namespace extrafun
