#pragma once
// The bundle of representative sequences over the quotient space: section
// strategies (right inverses of projection), the lifted coordinatewise
// derivative with its cutoff semantics, the sectional derivative, smoothing
// via Bernstein polynomials, conjugated sections, and the demonstration that
// differentiation is not representative-independent.

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
#include "hyperspace.hpp"
#include "random.hpp"
#include "seminorm.hpp"
#include "topology.hpp"

namespace extrafun {

class section;  // the variants below may nest a section behind a pointer

// Returns the stored representative unchanged.
struct rep_section {};

// Defined exactly on elements presented as finite linear combinations over a
// named basis; returns the matching combination of the basis representatives.
// By construction the extension from basis to span is linear and unique.
struct basis_linear_section {
  std::string tag;
  std::vector<std::pair<hyper_element, fun_seq>> basis;
};

// Replaces term i by its Bernstein polynomial on [-scale*i, scale*i] with
// degree 2^i capped at `cap`. Output terms are polynomials, hence always
// differentiable.
struct smoothing_section {
  double scale = 1.0;
  long long cap = 16384;

  long long degree(long long i) const {
    if (i >= 62) return cap;
    const long long d = 1LL << i;
    return d > cap ? cap : d;
  }
  double half_width(long long i) const { return scale * static_cast<double>(i); }
};

// A base section with finitely many overrides, matched by class equivalence.
struct patched_section {
  std::shared_ptr<const section> base;  // null means plain representative
  std::vector<std::pair<hyper_element, fun_seq>> patches;
  window match_window;
};

// mt-conjugation: x -> a x scaling moved through an inner section.
struct mt_conjugated_section {
  double a;
  std::shared_ptr<const section> inner;
};

// ad-conjugation: shifting by a fixed n-free expression moved through an
// inner section.
struct ad_conjugated_section {
  expr shift;
  std::shared_ptr<const section> inner;
};

class section {
 public:
  using storage = std::variant<rep_section, basis_linear_section, smoothing_section,
                               patched_section, mt_conjugated_section, ad_conjugated_section>;

  section(rep_section s) : v_(std::move(s)) {}
  section(basis_linear_section s) : v_(std::move(s)) {}
  section(smoothing_section s) : v_(std::move(s)) {}
  section(patched_section s) : v_(std::move(s)) {}
  section(mt_conjugated_section s) : v_(std::move(s)) {}
  section(ad_conjugated_section s) : v_(std::move(s)) {}

  const storage& get() const { return v_; }

 private:
  storage v_;
};

// ------------------------------------------------------------ constructors --

// Validates that the basis classes are pairwise distinguishable: the section
// law (and uniqueness of decompositions) is meaningless over a degenerate
// basis.
inline basis_linear_section make_basis_linear(
    std::string tag, std::vector<std::pair<hyper_element, fun_seq>> basis, const window& w) {
  if (basis.empty()) throw shape_error("basis-linear section needs a non-empty basis");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    detail::require_same_family(basis[i].first, basis[0].first, "make_basis_linear");
    decision law = equivalent(basis[i].second, basis[i].first.rep(),
                              basis[i].first.family(), w);
    if (law.fails())
      throw shape_error("basis representative " + std::to_string(i) +
                        " is not equivalent to its class");
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      decision d = hyper_equal(basis[i].first, basis[j].first, w);
      if (!d.fails())
        throw shape_error("basis classes " + std::to_string(i) + " and " +
                          std::to_string(j) + " are not distinguishable (need Fails, got " +
                          verdict_name(d.v) + ")");
    }
  }
  return basis_linear_section{std::move(tag), std::move(basis)};
}

// An element of the section's span, presented so the section can decompose it.
inline hyper_element span_element(const basis_linear_section& r,
                                  const std::vector<double>& coeffs) {
  if (coeffs.size() != r.basis.size())
    throw shape_error("coefficient count does not match basis size");
  fun_seq acc = seq_scale(coeffs[0], r.basis[0].first.rep());
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    acc = seq_add(acc, seq_scale(coeffs[i], r.basis[i].first.rep()));
  return project(std::move(acc), r.basis[0].first.family())
      .with_presentation(linear_presentation{r.tag, coeffs});
}

inline section conjugate_mt(double a, section r) {
  if (a == 0.0) throw zero_scalar("mt conjugation requires a nonzero scalar");
  return section(mt_conjugated_section{a, std::make_shared<const section>(std::move(r))});
}

inline section conjugate_ad(expr e, section r) {
  if (contains_n(e)) throw shape_error("ad conjugation requires an n-free shift");
  return section(ad_conjugated_section{std::move(e),
                                       std::make_shared<const section>(std::move(r))});
}

inline patched_section make_patched(std::vector<std::pair<hyper_element, fun_seq>> patches,
                                    window match_window) {
  return patched_section{nullptr, std::move(patches), match_window};
}

// ---------------------------------------------------------------- applying --

inline fun_seq section_apply(const section& r, const hyper_element& f);

namespace detail {

inline fun_seq apply_basis_linear(const basis_linear_section& r, const hyper_element& f) {
  const auto& pres = f.presentation();
  if (!pres || pres->basis_tag != r.tag || pres->coeffs.size() != r.basis.size())
    throw out_of_domain(
        "basis-linear section: element carries no decomposition over basis '" + r.tag + "'");
  detail::require_same_family(f, r.basis[0].first, "basis-linear section");
  fun_seq acc = seq_scale(pres->coeffs[0], r.basis[0].second);
  for (std::size_t i = 1; i < r.basis.size(); ++i)
    acc = seq_add(acc, seq_scale(pres->coeffs[i], r.basis[i].second));
  return acc;
}

inline fun_seq apply_smoothing(const smoothing_section& r, const hyper_element& f) {
  fun_seq rep = f.rep();
  smoothing_section cfg = r;
  std::string label = "smoothed(" + rep.describe() + ")";
  return fun_seq::from_generator(
      [rep, cfg](long long i) {
        const double h = cfg.half_width(i);
        return bernstein_approx(rep.term(i), -h, h, cfg.degree(i), i);
      },
      std::move(label), /*certified_differentiable=*/true);
}

inline fun_seq apply_patched(const patched_section& r, const hyper_element& f) {
  for (const auto& [cls, override_rep] : r.patches) {
    if (!families_equal(cls.family(), f.family())) continue;
    if (hyper_equal(cls, f, r.match_window).holds()) return override_rep;
  }
  if (r.base) return section_apply(*r.base, f);
  return f.rep();
}

inline fun_seq apply_mt(const mt_conjugated_section& r, const hyper_element& f) {
  hyper_element scaled = hyper_scale(1.0 / r.a, f);
  return seq_scale(r.a, section_apply(*r.inner, scaled));
}

inline fun_seq apply_ad(const ad_conjugated_section& r, const hyper_element& f) {
  expr s = simplify(r.shift);
  if (s.kind() == expr_kind::constant && s.value().is_zero())
    return section_apply(*r.inner, f);
  hyper_element shifted =
      hyper_sub(f, project(embed_stable(r.shift), f.family()));
  return seq_add(section_apply(*r.inner, shifted), embed_stable(r.shift));
}

}  // namespace detail

// Chooses a representative of f according to the strategy. The section law
// (projecting the result lands back in f's class) is a tested property of
// every strategy, not an assumption.
inline fun_seq section_apply(const section& r, const hyper_element& f) {
  return std::visit(
      [&](const auto& s) -> fun_seq {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, rep_section>) {
          return f.rep();
        } else if constexpr (std::is_same_v<T, basis_linear_section>) {
          return detail::apply_basis_linear(s, f);
        } else if constexpr (std::is_same_v<T, smoothing_section>) {
          return detail::apply_smoothing(s, f);
        } else if constexpr (std::is_same_v<T, patched_section>) {
          return detail::apply_patched(s, f);
        } else if constexpr (std::is_same_v<T, mt_conjugated_section>) {
          return detail::apply_mt(s, f);
        } else {
          return detail::apply_ad(s, f);
        }
      },
      r.get());
}

// ---------------------------------------------------- lifted differentiation --

// Coordinatewise derivative with cutoff semantics: terms before the cutoff
// are replaced by the zero function, terms from the cutoff on are symbolic
// derivatives. Exists only when some cutoff makes the whole tail
// differentiable.
struct lifted_derivative {
  fun_seq result;
  long long cutoff;  // first index whose term (and all later) is differentiable
};

inline lifted_derivative lift_partial_derivative(const fun_seq& f, long long max_scan = 64) {
  if (max_scan < 1) throw shape_error("max_scan must be >= 1");

  if (const auto* es = std::get_if<expr_seq>(&f.get())) {
    // One symbolic check covers every index: substituting n never removes an
    // x-dependent subterm, so differentiability cannot begin at a later index.
    diff_result d = differentiate(es->e);
    if (!d.ok())
      throw undefined_derivative("no term of the sequence is differentiable: |.| applied to " +
                                 to_string(*d.offending));
    return {fun_seq::from_expr(*d.derivative), 1};
  }

  if (const auto* ls = std::get_if<list_seq>(&f.get())) {
    diff_result tail = differentiate(ls->tail);
    if (!tail.ok())
      throw undefined_derivative("the closed-form tail is not differentiable: |.| applied to " +
                                 to_string(*tail.offending));
    long long cutoff = 1;
    std::vector<expr> head;
    head.reserve(ls->head.size());
    std::vector<std::optional<expr>> head_derivs(ls->head.size());
    for (std::size_t i = 0; i < ls->head.size(); ++i) {
      diff_result d = differentiate(ls->head[i]);
      if (d.ok()) {
        head_derivs[i] = *d.derivative;
      } else {
        cutoff = static_cast<long long>(i) + 2;  // first good index is the next one
      }
    }
    if (cutoff > max_scan)
      throw undefined_derivative("no differentiable tail within the scan limit");
    for (std::size_t i = 0; i < ls->head.size(); ++i) {
      if (static_cast<long long>(i) + 1 < cutoff)
        head.push_back(constant(0LL));
      else
        head.push_back(*head_derivs[i]);
    }
    return {fun_seq::from_list(std::move(head), *tail.derivative), cutoff};
  }

  const auto& gs = std::get<gen_seq>(f.get());
  if (!gs.certified_differentiable)
    throw undefined_derivative(
        "generated sequence carries no differentiability certificate; a finite scan cannot "
        "establish a differentiable tail");
  fun_seq fc = f;
  fun_seq out = fun_seq::from_generator(
      [fc](long long i) {
        diff_result d = differentiate(fc.term(i));
        if (!d.ok())
          throw undefined_derivative("certified sequence produced a non-differentiable term");
        return *d.derivative;
      },
      "d/dx " + gs.label, true);
  return {std::move(out), 1};
}

// ------------------------------------------------------ sectional derivative --

// Differentiate the section-chosen representative coordinatewise and project
// back. The result depends on the section; that dependence is the point.
inline hyper_element sectional_derivative(const section& r, const hyper_element& f,
                                          long long max_scan = 64) {
  fun_seq rep = section_apply(r, f);
  lifted_derivative d = lift_partial_derivative(rep, max_scan);
  return project(std::move(d.result), f.family());
}

// ----------------------------------------------------------- irregularity --

// The two decisions that exhibit differentiation as representative-dependent:
// a null sequence whose coordinatewise derivatives are anything but null.
struct irregularity_report {
  fun_seq f;
  fun_seq g;
  decision base_equivalent;        // f vs g
  decision derivative_equivalent;  // df vs dg
};

inline irregularity_report irregularity_demo(const seminorm_family& q, const window& w) {
  fun_seq f = fun_seq::from_expr(parse("(1/2)^n * sin(2^n * x)"));
  fun_seq g = fun_seq::from_expr(parse("0"));
  fun_seq df = lift_partial_derivative(f).result;
  fun_seq dg = lift_partial_derivative(g).result;
  irregularity_report rep{f, g, equivalent(f, g, q, w), equivalent(df, dg, q, w)};
  return rep;
}

// ---------------------------------------------------------------- constancy --

// Realization of the constancy criterion: when the sectional derivative is
// null, the section's output should take equivalent values at any two points.
struct constancy_result {
  decision derivative_null;            // null check of the sectional derivative
  bool precondition_ok = false;        // derivative_null.holds()
  std::vector<decision> pair_checks;   // per (c, d) pair, under the abs family
  verdict overall = verdict::inconclusive;
};

inline constancy_result constancy_check(const hyper_element& f, const section& r,
                                        const std::vector<std::pair<double, double>>& points,
                                        const window& w, long long max_scan = 64) {
  constancy_result out;
  hyper_element deriv = sectional_derivative(r, f, max_scan);
  out.derivative_null = null_check(deriv.rep(), f.family(), w);
  out.precondition_ok = out.derivative_null.holds();
  if (!out.precondition_ok) {
    out.overall = out.derivative_null.v;
    return out;
  }

  fun_seq h = section_apply(r, f);
  seminorm_family absq = abs_family();
  out.overall = verdict::holds;
  for (const auto& [c, d] : points) {
    const double cc = c, dd = d;
    fun_seq gaps = fun_seq::from_generator(
        [h, cc, dd](long long i) {
          expr term = h.term(i);
          return constant(eval(term, cc, i) - eval(term, dd, i));
        },
        "value gap", true);
    decision dec = null_check(gaps, absq, w);
    if (dec.fails())
      out.overall = verdict::fails;
    else if (dec.v == verdict::inconclusive && out.overall == verdict::holds)
      out.overall = verdict::inconclusive;
    out.pair_checks.push_back(std::move(dec));
  }
  return out;
}

// ------------------------------------------------------------- value checks --

namespace detail {

// Draw an evaluation point where all listed expressions are defined.
inline std::optional<std::pair<double, long long>> draw_point(
    rng& gen, const std::vector<const expr*>& exprs, long long n_max) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = gen.uniform(-2.0, 2.0);
    const long long n = gen.uniform_int(1, n_max);
    bool ok = true;
    for (const expr* e : exprs) {
      try {
        const double v = eval(*e, x, n);
        if (!std::isfinite(v)) { ok = false; break; }
      } catch (const domain_error&) {
        ok = false;
        break;
      }
    }
    if (ok) return std::make_pair(x, n);
  }
  return std::nullopt;
}

inline decision value_agreement(const expr& lhs, const expr& rhs, const char* label,
                                int points, double tol, long long n_max) {
  rng gen;
  decision d;
  probe_trace tr;
  tr.probe_label = label;
  int sampled = 0;
  double worst = 0.0;
  long long worst_at = 0;
  std::vector<const expr*> need{&lhs, &rhs};
  for (int k = 0; k < points; ++k) {
    auto pt = draw_point(gen, need, n_max);
    if (!pt) continue;
    const auto [x, n] = *pt;
    const double a = eval(lhs, x, n);
    const double b = eval(rhs, x, n);
    const double err = std::fabs(a - b) / (1.0 + std::fabs(a));
    ++sampled;
    tr.values.emplace_back(n, err);
    if (err > worst) { worst = err; worst_at = n; }
  }
  tr.tail_max = worst;
  tr.head_max = worst;
  tr.tail_argmax = worst_at;
  if (sampled == 0) {
    tr.v = verdict::inconclusive;
    d.v = verdict::inconclusive;
  } else if (worst <= tol) {
    tr.v = verdict::holds;
    d.v = verdict::holds;
  } else {
    tr.v = verdict::fails;
    d.v = verdict::fails;
    d.witness_probe = tr.probe_label;
    d.witness_index = worst_at;
    d.witness_value = worst;
  }
  d.traces.push_back(std::move(tr));
  return d;
}

}  // namespace detail

// Product rule in value: d(f*g) against (df)*g + f*(dg) at random points.
inline decision check_leibniz(const expr& f, const expr& g) {
  diff_result df = differentiate(f);
  if (!df.ok())
    throw nondifferentiable_error("left factor is not differentiable: |.| applied to " +
                                  to_string(*df.offending));
  diff_result dg = differentiate(g);
  if (!dg.ok())
    throw nondifferentiable_error("right factor is not differentiable: |.| applied to " +
                                  to_string(*dg.offending));
  diff_result dfg = differentiate(mul(f, g));
  expr lhs = *dfg.derivative;
  expr rhs = add(mul(*df.derivative, g), mul(f, *dg.derivative));
  return detail::value_agreement(lhs, rhs, "leibniz", 100, 1e-9, 6);
}

// Linearity in value: d(a*f + b*g) against a*df + b*dg at random points.
inline decision check_linearity(const expr& f, const expr& g, double a, double b) {
  diff_result df = differentiate(f);
  if (!df.ok())
    throw nondifferentiable_error("left summand is not differentiable");
  diff_result dg = differentiate(g);
  if (!dg.ok())
    throw nondifferentiable_error("right summand is not differentiable");
  expr combo = add(mul(constant(a), f), mul(constant(b), g));
  diff_result dc = differentiate(combo);
  expr rhs = add(mul(constant(a), *df.derivative), mul(constant(b), *dg.derivative));
  return detail::value_agreement(*dc.derivative, rhs, "linearity", 100, 1e-9, 6);
}

}  // namespace extrafun
