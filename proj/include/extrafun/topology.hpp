#pragma once
// Neighborhood membership predicates for the locally defined and uniform
// topologies, at three levels: single functions, sequences, and classes.
// The existential quantifiers in the definitions (a margin k, a cutoff
// index) are materialized as explicit arguments so every predicate is
// decidable over the observation window.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "hyperspace.hpp"
#include "seminorm.hpp"

namespace extrafun {

// One positive radius per probe.
struct local_radii {
  std::vector<double> r;

  explicit local_radii(std::vector<double> radii) : r(std::move(radii)) {
    for (double x : r)
      if (!(x > 0)) throw shape_error("local radii must be positive");
  }
};

// Shared radius with an explicit positive margin below it.
struct uniform_radius {
  double r;
  double k;

  uniform_radius(double r_, double k_) : r(r_), k(k_) {
    if (!(k > 0 && k < r)) throw shape_error("uniform radius requires 0 < k < r");
  }
};

namespace detail {

inline void require_radii_match(const local_radii& n, const seminorm_family& q) {
  if (n.r.size() != q.size())
    throw shape_error("radii count (" + std::to_string(n.r.size()) +
                      ") does not match probe count (" + std::to_string(q.size()) + ")");
}

}  // namespace detail

// ------------------------------------------------------- single functions --

// g lies in the locally defined neighborhood of l: every probe value of the
// difference is below that probe's radius.
inline bool in_local_nbhd_point(const expr& g, const expr& l, const local_radii& n,
                                const seminorm_family& q) {
  detail::require_radii_match(n, q);
  if (contains_n(g) || contains_n(l))
    throw shape_error("point-level membership applies to n-free expressions");
  expr d = sub(l, g);
  for (std::size_t t = 0; t < q.size(); ++t)
    if (!(seminorm_value(q.probes()[t], d, 1) < n.r[t])) return false;
  return true;
}

// g lies in the uniform neighborhood of l: the family sup of the difference
// stays below r by at least the margin k.
inline bool in_uniform_nbhd_point(const expr& g, const expr& l, const uniform_radius& u,
                                  const seminorm_family& q) {
  if (contains_n(g) || contains_n(l))
    throw shape_error("point-level membership applies to n-free expressions");
  return family_sup(q, sub(l, g), 1) < u.r - u.k;
}

// --------------------------------------------------------------- sequences --

namespace detail {

// Shared engine for sequence-level membership. Per probe, with bound
// r_t - k_t: Holds when every sampled index obeys the bound, Fails when the
// entire tail quarter violates it (a persistent escape), else Inconclusive.
inline decision membership_check(const fun_seq& g, const fun_seq& f,
                                 const std::vector<double>& bounds,
                                 const seminorm_family& q, const window& w) {
  decision d;
  d.v = verdict::holds;
  fun_seq diff = seq_sub(f, g);
  const long long m = w.quarter();
  for (std::size_t t = 0; t < q.size(); ++t) {
    const double bound = bounds[t];
    probe_trace tr;
    tr.probe_label = probe_name(q.probes()[t]);
    tr.values.reserve(static_cast<std::size_t>(w.end - w.start + 1));
    for (long long i = w.start; i <= w.end; ++i)
      tr.values.emplace_back(i, seminorm_value(q.probes()[t], diff.term(i), i));

    const long long count = static_cast<long long>(tr.values.size());
    for (long long j = 0; j < m && j < count; ++j)
      tr.head_max = std::max(tr.head_max, tr.values[static_cast<std::size_t>(j)].second);

    bool all_within = true;
    bool tail_all_violate = true;
    tr.tail_max = 0.0;
    tr.tail_argmax = w.end;
    for (long long j = 0; j < count; ++j) {
      const auto& [idx, val] = tr.values[static_cast<std::size_t>(j)];
      if (!(val < bound)) all_within = false;
      if (j >= count - m) {
        if (val >= tr.tail_max) { tr.tail_max = val; tr.tail_argmax = idx; }
        if (val < bound) tail_all_violate = false;
      }
    }
    tr.v = all_within ? verdict::holds
                      : (tail_all_violate ? verdict::fails : verdict::inconclusive);

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

}  // namespace detail

// g lies in the locally defined neighborhood of the sequence f, with radius
// r_t and margin k_t per probe: the effective bound is r_t - k_t.
inline decision in_local_nbhd_seq(const fun_seq& g, const fun_seq& f, const local_radii& n,
                                  const std::vector<double>& margins,
                                  const seminorm_family& q, const window& w) {
  detail::require_radii_match(n, q);
  if (margins.size() != q.size())
    throw shape_error("margin count does not match probe count");
  std::vector<double> bounds(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    if (!(margins[t] > 0 && margins[t] < n.r[t]))
      throw shape_error("margins must satisfy 0 < k_t < r_t");
    bounds[t] = n.r[t] - margins[t];
  }
  return detail::membership_check(g, f, bounds, q, w);
}

// Uniform variant: one shared radius and margin for every probe.
inline decision in_uniform_nbhd_seq(const fun_seq& g, const fun_seq& f,
                                    const uniform_radius& u, const seminorm_family& q,
                                    const window& w) {
  std::vector<double> bounds(q.size(), u.r - u.k);
  return detail::membership_check(g, f, bounds, q, w);
}

// ----------------------------------------------------------------- classes --

// Class-level membership routes through the stored representatives; that the
// verdict does not depend on the chosen representative is a tested property,
// not an assumption.
inline decision in_nbhd_hyper(const hyper_element& g, const hyper_element& f,
                              const local_radii& n, const std::vector<double>& margins,
                              const window& w) {
  detail::require_same_family(g, f, "in_nbhd_hyper");
  return in_local_nbhd_seq(g.rep(), f.rep(), n, margins, f.family(), w);
}

inline decision in_uniform_nbhd_hyper(const hyper_element& g, const hyper_element& f,
                                      const uniform_radius& u, const window& w) {
  detail::require_same_family(g, f, "in_uniform_nbhd_hyper");
  return in_uniform_nbhd_seq(g.rep(), f.rep(), u, f.family(), w);
}

// Constructive two-sided separation: a probe that keeps the two classes
// apart, the gap it certifies, and the radius of the two disjoint uniform
// neighborhoods built from it.
struct hausdorff_witness {
  probe p;
  std::string probe_label;
  double k;                                // separation gap
  double radius;                           // k / 4
  std::vector<long long> witness_indices;  // sampled i with q(f_i - g_i) > k
};

// Find a probe whose values of |f_i - g_i| stay bounded away from zero over
// the whole tail quarter. The gap k is half the smallest tail value of the
// best such probe, so every tail index witnesses q > k; the two uniform
// neighborhoods of radius k/4 around f and g are then disjoint.
inline hausdorff_witness separation_witness(const hyper_element& f, const hyper_element& g,
                                            const window& w) {
  detail::require_same_family(f, g, "separation_witness");
  fun_seq diff = seq_sub(f.rep(), g.rep());
  const seminorm_family& q = f.family();
  const long long m = w.quarter();

  std::optional<std::size_t> best;
  double best_tail_min = 0.0;
  std::vector<std::vector<double>> all_values(q.size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    std::vector<double>& vals = all_values[t];
    vals.reserve(static_cast<std::size_t>(w.end - w.start + 1));
    for (long long i = w.start; i <= w.end; ++i)
      vals.push_back(seminorm_value(q.probes()[t], diff.term(i), i));
    double tail_min = std::numeric_limits<double>::infinity();
    const long long count = static_cast<long long>(vals.size());
    for (long long j = count - m; j < count; ++j)
      tail_min = std::min(tail_min, vals[static_cast<std::size_t>(j)]);
    if (tail_min >= w.epsilon && (!best || tail_min > best_tail_min)) {
      best = t;
      best_tail_min = tail_min;
    }
  }

  if (!best)
    throw not_separable("no probe keeps the two classes apart over the window tail");

  hausdorff_witness out{q.probes()[*best], probe_name(q.probes()[*best]),
                        best_tail_min / 2.0, best_tail_min / 8.0, {}};
  const std::vector<double>& vals = all_values[*best];
  for (long long i = w.start; i <= w.end; ++i)
    if (vals[static_cast<std::size_t>(i - w.start)] > out.k) out.witness_indices.push_back(i);
  return out;
}

}  // namespace extrafun
