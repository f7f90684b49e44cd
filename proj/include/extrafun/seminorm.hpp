#pragma once
// Finite probe families realizing seminorm systems. Each probe computes one
// seminorm value q(f) for an expression f at a fixed sequence index n; a
// family is an ordered, variant-homogeneous list of probes. All decisions
// elsewhere in the library are relative to such a family, never to the
// uncountable index sets they stand in for.

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"

namespace extrafun {

// |f(x)| at one sample point.
struct point_probe {
  double x;
};

// Grid max of |f| over `grid` equally spaced points on [a, b], endpoints
// included. A documented approximation of the true sup: refining the grid
// can only grow the value.
struct interval_probe {
  double a, b;
  long long grid;  // >= 2
};

// |composite Simpson integral of f*g over [a, b]| with `quad_nodes`
// subintervals, rounded up to the next even count.
struct testfn_probe {
  expr g;
  double a, b;
  long long quad_nodes;  // >= 2 after rounding
};

// Absolute value of a number sequence: f must not depend on x.
struct abs_probe {};

using probe = std::variant<point_probe, interval_probe, testfn_probe, abs_probe>;

inline std::string probe_name(const probe& p) {
  return std::visit(
      [](const auto& q) -> std::string {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, point_probe>) {
          return "point(" + detail::format_double(q.x) + ")";
        } else if constexpr (std::is_same_v<T, interval_probe>) {
          return "sup[" + detail::format_double(q.a) + ", " + detail::format_double(q.b) +
                 "]/" + std::to_string(q.grid);
        } else if constexpr (std::is_same_v<T, testfn_probe>) {
          return "testfn(" + to_string(q.g) + ")[" + detail::format_double(q.a) + ", " +
                 detail::format_double(q.b) + "]/" + std::to_string(q.quad_nodes);
        } else {
          return "abs";
        }
      },
      p);
}

inline void validate_probe(const probe& p) {
  if (const auto* ip = std::get_if<interval_probe>(&p)) {
    if (!(ip->a < ip->b)) throw shape_error("interval probe requires a < b");
    if (ip->grid < 2) throw shape_error("interval probe requires at least 2 grid points");
  } else if (const auto* tp = std::get_if<testfn_probe>(&p)) {
    if (!(tp->a < tp->b)) throw shape_error("test-function probe requires a < b");
    if (tp->quad_nodes < 1) throw shape_error("test-function probe requires at least 1 subinterval");
  }
}

// Structural identity, used when checking that two classes live in the same
// family. Labels are display-only and excluded.
inline bool probes_equal(const probe& p, const probe& q) {
  if (p.index() != q.index()) return false;
  if (const auto* a = std::get_if<point_probe>(&p))
    return a->x == std::get<point_probe>(q).x;
  if (const auto* a = std::get_if<interval_probe>(&p)) {
    const auto& b = std::get<interval_probe>(q);
    return a->a == b.a && a->b == b.b && a->grid == b.grid;
  }
  if (const auto* a = std::get_if<testfn_probe>(&p)) {
    const auto& b = std::get<testfn_probe>(q);
    return a->a == b.a && a->b == b.b && a->quad_nodes == b.quad_nodes &&
           identical(a->g, b.g);
  }
  return true;  // abs_probe carries no data
}

// Ordered list of probes, all of the same variant. Order is part of the
// family's identity so that evidence traces are reproducible.
class seminorm_family {
 public:
  seminorm_family(std::vector<probe> probes, std::string label)
      : probes_(std::move(probes)), label_(std::move(label)) {
    if (probes_.empty()) throw shape_error("seminorm family must be non-empty");
    for (const probe& p : probes_) {
      validate_probe(p);
      if (p.index() != probes_.front().index())
        throw shape_error("seminorm family mixes probe variants");
    }
  }

  const std::vector<probe>& probes() const { return probes_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return probes_.size(); }
  bool is_abs() const { return std::holds_alternative<abs_probe>(probes_.front()); }

 private:
  std::vector<probe> probes_;
  std::string label_;
};

inline bool families_equal(const seminorm_family& a, const seminorm_family& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!probes_equal(a.probes()[i], b.probes()[i])) return false;
  return true;
}

namespace detail {

inline double simpson_integral(const expr& f, const expr& g, double a, double b,
                               long long subintervals, long long n) {
  long long m = subintervals;
  if (m % 2 != 0) ++m;  // composite Simpson needs an even count
  const double h = (b - a) / static_cast<double>(m);
  auto fg = [&](double x) { return eval(f, x, n) * eval(g, x, n); };
  double acc = fg(a) + fg(b);
  for (long long j = 1; j < m; ++j) {
    const double x = a + h * static_cast<double>(j);
    acc += (j % 2 == 1 ? 4.0 : 2.0) * fg(x);
  }
  return acc * h / 3.0;
}

}  // namespace detail

inline double seminorm_value(const probe& p, const expr& f, long long n) {
  return std::visit(
      [&](const auto& q) -> double {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, point_probe>) {
          return std::fabs(eval(f, q.x, n));
        } else if constexpr (std::is_same_v<T, interval_probe>) {
          double best = 0.0;
          for (long long j = 0; j < q.grid; ++j) {
            const double x = q.a + (q.b - q.a) * (static_cast<double>(j) /
                                                  static_cast<double>(q.grid - 1));
            const double v = std::fabs(eval(f, x, n));
            if (v > best) best = v;
          }
          return best;
        } else if constexpr (std::is_same_v<T, testfn_probe>) {
          return std::fabs(detail::simpson_integral(f, q.g, q.a, q.b, q.quad_nodes, n));
        } else {
          if (contains_x(f))
            throw shape_error("abs probe applies to number sequences; expression depends on x");
          return std::fabs(eval(f, 0.0, n));
        }
      },
      p);
}

inline double family_sup(const seminorm_family& q, const expr& f, long long n) {
  double best = 0.0;
  for (const probe& p : q.probes()) {
    const double v = seminorm_value(p, f, n);
    if (v > best) best = v;
  }
  return best;
}

// ---------------------------------------------------------------- builders --

inline seminorm_family pointwise_family(const std::vector<double>& xs,
                                        std::string label = "pointwise") {
  std::vector<probe> ps;
  ps.reserve(xs.size());
  for (double x : xs) ps.push_back(point_probe{x});
  return seminorm_family(std::move(ps), std::move(label));
}

inline seminorm_family compact_sup_family(
    const std::vector<std::pair<double, double>>& intervals, long long grid = 1001,
    std::string label = "compact-sup") {
  std::vector<probe> ps;
  ps.reserve(intervals.size());
  for (const auto& [a, b] : intervals) ps.push_back(interval_probe{a, b, grid});
  return seminorm_family(std::move(ps), std::move(label));
}

inline seminorm_family abs_family(std::string label = "abs") {
  return seminorm_family({abs_probe{}}, std::move(label));
}

inline seminorm_family testfn_family(const std::vector<expr>& gs, double a, double b,
                                     long long quad_nodes = 128,
                                     std::string label = "testfn") {
  std::vector<probe> ps;
  ps.reserve(gs.size());
  for (const expr& g : gs) ps.push_back(testfn_probe{g, a, b, quad_nodes});
  return seminorm_family(std::move(ps), std::move(label));
}

}  // namespace extrafun
