#pragma once
// Command implementations behind the `extrafun` binary: config parsing,
// evidence-trace reports, the end-to-end demos, and the property suites.
// Kept in the library so tests can drive commands without spawning processes.
//
// Exit codes: 0 success/Holds, 1 Fails (or a failed property suite),
// 2 syntax error, 3 domain error, 4 Inconclusive, 5 configuration error.

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bundle.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "hyperspace.hpp"
#include "random.hpp"
#include "seminorm.hpp"
#include "topology.hpp"

namespace extrafun::cli {

using nlohmann::json;

inline constexpr int exit_holds = 0;
inline constexpr int exit_fails = 1;
inline constexpr int exit_syntax = 2;
inline constexpr int exit_domain = 3;
inline constexpr int exit_inconclusive = 4;
inline constexpr int exit_config = 5;

inline int exit_code_for(verdict v) {
  switch (v) {
    case verdict::holds: return exit_holds;
    case verdict::fails: return exit_fails;
    default: return exit_inconclusive;
  }
}

// ----------------------------------------------------------------- config --

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& ctx) {
  if (!j.is_object()) throw config_error(ctx + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw config_error(ctx + ": unknown key '" + key + "'");
  }
}

inline double number_at(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error(ctx + ": missing numeric '" + std::string(key) + "'");
  return j[key].get<double>();
}

inline fun_seq parse_seq(const json& j, const std::string& ctx) {
  check_keys(j, {"kind", "src", "head", "tail"}, ctx);
  const std::string kind = j.value("kind", "");
  if (kind == "expr") {
    if (!j.contains("src") || !j["src"].is_string())
      throw config_error(ctx + ": expr sequence needs a 'src' string");
    return fun_seq::from_expr(parse(j["src"].get<std::string>()));
  }
  if (kind == "list") {
    if (!j.contains("head") || !j["head"].is_array() || !j.contains("tail") ||
        !j["tail"].is_string())
      throw config_error(ctx + ": list sequence needs 'head' (array) and 'tail' (string)");
    std::vector<expr> head;
    for (const auto& h : j["head"]) {
      if (!h.is_string()) throw config_error(ctx + ": head entries must be strings");
      head.push_back(parse(h.get<std::string>()));
    }
    return fun_seq::from_list(std::move(head), parse(j["tail"].get<std::string>()));
  }
  throw config_error(ctx + ": sequence kind must be 'expr' or 'list'");
}

inline seminorm_family parse_family(const json& j) {
  const std::string ctx = "family";
  check_keys(j, {"kind", "intervals", "grid", "points", "tests", "interval", "nodes", "label"},
             ctx);
  const std::string kind = j.value("kind", "");
  const std::string label = j.value("label", kind);
  if (kind == "compact-sup") {
    if (!j.contains("intervals") || !j["intervals"].is_array() || j["intervals"].empty())
      throw config_error(ctx + ": compact-sup needs a non-empty 'intervals' array");
    std::vector<std::pair<double, double>> intervals;
    for (const auto& iv : j["intervals"]) {
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
        throw config_error(ctx + ": each interval must be [a, b]");
      intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    }
    const long long grid = j.value("grid", 1001);
    return compact_sup_family(intervals, grid, label);
  }
  if (kind == "pointwise") {
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
      throw config_error(ctx + ": pointwise needs a non-empty 'points' array");
    std::vector<double> pts;
    for (const auto& p : j["points"]) {
      if (!p.is_number()) throw config_error(ctx + ": points must be numbers");
      pts.push_back(p.get<double>());
    }
    return pointwise_family(pts, label);
  }
  if (kind == "abs") return abs_family(label);
  if (kind == "testfn") {
    if (!j.contains("tests") || !j["tests"].is_array() || j["tests"].empty())
      throw config_error(ctx + ": testfn needs a non-empty 'tests' array");
    if (!j.contains("interval") || !j["interval"].is_array() || j["interval"].size() != 2)
      throw config_error(ctx + ": testfn needs 'interval': [a, b]");
    std::vector<expr> gs;
    for (const auto& g : j["tests"]) {
      if (!g.is_string()) throw config_error(ctx + ": tests must be expression strings");
      gs.push_back(parse(g.get<std::string>()));
    }
    const long long nodes = j.value("nodes", 128);
    return testfn_family(gs, j["interval"][0].get<double>(), j["interval"][1].get<double>(),
                         nodes, label);
  }
  throw config_error(ctx + ": kind must be compact-sup, pointwise, abs, or testfn");
}

inline window parse_window(const json& j) {
  check_keys(j, {"start", "end", "epsilon"}, "window");
  const auto start = static_cast<long long>(number_at(j, "start", "window"));
  const auto end = static_cast<long long>(number_at(j, "end", "window"));
  const double eps = number_at(j, "epsilon", "window");
  try {
    return window(start, end, eps);
  } catch (const shape_error& e) {
    throw config_error(std::string("window: ") + e.what());
  }
}

// "START:END:EPS" from the --window flag.
inline window parse_window_flag(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw config_error("--window expects START:END:EPS");
  try {
    return window(std::stoll(s.substr(0, c1)), std::stoll(s.substr(c1 + 1, c2 - c1 - 1)),
                  std::stod(s.substr(c2 + 1)));
  } catch (const shape_error& e) {
    throw config_error(std::string("--window: ") + e.what());
  } catch (const std::exception&) {
    throw config_error("--window expects START:END:EPS with numeric fields");
  }
}

struct section_config {
  section sec;
  std::optional<std::vector<double>> coeffs;  // basis-linear presentation
  std::optional<basis_linear_section> basis;  // kept for span_element
};

inline section_config parse_section(const json& j, const seminorm_family& family,
                                    const window& w) {
  const std::string ctx = "section";
  check_keys(j, {"kind", "cap", "scale", "overrides", "basis", "coeffs"}, ctx);
  const std::string kind = j.value("kind", "rep");
  if (kind == "rep") return {section(rep_section{}), std::nullopt, std::nullopt};
  if (kind == "smoothing") {
    smoothing_section s;
    s.cap = j.value("cap", s.cap);
    s.scale = j.value("scale", s.scale);
    if (s.cap < 1 || !(s.scale > 0))
      throw config_error(ctx + ": smoothing needs cap >= 1 and scale > 0");
    return {section(s), std::nullopt, std::nullopt};
  }
  if (kind == "patched") {
    if (!j.contains("overrides") || !j["overrides"].is_array() || j["overrides"].empty())
      throw config_error(ctx + ": patched needs a non-empty 'overrides' array");
    std::vector<std::pair<hyper_element, fun_seq>> patches;
    for (const auto& ov : j["overrides"]) {
      check_keys(ov, {"class", "rep"}, ctx + ".overrides");
      if (!ov.contains("class") || !ov.contains("rep"))
        throw config_error(ctx + ": each override needs 'class' and 'rep' sequences");
      patches.emplace_back(project(parse_seq(ov["class"], ctx + ".class"), family),
                           parse_seq(ov["rep"], ctx + ".rep"));
    }
    return {section(make_patched(std::move(patches), w)), std::nullopt, std::nullopt};
  }
  if (kind == "basis-linear") {
    if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].empty())
      throw config_error(ctx + ": basis-linear needs a non-empty 'basis' array");
    std::vector<std::pair<hyper_element, fun_seq>> basis;
    for (const auto& b : j["basis"]) {
      check_keys(b, {"class", "rep"}, ctx + ".basis");
      if (!b.contains("class"))
        throw config_error(ctx + ": each basis entry needs a 'class' sequence");
      fun_seq cls = parse_seq(b["class"], ctx + ".class");
      fun_seq rep = b.contains("rep") ? parse_seq(b["rep"], ctx + ".rep") : cls;
      basis.emplace_back(project(std::move(cls), family), std::move(rep));
    }
    basis_linear_section bl = make_basis_linear("config-basis", std::move(basis), w);
    std::optional<std::vector<double>> coeffs;
    if (j.contains("coeffs")) {
      if (!j["coeffs"].is_array())
        throw config_error(ctx + ": 'coeffs' must be an array of numbers");
      coeffs.emplace();
      for (const auto& c : j["coeffs"]) {
        if (!c.is_number()) throw config_error(ctx + ": 'coeffs' must be numbers");
        coeffs->push_back(c.get<double>());
      }
    }
    return {section(bl), std::move(coeffs), std::move(bl)};
  }
  throw config_error(ctx + ": kind must be rep, smoothing, patched, or basis-linear");
}

// ---------------------------------------------------------------- reports --

inline void print_trace_csv(std::ostream& out, const decision& d) {
  out << "probe,index,value\n";
  for (const probe_trace& tr : d.traces)
    for (const auto& [i, v] : tr.values)
      out << tr.probe_label << ',' << i << ',' << detail::format_double(v) << '\n';
}

inline void print_decision_text(std::ostream& out, const decision& d, const window& w) {
  const long long m = w.quarter();
  for (const probe_trace& tr : d.traces) {
    out << "probe " << tr.probe_label << ": " << verdict_name(tr.v)
        << "  (head max " << detail::format_double(tr.head_max) << ", tail max "
        << detail::format_double(tr.tail_max) << " at i=" << tr.tail_argmax << ")\n";
    const long long count = static_cast<long long>(tr.values.size());
    out << "  tail:";
    for (long long j = count - m; j < count; ++j) {
      if (j < 0) continue;
      const auto& [i, v] = tr.values[static_cast<std::size_t>(j)];
      out << "  i=" << i << " " << detail::format_double(v);
    }
    out << '\n';
  }
  out << "verdict: " << verdict_name(d.v) << '\n';
  if (d.fails() && d.witness_probe)
    out << "witness: probe " << *d.witness_probe << ", i=" << *d.witness_index << ", value "
        << detail::format_double(*d.witness_value) << '\n';
}

inline void print_decision(std::ostream& out, const decision& d, const window& w,
                           const std::string& format) {
  if (format == "csv")
    print_trace_csv(out, d);
  else
    print_decision_text(out, d, w);
}

// ----------------------------------------------------------------- cmd_eval --

inline int run_eval(const std::string& src, double x, long long n, std::ostream& out) {
  const expr e = parse(src);
  out << detail::format_double(eval(e, x, n)) << '\n';
  return exit_holds;
}

// ---------------------------------------------------------------- cmd_equiv --

inline int run_equiv(const fun_seq& f, const fun_seq& g, const seminorm_family& family,
                     const window& w, const std::string& format, std::ostream& out) {
  decision d = equivalent(f, g, family, w);
  if (format != "csv")
    out << "equivalence of " << f.describe() << " and " << g.describe() << " under "
        << family.label() << ":\n";
  print_decision(out, d, w, format);
  return exit_code_for(d.v);
}

// ----------------------------------------------------------------- cmd_diff --

inline int run_diff(const hyper_element& f, const section& sec, const window& w,
                    const std::vector<long long>& indices, long long max_scan,
                    const std::optional<fun_seq>& compare, const std::string& format,
                    std::ostream& out) {
  hyper_element d = sectional_derivative(sec, f, max_scan);
  if (format == "csv") {
    out << "index,term\n";
    for (long long i : indices)
      out << i << ",\"" << to_string(simplify(d.rep().term(i))) << "\"\n";
  } else {
    out << "sectional derivative terms:\n";
    for (long long i : indices)
      out << "  i=" << i << ": " << to_string(simplify(d.rep().term(i))) << '\n';
  }
  if (!compare) return exit_holds;
  decision cmp = equivalent(d.rep(), *compare, f.family(), w);
  if (format != "csv") {
    out << "comparison against " << compare->describe() << ":\n";
    print_decision_text(out, cmp, w);
  } else {
    print_trace_csv(out, cmp);
  }
  return exit_code_for(cmp.v);
}

// ---------------------------------------------------------------- cmd_demo --

// Every demo prints what it expects and what it found, and exits 0 exactly
// when the predicted verdict pattern is reproduced.

inline int demo_irregularity(const seminorm_family& q, const window& w, std::ostream& out) {
  irregularity_report rep = irregularity_demo(q, w);
  out << "sequences: f = " << rep.f.describe() << ", g = " << rep.g.describe() << '\n';
  out << "f vs g (expected Holds):\n";
  print_decision_text(out, rep.base_equivalent, w);
  out << "df vs dg (expected Fails):\n";
  print_decision_text(out, rep.derivative_equivalent, w);
  const bool ok = rep.base_equivalent.holds() && rep.derivative_equivalent.fails();
  out << (ok ? "pattern (Holds, Fails) reproduced\n" : "PATTERN NOT REPRODUCED\n");
  return ok ? exit_holds : exit_fails;
}

inline int demo_nonadditive(std::ostream& out) {
  // A patched representative choice on the class of the constant 2 breaks
  // additivity: r(1) + r(1) and r(2) differ from the very first index.
  const window aw = abs_default_window();
  hyper_element one = hn(fun_seq::from_expr(parse("1")));
  hyper_element two = hn(fun_seq::from_expr(parse("2")));
  section sec{make_patched({{two, fun_seq::from_expr(parse("2 + 1/n"))}}, aw)};
  fun_seq r1 = section_apply(sec, one);
  fun_seq r2 = section_apply(sec, two);
  fun_seq lhs = seq_add(r1, r1);
  out << "r(1) + r(1) vs r(2), coordinates:\n";
  std::optional<long long> first_diff;
  for (long long i = 1; i <= 8; ++i) {
    const double a = eval(lhs.term(i), 0.0, i);
    const double b = eval(r2.term(i), 0.0, i);
    out << "  i=" << i << ": " << detail::format_double(a) << " vs "
        << detail::format_double(b) << '\n';
    if (!first_diff && std::fabs(a - b) > 1e-12) first_diff = i;
  }
  if (first_diff)
    out << "sequences differ; first differing index " << *first_diff << '\n';
  else
    out << "NO DIFFERENCE FOUND (additivity unexpectedly holds)\n";
  return first_diff ? exit_holds : exit_fails;
}

inline int demo_hausdorff(std::ostream& out) {
  const window w = default_window();
  seminorm_family q = compact_sup_family({{0.0, 1.0}});
  fun_seq f = fun_seq::from_expr(parse("cos(2^n * x)"));
  fun_seq g = fun_seq::from_expr(parse("0"));
  hyper_element F = project(f, q), G = project(g, q);
  hausdorff_witness hw = separation_witness(F, G, w);
  out << "witness probe " << hw.probe_label << ", gap k = " << detail::format_double(hw.k)
      << ", neighborhood radius " << detail::format_double(hw.radius) << ", "
      << hw.witness_indices.size() << " witness indices\n";
  // No convex mixture of the two representatives may sit in both
  // radius-k/4 uniform neighborhoods.
  const uniform_radius u(hw.radius, hw.radius / 10.0);
  int both = 0;
  const int samples = 100;
  for (int s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / (samples - 1);
    fun_seq cand = seq_add(seq_scale(t, f), seq_scale(1.0 - t, g));
    const bool in_f = in_uniform_nbhd_seq(cand, f, u, q, w).holds();
    const bool in_g = in_uniform_nbhd_seq(cand, g, u, q, w).holds();
    if (in_f && in_g) ++both;
  }
  out << both << " of " << samples
      << " sampled candidates lie in both neighborhoods (expected 0)\n";
  return (both == 0 && hw.radius > 0.1) ? exit_holds : exit_fails;
}

inline int demo_smoothing(std::ostream& out) {
  seminorm_family q = compact_sup_family({{-1.0, 1.0}});
  hyper_element F = project(embed_stable(parse("sin(x)")), q);
  section sec{smoothing_section{}};
  fun_seq smoothed = section_apply(sec, F);
  out << "per-term grid-sup error of the smoothed representative vs sin(x) on [-1, 1]:\n";
  for (long long i = 8; i <= 14; i += 2) {
    double err = 0.0;
    const expr term = smoothed.term(i);
    for (int j = 0; j <= 400; ++j) {
      const double x = -1.0 + 2.0 * j / 400.0;
      err = std::max(err, std::fabs(eval(term, x, i) - std::sin(x)));
    }
    out << "  i=" << i << " (degree " << smoothing_section{}.degree(i)
        << "): " << detail::format_double(err) << '\n';
  }
  const window w(8, 14, 2e-2);
  decision eq = hyper_equal(project(smoothed, q), F, w);
  out << "smoothed class vs original (expected Holds):\n";
  print_decision_text(out, eq, w);
  hyper_element d = sectional_derivative(sec, F);
  const double dv = eval(d.rep().term(12), 0.5, 12);
  out << "derivative of smoothed term 12 at x=0.5: " << detail::format_double(dv)
      << " (cos(0.5) = " << detail::format_double(std::cos(0.5)) << ")\n";
  const bool ok = eq.holds() && std::fabs(dv - std::cos(0.5)) < 0.05;
  return ok ? exit_holds : exit_fails;
}

inline int run_demo(const std::string& name, std::ostream& out) {
  if (name == "irregularity-compact")
    return demo_irregularity(compact_sup_family({{0.0, 1.0}}), default_window(), out);
  if (name == "irregularity-pointwise")
    return demo_irregularity(pointwise_family({0.3, 1.1}), default_window(), out);
  if (name == "nonadditive-section") return demo_nonadditive(out);
  if (name == "hausdorff-witness") return demo_hausdorff(out);
  if (name == "smoothing") return demo_smoothing(out);
  throw config_error("unknown demo '" + name +
                     "'; expected irregularity-compact, irregularity-pointwise, "
                     "nonadditive-section, hausdorff-witness, or smoothing");
}

// ---------------------------------------------------------------- cmd_check --

class check_reporter {
 public:
  explicit check_reporter(std::ostream& out) : out_(out) {}

  void record(const std::string& name, bool ok, const std::string& detail = "") {
    ++total_;
    if (!ok) ++failed_;
    out_ << (ok ? "  pass  " : "  FAIL  ") << name;
    if (!detail.empty()) out_ << "  [" << detail << "]";
    out_ << '\n';
  }

  int total() const { return total_; }
  int failed() const { return failed_; }

 private:
  std::ostream& out_;
  int total_ = 0;
  int failed_ = 0;
};

// Random n-free fixtures used by several suites.
inline std::vector<expr> fixture_pool() {
  std::vector<expr> pool;
  for (const char* s : {"sin(x)", "cos(x)", "x", "x^2", "exp(x/4)", "x^3 - x", "1",
                        "sin(2*x) + x/2", "cos(x)^2", "x/(1 + x^2)"})
    pool.push_back(parse(s));
  return pool;
}

inline void check_seminorm_axioms(check_reporter& rep) {
  rng gen;
  const std::vector<expr> pool = fixture_pool();
  std::vector<std::pair<std::string, seminorm_family>> families = {
      {"pointwise", pointwise_family({0.0, 0.5, 1.3})},
      {"compact-sup", compact_sup_family({{0.0, 1.0}, {-2.0, 2.0}})},
      {"testfn", testfn_family({parse("1"), parse("x")}, 0.0, 1.0, 128)},
  };
  for (const auto& [name, q] : families) {
    bool sub_ok = true, hom_ok = true, sym_ok = true;
    double worst_sub = 0.0, worst_hom = 0.0;
    for (int k = 0; k < 25; ++k) {
      const expr& f = pool[static_cast<std::size_t>(gen.uniform_int(0, static_cast<long long>(pool.size()) - 1))];
      const expr& g = pool[static_cast<std::size_t>(gen.uniform_int(0, static_cast<long long>(pool.size()) - 1))];
      const double c = gen.uniform(-3.0, 3.0);
      for (const probe& p : q.probes()) {
        const double qf = seminorm_value(p, f, 1);
        const double qg = seminorm_value(p, g, 1);
        const double qfg = seminorm_value(p, add(f, g), 1);
        worst_sub = std::max(worst_sub, qfg - (qf + qg));
        if (qfg > qf + qg + 1e-9) sub_ok = false;
        const double qcf = seminorm_value(p, mul(constant(c), f), 1);
        worst_hom = std::max(worst_hom, std::fabs(qcf - std::fabs(c) * qf));
        if (std::fabs(qcf - std::fabs(c) * qf) > 1e-9) hom_ok = false;
        if (seminorm_value(p, sub(f, g), 1) != seminorm_value(p, sub(g, f), 1)) sym_ok = false;
      }
    }
    rep.record(name + ": subadditivity q(f+g) <= q(f)+q(g)", sub_ok,
               "worst slack " + detail::format_double(worst_sub));
    rep.record(name + ": homogeneity q(c f) = |c| q(f)", hom_ok,
               "worst gap " + detail::format_double(worst_hom));
    rep.record(name + ": symmetry q(f-g) = q(g-f)", sym_ok);
  }
  // grid refinement can only grow the max
  bool mono_ok = true;
  for (const expr& f : fixture_pool()) {
    long long grid = 101;
    double prev = seminorm_value(interval_probe{0.0, 2.0, grid}, f, 1);
    for (int step = 0; step < 3; ++step) {
      grid = grid * 2 - 1;  // refinement keeps old nodes
      const double next = seminorm_value(interval_probe{0.0, 2.0, grid}, f, 1);
      if (next + 1e-15 < prev) mono_ok = false;
      prev = next;
    }
  }
  rep.record("interval probe: grid refinement is monotone", mono_ok);
}

inline void check_vector_laws(check_reporter& rep) {
  rng gen;
  seminorm_family q = compact_sup_family({{0.0, 1.0}});
  const window w = default_window();
  std::vector<fun_seq> seqs = {
      fun_seq::from_expr(parse("sin(x) + 1/n")),
      fun_seq::from_expr(parse("x^2")),
      fun_seq::from_expr(parse("(1/2)^n * sin(2^n * x)")),
      fun_seq::from_expr(parse("cos(x) - 1/n^2")),
  };
  auto elem = [&](std::size_t i) { return project(seqs[i], q); };
  hyper_element F = elem(0), G = elem(1), H = elem(2);
  hyper_element zero = project(fun_seq::from_expr(parse("0")), q);
  const double a = gen.uniform(-3.0, 3.0), b = gen.uniform(-3.0, 3.0);

  rep.record("F + G = G + F", hyper_equal(hyper_add(F, G), hyper_add(G, F), w).holds());
  rep.record("(F + G) + H = F + (G + H)",
             hyper_equal(hyper_add(hyper_add(F, G), H), hyper_add(F, hyper_add(G, H)), w).holds());
  rep.record("F + 0 = F", hyper_equal(hyper_add(F, zero), F, w).holds());
  rep.record("F + (-1)F = 0",
             hyper_equal(hyper_add(F, hyper_scale(-1.0, F)), zero, w).holds());
  rep.record("a(F + G) = aF + aG",
             hyper_equal(hyper_scale(a, hyper_add(F, G)),
                         hyper_add(hyper_scale(a, F), hyper_scale(a, G)), w)
                 .holds());
  rep.record("(a + b)F = aF + bF",
             hyper_equal(hyper_scale(a + b, F),
                         hyper_add(hyper_scale(a, F), hyper_scale(b, F)), w)
                 .holds());

  // representation invariance: perturbing representatives by a null sequence
  // does not change sums or scalar multiples at the class level
  fun_seq null1 = fun_seq::from_expr(parse("(1/n) * cos(x)"));
  fun_seq null2 = fun_seq::from_expr(parse("(1/n) * x"));
  // the default epsilon is tighter than 1/64, so judge at the abs scale
  const window pw(8, 512, 1e-2);
  fun_seq fp = seq_add(seqs[0], null1);
  fun_seq gp = seq_add(seqs[1], null2);
  rep.record("perturbed sum stays equivalent",
             equivalent(seq_add(fp, gp), seq_add(seqs[0], seqs[1]), q, pw).holds());
  rep.record("perturbed scalar multiple stays equivalent",
             equivalent(seq_scale(a, fp), seq_scale(a, seqs[0]), q, pw).holds());
}

inline void check_topology_strength(check_reporter& rep) {
  rng gen;
  seminorm_family q2 = compact_sup_family({{0.0, 1.0}, {-2.0, 2.0}});
  seminorm_family q1 = compact_sup_family({{0.0, 1.0}});
  const window w = default_window();
  std::vector<fun_seq> pool = {
      fun_seq::from_expr(parse("(1/2)^n * sin(2^n * x)")),
      fun_seq::from_expr(parse("(1/n) * cos(x)")),
      fun_seq::from_expr(parse("x / n")),
      fun_seq::from_expr(parse("sin(x) / n^2")),
      fun_seq::from_expr(parse("cos(2^n * x)")),
      fun_seq::from_expr(parse("sin(x)")),
  };
  fun_seq zero = fun_seq::from_expr(parse("0"));
  bool strength_ok = true, mono_ok = true;
  for (int k = 0; k < 20; ++k) {
    const fun_seq& g = pool[static_cast<std::size_t>(gen.uniform_int(0, static_cast<long long>(pool.size()) - 1))];
    const double r = gen.uniform(0.2, 2.0);
    const double margin = r * 0.25;
    decision uni = in_uniform_nbhd_seq(g, zero, uniform_radius(r, margin), q2, w);
    decision loc = in_local_nbhd_seq(g, zero, local_radii({r, r}), {margin, margin}, q2, w);
    // uniform membership is the stronger condition
    if (uni.holds() && loc.fails()) strength_ok = false;
    // membership under more probes implies membership under fewer
    decision big = in_local_nbhd_seq(g, zero, local_radii({r, r}), {margin, margin}, q2, w);
    decision small = in_local_nbhd_seq(g, zero, local_radii({r}), {margin}, q1, w);
    if (big.holds() && small.fails()) mono_ok = false;
  }
  rep.record("uniform membership implies local membership", strength_ok);
  rep.record("membership under superset family implies subset family", mono_ok);

  // non-T0: the null fixture and 0 sit in each other's neighborhoods
  fun_seq f = fun_seq::from_expr(parse("(1/2)^n * sin(2^n * x)"));
  bool t0_ok = true;
  for (double r : {0.05, 0.1, 0.5}) {
    if (!in_local_nbhd_seq(f, zero, local_radii({r}), {r / 2}, q1, w).holds()) t0_ok = false;
    if (!in_local_nbhd_seq(zero, f, local_radii({r}), {r / 2}, q1, w).holds()) t0_ok = false;
  }
  rep.record("equivalent pair is mutually neighborhood-indistinguishable", t0_ok);
}

inline void check_section_laws(check_reporter& rep) {
  seminorm_family q = compact_sup_family({{-1.0, 1.0}});
  const window w = default_window();

  // section law for the representative section
  hyper_element F = project(fun_seq::from_expr(parse("sin(x) + 1/n")), q);
  rep.record("rep section: project(apply(F)) = F",
             hyper_equal(project(section_apply(section(rep_section{}), F), q), F, w).holds());

  // section law for smoothing, judged over the window where the capped
  // Bernstein degrees still converge
  const window sw(8, 14, 2e-2);
  hyper_element S = project(embed_stable(parse("sin(x)")), q);
  fun_seq smoothed = section_apply(section(smoothing_section{}), S);
  rep.record("smoothing section: project(apply(F)) = F",
             hyper_equal(project(smoothed, q), S, sw).holds());

  // basis-linear: section law on a span element and additivity
  basis_linear_section bl = make_basis_linear(
      "laws",
      {{project(fun_seq::from_expr(parse("sin(x)")), q), fun_seq::from_expr(parse("sin(x)"))},
       {project(fun_seq::from_expr(parse("x^2")), q), fun_seq::from_expr(parse("x^2"))},
       {project(fun_seq::from_expr(parse("1")), q), fun_seq::from_expr(parse("1"))}},
      w);
  section bls{bl};
  hyper_element A = span_element(bl, {1.0, 2.0, -1.0});
  hyper_element B = span_element(bl, {0.5, -1.0, 2.0});
  rep.record("basis-linear: project(apply(F)) = F",
             hyper_equal(project(section_apply(bls, A), q), A, w).holds());
  hyper_element lhs = sectional_derivative(bls, hyper_add(A, B));
  hyper_element rhs = hyper_add(sectional_derivative(bls, A), sectional_derivative(bls, B));
  rep.record("basis-linear: d(F + G) = dF + dG", hyper_equal(lhs, rhs, w).holds());

  // patched section: section law holds, additivity fails (by design)
  const window aw = abs_default_window();
  hyper_element one = hn(fun_seq::from_expr(parse("1")));
  hyper_element two = hn(fun_seq::from_expr(parse("2")));
  section ps{make_patched({{two, fun_seq::from_expr(parse("2 + 1/n"))}}, aw)};
  rep.record("patched section: project(apply(F)) = F",
             hyper_equal(project(section_apply(ps, two), abs_family()), two, aw).holds());
  fun_seq r1 = section_apply(ps, one);
  fun_seq r2 = section_apply(ps, two);
  const double gap = std::fabs(eval(seq_add(r1, r1).term(1), 0.0, 1) - eval(r2.term(1), 0.0, 1));
  rep.record("patched section: r(1) + r(1) differs from r(2)", gap > 1e-12,
             "gap " + detail::format_double(gap) + " at i=1");
}

inline int run_check(const std::string& suite, std::ostream& out) {
  check_reporter rep(out);
  bool known = false;
  if (suite == "seminorm-axioms" || suite == "all") {
    out << "seminorm-axioms:\n";
    check_seminorm_axioms(rep);
    known = true;
  }
  if (suite == "vector-laws" || suite == "all") {
    out << "vector-laws:\n";
    check_vector_laws(rep);
    known = true;
  }
  if (suite == "topology-strength" || suite == "all") {
    out << "topology-strength:\n";
    check_topology_strength(rep);
    known = true;
  }
  if (suite == "section-laws" || suite == "all") {
    out << "section-laws:\n";
    check_section_laws(rep);
    known = true;
  }
  if (!known)
    throw config_error("unknown suite '" + suite +
                       "'; expected seminorm-axioms, vector-laws, topology-strength, "
                       "section-laws, or all");
  out << rep.total() - rep.failed() << " of " << rep.total() << " properties hold\n";
  return rep.failed() == 0 ? exit_holds : exit_fails;
}

}  // namespace extrafun::cli
