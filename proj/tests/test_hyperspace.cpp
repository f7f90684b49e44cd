#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <extrafun/extrafun.hpp>

#include "fixtures.hpp"

using namespace extrafun;

namespace {

seminorm_family unit_sup(long long grid = 1001) {
  return compact_sup_family({{0.0, 1.0}}, grid);
}

}  // namespace

TEST_CASE("window invariants") {
  CHECK_THROWS_AS(window(0, 5, 1e-3), shape_error);
  CHECK_THROWS_AS(window(5, 5, 1e-3), shape_error);
  CHECK_THROWS_AS(window(3, 2, 1e-3), shape_error);
  CHECK_THROWS_AS(window(1, 2, 0.0), shape_error);
  CHECK_THROWS_AS(window(1, 2, -1.0), shape_error);
  CHECK(window(8, 64, 1e-6).quarter() == 14);
  CHECK(window(1, 2, 1e-6).quarter() == 1);
  CHECK(window(8, 10, 1e-2).quarter() == 1);
  CHECK(default_window_for(abs_family()).end == 512);
  CHECK(default_window_for(unit_sup()).end == 64);
}

TEST_CASE("damped high-frequency sequence is a null sequence under compact sup") {
  fun_seq f = fun_seq::from_expr(parse("(1/2)^n * sin(2^n * x)"));
  decision d = null_check(f, unit_sup(), default_window());
  CHECK(d.holds());
  REQUIRE(d.traces.size() == 1);
  const probe_trace& t = d.traces[0];
  CHECK(t.probe_label == "sup[0, 1]/1001");
  CHECK(t.values.size() == 57);  // indices 8..64 inclusive
  CHECK(t.values.front().first == 8);
  CHECK(t.values.back().first == 64);
  CHECK(t.tail_max < 1e-6);
  CHECK(t.head_max > t.tail_max);
}

TEST_CASE("a non-vanishing sequence fails with a concrete witness") {
  decision d = equivalent(fun_seq::from_expr(parse("cos(x)")),
                          fun_seq::from_expr(parse("0")), unit_sup(), default_window());
  CHECK(d.fails());
  REQUIRE(d.witness_probe.has_value());
  REQUIRE(d.witness_index.has_value());
  REQUIRE(d.witness_value.has_value());
  CHECK(*d.witness_probe == "sup[0, 1]/1001");
  CHECK(*d.witness_index > 50);
  CHECK(*d.witness_value >= 0.9);
}

TEST_CASE("pointwise families ignore differences away from their samples") {
  // the perturbation vanishes exactly at each sample point
  fun_seq f = fun_seq::from_expr(parse("x + (x * (x - 3/10) * (x - 17/10)) / n"));
  fun_seq g = fun_seq::from_expr(parse("x"));
  decision d = equivalent(f, g, pointwise_family({0.0, 0.3, 1.7}), default_window());
  CHECK(d.holds());
  for (const probe_trace& t : d.traces) CHECK(t.tail_max == 0.0);
}

TEST_CASE("hypernumbers identify sequences with the same limit") {
  decision d = hyper_equal(hn(fun_seq::from_expr(parse("1 + 1/n"))),
                           hn(fun_seq::from_expr(parse("1"))), abs_default_window());
  CHECK(d.holds());
}

TEST_CASE("a slowly decaying tail inside a short window stays undecided") {
  decision d = null_check(fun_seq::from_expr(parse("1/n")), abs_family(), window(8, 10, 1e-2));
  CHECK(d.v == verdict::inconclusive);
  // the long default window resolves the same question
  CHECK(null_check(fun_seq::from_expr(parse("1/n")), abs_family(), abs_default_window())
            .holds());
}

TEST_CASE("sequence arithmetic acts termwise") {
  fun_seq f = fun_seq::from_expr(parse("x / n"));
  fun_seq g = fun_seq::from_expr(parse("x^2"));
  fun_seq sum = seq_add(f, g);
  fun_seq diff = seq_sub(f, g);
  fun_seq scaled = seq_scale(2.5, g);
  for (long long i : {1, 2, 7}) {
    CHECK(eval(sum.term(i), 0.5, i) == Catch::Approx(0.5 / i + 0.25).margin(1e-15));
    CHECK(eval(diff.term(i), 0.5, i) == Catch::Approx(0.5 / i - 0.25).margin(1e-15));
    CHECK(eval(scaled.term(i), 0.5, i) == Catch::Approx(0.625).margin(1e-15));
  }
  CHECK(sum.is_expr_seq());
}

TEST_CASE("list sequences route explicit heads then the tail") {
  fun_seq f = fun_seq::from_list({parse("x^2"), parse("abs(x)")}, parse("x / 8"));
  CHECK(to_string(f.term(1)) == "x^2");
  CHECK(to_string(f.term(2)) == "abs(x)");
  CHECK(eval(f.term(3), 4.0, 3) == 0.5);
  CHECK(f.describe().find("; then ") != std::string::npos);
  CHECK_THROWS_AS(f.term(0), shape_error);
  CHECK_THROWS_AS(fun_seq::from_list({parse("x / n")}, parse("0")), shape_error);
}

TEST_CASE("zipping pads the shorter head with tail terms") {
  fun_seq a = fun_seq::from_list({parse("1"), parse("2")}, parse("x"));
  fun_seq b = fun_seq::from_list({parse("10")}, parse("n"));
  fun_seq s = seq_add(a, b);
  CHECK(eval(s.term(1), 0.0, 1) == 11.0);   // 1 + 10
  CHECK(eval(s.term(2), 0.0, 2) == 4.0);    // 2 + (n at 2)
  CHECK(eval(s.term(5), 7.0, 5) == 12.0);   // x + n
  fun_seq m = seq_add(a, fun_seq::from_expr(parse("1/n")));
  CHECK(eval(m.term(1), 0.0, 1) == 2.0);
  CHECK(eval(m.term(4), 2.0, 4) == 2.25);
}

TEST_CASE("generated sequences substitute the index into each generated term") {
  fun_seq g = fun_seq::from_generator(
      [](long long i) { return mul(constant(i), var_x()); }, "i * x", true);
  CHECK(eval(g.term(3), 2.0, 3) == 6.0);
  CHECK(g.describe() == "i * x");
  fun_seq shifted = seq_add(g, fun_seq::from_expr(parse("1")));
  CHECK(std::holds_alternative<gen_seq>(shifted.get()));
  CHECK(eval(shifted.term(4), 1.0, 4) == 5.0);
}

TEST_CASE("operations across distinct families are rejected") {
  hyper_element a = ec(fun_seq::from_expr(parse("x")), {{0.0, 1.0}});
  hyper_element b = ep(fun_seq::from_expr(parse("x")), {0.0});
  CHECK_THROWS_AS(hyper_add(a, b), family_mismatch);
  CHECK_THROWS_AS(hyper_sub(a, b), family_mismatch);
  CHECK_THROWS_AS(hyper_equal(a, b, default_window()), family_mismatch);
}

TEST_CASE("linear presentations follow sums, differences, and scalings") {
  hyper_element a = ec(fun_seq::from_expr(parse("sin(x)")), {{0.0, 1.0}})
                        .with_presentation({"b", {1.0, 0.0}});
  hyper_element b = ec(fun_seq::from_expr(parse("x^2")), {{0.0, 1.0}})
                        .with_presentation({"b", {0.0, 2.0}});
  hyper_element s = hyper_add(a, b);
  REQUIRE(s.presentation().has_value());
  CHECK(s.presentation()->coeffs == std::vector<double>{1.0, 2.0});
  hyper_element d = hyper_sub(a, b);
  REQUIRE(d.presentation().has_value());
  CHECK(d.presentation()->coeffs == std::vector<double>{1.0, -2.0});
  hyper_element sc = hyper_scale(3.0, s);
  REQUIRE(sc.presentation().has_value());
  CHECK(sc.presentation()->coeffs == std::vector<double>{3.0, 6.0});
  // tag mismatch drops the presentation instead of guessing
  hyper_element c = ec(fun_seq::from_expr(parse("1")), {{0.0, 1.0}})
                        .with_presentation({"other", {1.0, 1.0}});
  CHECK_FALSE(hyper_add(a, c).presentation().has_value());
}

TEST_CASE("stable embedding requires an index-free expression") {
  fun_seq s = embed_stable(parse("x^2"));
  CHECK(identical(s.term(1), s.term(100)));
  CHECK(s.syntactically_stable());
  CHECK_THROWS_AS(embed_stable(parse("x / n")), shape_error);
}

TEST_CASE("separation of plain functions by a family") {
  CHECK_FALSE(separates(pointwise_family({0.0, 1.0}), parse("x * (x - 1)"), parse("0")));
  CHECK(separates(pointwise_family({0.0, 1.0, 0.5}), parse("x * (x - 1)"), parse("0")));
  CHECK(separates(unit_sup(), parse("x * (x - 1)"), parse("0")));
}

TEST_CASE("stability semidecision") {
  // syntactic constancy is decided without sampling
  decision d1 = is_stable_element(ec(fun_seq::from_expr(parse("x^2")), {{0.0, 1.0}}),
                                  window(8, 10, 1e-2));
  CHECK(d1.holds());
  // a convergent number sequence is equivalent to its own late term
  decision d2 = is_stable_element(hn(fun_seq::from_expr(parse("1 + 1/n"))),
                                  abs_default_window());
  CHECK(d2.holds());
  // divergence and oscillation both come back undecided, never refuted
  decision d3 = is_stable_element(hn(fun_seq::from_expr(parse("2^n"))), window(8, 40, 1e-2));
  CHECK(d3.v == verdict::inconclusive);
  CHECK_FALSE(d3.witness_probe.has_value());
  decision d4 =
      is_stable_element(hn(fun_seq::from_expr(parse("(0 - 1)^n"))), abs_default_window());
  CHECK(d4.v == verdict::inconclusive);
}

TEST_CASE("equivalence is reflexive and symmetric on the corpus") {
  const window w(8, 512, 1e-2);
  const seminorm_family q = unit_sup(257);
  const auto pool = fixtures::differentiable_corpus();
  for (std::size_t k = 0; k < pool.size(); k += 4) {
    fun_seq f = fun_seq::from_expr(pool[k]);
    CHECK(equivalent(f, f, q, w).holds());
  }
  fun_seq f = fun_seq::from_expr(parse("sin(x) + cos(x) / n"));
  fun_seq g = fun_seq::from_expr(parse("sin(x)"));
  decision fg = equivalent(f, g, q, w);
  decision gf = equivalent(g, f, q, w);
  CHECK(fg.holds());
  CHECK(gf.v == fg.v);
}

TEST_CASE("equivalence chains across intermediate representatives") {
  const window w(8, 512, 1e-2);
  const seminorm_family q = unit_sup(257);
  fun_seq f = fun_seq::from_expr(parse("sin(x) + cos(x) / n"));
  fun_seq g = fun_seq::from_expr(parse("sin(x)"));
  fun_seq h = fun_seq::from_expr(parse("sin(x) - x / n"));
  CHECK(equivalent(f, g, q, w).holds());
  CHECK(equivalent(g, h, q, w).holds());
  CHECK(equivalent(f, h, q, w).holds());
}

TEST_CASE("verdicts survive a change of representative") {
  const window w(8, 512, 1e-2);
  const seminorm_family q = unit_sup(257);
  fun_seq f = fun_seq::from_expr(parse("x^2"));
  fun_seq fp = seq_add(f, fun_seq::from_expr(parse("cos(x) / n")));
  CHECK(equivalent(f, f, q, w).holds());
  CHECK(equivalent(fp, f, q, w).holds());
  fun_seq c = fun_seq::from_expr(parse("cos(x)"));
  fun_seq cp = seq_add(c, fun_seq::from_expr(parse("x / n")));
  fun_seq z = fun_seq::from_expr(parse("0"));
  CHECK(equivalent(c, z, q, w).fails());
  CHECK(equivalent(cp, z, q, w).fails());
}

TEST_CASE("decision traces carry full per-probe evidence") {
  seminorm_family q = compact_sup_family({{0.0, 1.0}, {-2.0, 2.0}}, 101);
  decision d = null_check(fun_seq::from_expr(parse("x / n")), q, window(4, 16, 1e-1));
  REQUIRE(d.traces.size() == 2);
  for (const probe_trace& t : d.traces) {
    CHECK(t.values.size() == 13);
    CHECK(t.values.front().first == 4);
    CHECK(t.values.back().first == 16);
  }
  CHECK(d.traces[0].probe_label == "sup[0, 1]/101");
  CHECK(d.traces[1].probe_label == "sup[-2, 2]/101");
  // sup over [-2,2] of x/n at n=4 is 1/2
  CHECK(d.traces[1].values.front().second == 0.5);
}
