#pragma once
// Shared fixture corpora for the test suites.

#include <string>
#include <vector>

#include <extrafun/extrafun.hpp>

namespace fixtures {

// Twenty differentiable expressions in (x, n), all evaluable on x in [-2, 2]
// for n in 1..6.
inline std::vector<extrafun::expr> differentiable_corpus() {
  std::vector<extrafun::expr> out;
  for (const char* s : {
           "x",
           "x^2",
           "x^3 - x",
           "x^4 / 8",
           "sin(x)",
           "cos(x)",
           "sin(2*x) + x/2",
           "cos(x)^2",
           "sin(x) * cos(x)",
           "exp(x/4)",
           "exp(0 - x^2/4)",
           "log(2 + x^2)",
           "log(x + 3)",
           "1 / (1 + x^2)",
           "x / (1 + x^2)",
           "x^n",
           "x^2 / n",
           "(1/2)^n * sin(2^n * x)",
           "(1/3)^n * cos(x)",
           "sin(x / n)",
       })
    out.push_back(extrafun::parse(s));
  return out;
}

// Continuous, slowly varying class representatives whose Bernstein smoothing
// converges fast on [-8, 8].
inline std::vector<extrafun::fun_seq> smoothable_classes() {
  using extrafun::fun_seq;
  using extrafun::parse;
  std::vector<fun_seq> out;
  for (const char* s : {"0", "1", "x", "x/4 - 2", "sin(x/8)", "cos(x/10)", "exp(x/16)",
                        "(1/2)^n * sin(2^n * x)", "(1/3)^n * cos(x)"})
    out.push_back(fun_seq::from_expr(parse(s)));
  out.push_back(fun_seq::from_list({parse("x^2"), parse("abs(x)")}, parse("x/8")));
  return out;
}

}  // namespace fixtures
