#pragma once
// Error types shared across the library. Each condition the public API can
// signal gets its own type so callers can dispatch without string matching.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace extrafun {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure. Carries the byte offset of the offending character and the
// set of token descriptions that would have been accepted there.
struct syntax_error : error {
  std::size_t offset;
  std::vector<std::string> expected;

  syntax_error(std::size_t off, std::vector<std::string> exp, const std::string& found)
      : error(compose(off, exp, found)), offset(off), expected(std::move(exp)) {}

 private:
  static std::string compose(std::size_t off, const std::vector<std::string>& exp,
                             const std::string& found) {
    std::string m = "syntax error at offset " + std::to_string(off) + ": unexpected " + found;
    if (!exp.empty()) {
      m += "; expected ";
      for (std::size_t i = 0; i < exp.size(); ++i) {
        if (i) m += exp.size() > 2 ? ", " : " or ";
        if (i + 1 == exp.size() && exp.size() > 2) m += "or ";
        m += exp[i];
      }
    }
    return m;
  }
};

// Evaluation outside a function's domain: log of a non-positive value,
// division by zero, zero raised to a negative power, and relatives.
struct domain_error : error {
  using error::error;
};

// Structurally ill-formed value: mixed probe variants in one family, an
// x-dependent term where a constant is required, bad window bounds.
struct shape_error : error {
  using error::error;
};

// Two hyperspace elements built over different seminorm families were mixed.
struct family_mismatch : error {
  using error::error;
};

// A section was applied to an element it is not defined on.
struct out_of_domain : error {
  using error::error;
};

// No differentiation cutoff exists (or none was found within the scan bound).
struct undefined_derivative : error {
  using error::error;
};

// Scalar conjugation by zero is not invertible.
struct zero_scalar : error {
  using error::error;
};

// No probe exhibits a sustained gap between the two elements.
struct not_separable : error {
  using error::error;
};

// A differentiation request hit |.| applied to a non-constant argument.
struct nondifferentiable_error : error {
  using error::error;
};

// Malformed run configuration (unknown key, wrong type, missing field).
struct config_error : error {
  using error::error;
};

}  // namespace extrafun
