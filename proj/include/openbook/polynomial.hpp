#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "openbook/rational.hpp"

namespace openbook {

// Exponent vector; length always equals num_vars of the owning polynomial.
using Exponents = std::vector<std::uint32_t>;

// Hard cap on per-variable exponents accepted by the parser and pow().
inline constexpr std::uint32_t kMaxExponent = 64;

struct PolyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure with a character position into the offending text.
struct ParseError : PolyError {
  ParseError(const std::string& msg, std::size_t pos)
      : PolyError(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// Graded lexicographic order, descending. Fixes the canonical term order
// used for storage and printing.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Invariants: no stored coefficient is zero; all exponent vectors have
// length num_vars(); the term map is canonical, so equal polynomials
// compare equal structurally. Immutable in spirit: all operations return
// new values.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GradedLexGreater>;

  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t total_degree() const;  // 0 for the zero polynomial

  // Adds c * x^exps, merging and dropping zeros. Building block for all ops.
  void add_term(const Exponents& exps, const Rational& c);

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(std::uint32_t e) const;

  bool operator==(const Polynomial& o) const {
    return num_vars_ == o.num_vars_ && terms_ == o.terms_;
  }

  Polynomial derivative(std::size_t var_index) const;
  std::vector<Polynomial> gradient() const;

  // Exact evaluation on a rational point.
  Rational evaluate(const std::vector<Rational>& point) const;
  // Fast float path (round-to-nearest); used by the numeric solver.
  double evaluate(std::span<const double> point) const;

  // Canonical printer; output re-parses to the same polynomial.
  std::string to_string(const std::vector<std::string>& var_names) const;
  std::string to_string() const;  // default names x1..xN

  // Recursive-descent parser over + - * ^ ( ), integer/rational literals
  // and the declared variable names. Throws ParseError on bad syntax,
  // unknown identifiers and out-of-range exponents.
  static Polynomial parse(const std::string& text,
                          const std::vector<std::string>& var_names);

 private:
  void check_same_vars(const Polynomial& o) const;

  std::size_t num_vars_;
  TermMap terms_;
};

} // namespace openbook
