#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monocone/rational.hpp"

namespace monocone {

/// Multivariate polynomial with rational coefficients.
class Polynomial {
 public:
  using Monomial = std::vector<unsigned>;  // exponent per variable

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// The constant value when the polynomial has no variable terms.
  std::optional<Rational> as_constant() const;
  unsigned degree() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(unsigned k) const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial derivative(std::size_t i) const;
  Rational evaluate(const QVec& x) const;
  double evaluate(std::span<const double> x) const;

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  std::size_t nvars_;
  std::map<Monomial, Rational> terms_;
};

/// num / den with den not identically zero.
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  static RationalFunction from_polynomial(Polynomial p);

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction operator-() const;

  RationalFunction derivative(std::size_t i) const;
  /// nullopt where the denominator vanishes.
  std::optional<Rational> evaluate(const QVec& x) const;
  std::optional<double> evaluate(std::span<const double> x) const;
  /// Affine in x: constant denominator and numerator of degree <= 1.
  bool is_affine() const;

  std::string to_string() const;
};

/// Parses +, -, *, /, ^ (integer exponents), parentheses, rational literals and
/// variables x1..xn (plain `x` also names x1 when n = 1).
RationalFunction parse_rational_function(std::string_view text, std::size_t nvars);

}  // namespace monocone
