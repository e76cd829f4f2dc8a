#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace monocone {

/// Exact rational scalar used by every polyhedral computation.
using Rational = mpq_class;
/// Dense exact vector in R^n.
using QVec = std::vector<Rational>;

/// Parses "p/q", integers, and decimal literals such as "-0.25" or "1e-6" exactly.
Rational parse_rational(std::string_view text);

/// num/den in canonical form (mpq_class(num, den) alone does not reduce).
Rational ratio(long num, long den);

/// Converts through the shortest round-trip decimal, so 0.1 becomes 1/10.
Rational rational_from_double(double x);

double to_double(const Rational& q);
std::string to_string(const Rational& q);

QVec zeros(std::size_t n);
QVec unit_vector(std::size_t n, std::size_t i);
QVec from_doubles(std::span<const double> xs);
std::vector<double> to_doubles(const QVec& v);

Rational dot(const QVec& a, const QVec& b);
Rational squared_norm(const QVec& a);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Rational& s, const QVec& a);
QVec negate(const QVec& a);
QVec concat(const QVec& a, const QVec& b);
QVec slice(const QVec& a, std::size_t offset, std::size_t count);
bool is_zero(const QVec& a);

/// Scales a nonzero vector so its first nonzero entry has absolute value one.
QVec normalize_direction(const QVec& a);

std::string to_string(const QVec& v);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

}  // namespace monocone
