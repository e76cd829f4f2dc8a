#include "monocone/rational.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "monocone/error.hpp"

namespace monocone {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptySample: return "EmptySample";
    case ErrorKind::kNotCompilable: return "NotCompilable";
    case ErrorKind::kNotMember: return "NotMember";
    case ErrorKind::kEmptySet: return "EmptySet";
    case ErrorKind::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::kNotOnGraph: return "NotOnGraph";
    case ErrorKind::kUnsupportedVariant: return "UnsupportedVariant";
    case ErrorKind::kTooFewSamples: return "TooFewSamples";
    case ErrorKind::kNotInDomain: return "NotInDomain";
    case ErrorKind::kShiftTooSmall: return "ShiftTooSmall";
    case ErrorKind::kSegmentLeavesDomain: return "SegmentLeavesDomain";
    case ErrorKind::kWindowNotFound: return "WindowNotFound";
    case ErrorKind::kRoutesDisagree: return "RoutesDisagree";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Decimal literal without a slash: [sign] digits [. digits] [e [sign] digits].
Rational parse_decimal(std::string_view text, std::string_view full) {
  auto fail = [&] { throw Error(ErrorKind::kParse, "malformed number '" + std::string(full) + "'"); };
  if (text.empty()) fail();
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    ++i;
    long e = 0;
    const char* first = text.data() + i;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) fail();
    exponent += e;
  }
  mpz_class numerator(digits, 10);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational result;
  if (exponent >= 0) {
    result = Rational(numerator * power);
  } else {
    result = Rational(numerator, power);
    result.canonicalize();
  }
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  const std::string_view t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return parse_decimal(t, text);
  const Rational num = parse_decimal(trim(t.substr(0, slash)), text);
  const Rational den = parse_decimal(trim(t.substr(slash + 1)), text);
  if (den == 0) throw Error(ErrorKind::kParse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num / den);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::kInvalidArgument, "non-finite value");
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw Error(ErrorKind::kInvalidArgument, "cannot format double");
  return parse_decimal(std::string_view(buf.data(), ptr - buf.data()), "double");
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_string(const Rational& q) { return q.get_str(); }

QVec zeros(std::size_t n) { return QVec(n, Rational(0)); }

QVec unit_vector(std::size_t n, std::size_t i) {
  QVec e = zeros(n);
  e.at(i) = 1;
  return e;
}

QVec from_doubles(std::span<const double> xs) {
  QVec out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(rational_from_double(x));
  return out;
}

std::vector<double> to_doubles(const QVec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

Rational dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kDimensionMismatch, "dot product of unequal lengths");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

Rational squared_norm(const QVec& a) { return dot(a, a); }

QVec add(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kDimensionMismatch, "vector sum of unequal lengths");
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

QVec sub(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kDimensionMismatch, "vector difference of unequal lengths");
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

QVec scale(const Rational& s, const QVec& a) {
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

QVec negate(const QVec& a) {
  QVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

QVec concat(const QVec& a, const QVec& b) {
  QVec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

QVec slice(const QVec& a, std::size_t offset, std::size_t count) {
  return QVec(a.begin() + static_cast<std::ptrdiff_t>(offset),
              a.begin() + static_cast<std::ptrdiff_t>(offset + count));
}

bool is_zero(const QVec& a) {
  for (const auto& q : a) {
    if (q != 0) return false;
  }
  return true;
}

QVec normalize_direction(const QVec& a) {
  for (const auto& q : a) {
    if (q != 0) return scale(Rational(1 / abs(q)), a);
  }
  return a;
}

std::string to_string(const QVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

}  // namespace monocone
