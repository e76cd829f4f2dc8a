#include "monocone/polynomial.hpp"

#include <cctype>
#include <cmath>

#include "monocone/error.hpp"

namespace monocone {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, 1);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

std::optional<Rational> Polynomial::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && degree() == 0) return terms_.begin()->second;
  return std::nullopt;
}

unsigned Polynomial::degree() const {
  unsigned deg = 0;
  for (const auto& [m, c] : terms_) {
    unsigned s = 0;
    for (unsigned e : m) s += e;
    deg = std::max(deg, s);
  }
  return deg;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(nvars_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) m[i] = m1[i] + m2[i];
      r.add_term(m, c1 * c2);
    }
  }
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(nvars_, 1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial dm = m;
    --dm[i];
    r.add_term(dm, c * m[i]);
  }
  return r;
}

Rational Polynomial::evaluate(const QVec& x) const {
  if (x.size() != nvars_) throw Error(ErrorKind::kDimensionMismatch, "polynomial argument length");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != nvars_) throw Error(ErrorKind::kDimensionMismatch, "polynomial argument length");
  double sum = 0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i) t *= std::pow(x[i], static_cast<int>(m[i]));
    sum += t;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.get_str() + ")";
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      s += "*x" + std::to_string(i + 1);
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
  }
  return s;
}

RationalFunction RationalFunction::from_polynomial(Polynomial p) {
  const std::size_t n = p.nvars();
  return RationalFunction{std::move(p), Polynomial::constant(n, 1)};
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (den == o.den) return {num + o.num, den};
  return {num * o.den + o.num * den, den * o.den};
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction& o) const { return {num * o.num, den * o.den}; }

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.num.is_zero()) throw Error(ErrorKind::kParse, "division by an identically zero expression");
  return {num * o.den, den * o.num};
}

RationalFunction RationalFunction::operator-() const { return {-num, den}; }

RationalFunction RationalFunction::derivative(std::size_t i) const {
  if (auto c = den.as_constant()) {
    return {num.derivative(i) * Polynomial::constant(num.nvars(), 1 / *c), Polynomial::constant(num.nvars(), 1)};
  }
  return {num.derivative(i) * den - num * den.derivative(i), den * den};
}

std::optional<Rational> RationalFunction::evaluate(const QVec& x) const {
  const Rational d = den.evaluate(x);
  if (d == 0) return std::nullopt;
  return num.evaluate(x) / d;
}

std::optional<double> RationalFunction::evaluate(std::span<const double> x) const {
  const double d = den.evaluate(x);
  if (d == 0.0) return std::nullopt;
  return num.evaluate(x) / d;
}

bool RationalFunction::is_affine() const { return den.as_constant().has_value() && num.degree() <= 1; }

std::string RationalFunction::to_string() const {
  if (auto c = den.as_constant(); c && *c == 1) return num.to_string();
  return "(" + num.to_string() + ")/(" + den.to_string() + ")";
}

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t nvars) : text_(text), nvars_(nvars) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kParse, why + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction constant(const Rational& c) const {
    return RationalFunction::from_polynomial(Polynomial::constant(nvars_, c));
  }

  RationalFunction expr() {
    RationalFunction r = term();
    for (;;) {
      if (accept('+')) {
        r = r + term();
      } else if (accept('-')) {
        r = r - term();
      } else {
        return r;
      }
    }
  }

  RationalFunction term() {
    RationalFunction r = unary();
    for (;;) {
      if (accept('*')) {
        r = r * unary();
      } else if (accept('/')) {
        r = r / unary();
      } else {
        return r;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (accept('-')) negative = true;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    const unsigned k = static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
    RationalFunction r{base.num.pow(k), base.den.pow(k)};
    return negative ? constant(1) / r : r;
  }

  RationalFunction primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'x') return variable();
    fail("unexpected character");
  }

  RationalFunction number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    return constant(parse_rational(text_.substr(start, pos_ - start)));
  }

  RationalFunction variable() {
    ++pos_;  // 'x'
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t index = 0;
    if (start == pos_) {
      if (nvars_ != 1) fail("bare 'x' is only allowed in one dimension");
    } else {
      index = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (index < 1 || index > nvars_) fail("variable index out of range");
      --index;
    }
    return RationalFunction::from_polynomial(Polynomial::variable(nvars_, index));
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_rational_function(std::string_view text, std::size_t nvars) {
  if (nvars == 0) throw Error(ErrorKind::kInvalidArgument, "expression over zero variables");
  return ExpressionParser(text, nvars).parse();
}

}  // namespace monocone
