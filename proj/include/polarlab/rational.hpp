#ifndef POLARLAB_RATIONAL_HPP
#define POLARLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace polarlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", a plain integer, or a decimal literal such as "-1.25e-3".
/// Decimal input is converted exactly (0.1 becomes 1/10, not the nearest double).
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; the denominator is always written, e.g. "3/1".
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double x);

Rational abs(const Rational& q);

/// num/den in lowest terms. The two-argument mpq_class constructor does not reduce, and
/// GMP arithmetic and equality assume reduced operands.
Rational make_rational(const Integer& num, const Integer& den);

/// A point of the extended real line: a finite rational or the single point at infinity.
class ExtendedPoint {
 public:
  ExtendedPoint() : value_(Rational(0)) {}
  ExtendedPoint(const Rational& x) : value_(x) { value_->canonicalize(); }  // NOLINT(google-explicit-constructor)
  ExtendedPoint(long x) : value_(Rational(x)) {}   // NOLINT(google-explicit-constructor)

  static ExtendedPoint infinity() {
    ExtendedPoint p;
    p.value_.reset();
    return p;
  }

  /// Accepts "inf", "infinity", "oo" (any case, optional sign) or a rational literal.
  static ExtendedPoint parse(std::string_view text);

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  /// Throws std::logic_error for the point at infinity.
  const Rational& value() const;

  std::string str() const;

  friend bool operator==(const ExtendedPoint& a, const ExtendedPoint& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
  }

 private:
  std::optional<Rational> value_;
};

}  // namespace polarlab

#endif  // POLARLAB_RATIONAL_HPP
