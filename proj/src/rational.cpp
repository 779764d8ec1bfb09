#include "polarlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace polarlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not a rational literal: '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), s);
    Integer den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view body = s;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    Integer ez = parse_integer(body.substr(e + 1), s);
    if (!ez.fits_slong_p()) throw std::invalid_argument("exponent out of range in '" + std::string(s) + "'");
    exponent = ez.get_si();
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot);
    std::string_view fp = body.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw std::invalid_argument("not a rational literal: '" + std::string(s) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(body)) throw std::invalid_argument("not a rational literal: '" + std::string(s) + "'");
    digits = std::string(body);
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot convert a non-finite double to a rational");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

ExtendedPoint ExtendedPoint::parse(std::string_view text) {
  std::string s(trim(text));
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (!lower.empty() && (lower.front() == '+' || lower.front() == '-')) lower.erase(0, 1);
  if (lower == "inf" || lower == "infinity" || lower == "oo" || lower == "\xe2\x88\x9e") return infinity();
  return ExtendedPoint(parse_rational(s));
}

const Rational& ExtendedPoint::value() const {
  if (!value_) throw std::logic_error("the point at infinity has no finite value");
  return *value_;
}

std::string ExtendedPoint::str() const { return value_ ? to_string(*value_) : std::string("inf"); }

}  // namespace polarlab
