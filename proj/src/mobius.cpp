#include "polarlab/mobius.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace polarlab {

MobiusMap::MobiusMap(Rational a, Rational b, Rational c, Rational d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  for (Rational* q : {&a_, &b_, &c_, &d_}) q->canonicalize();
  if (determinant() == 0) throw std::invalid_argument("Mobius map must satisfy ad - bc != 0");
}

MobiusMap MobiusMap::dilation(const Rational& factor) {
  if (factor == 0) throw std::invalid_argument("dilation factor must be nonzero");
  return {factor, 0, 0, 1};
}

MobiusMap MobiusMap::shift(const Rational& offset) { return {1, offset, 0, 1}; }

MobiusMap MobiusMap::inversion_at(const Rational& pole) { return {0, 1, 1, Rational(-pole)}; }

MobiusMap MobiusMap::sending_to_infinity(const ExtendedPoint& pole) {
  return pole.is_infinite() ? identity() : inversion_at(pole.value());
}

ExtendedPoint MobiusMap::operator()(const ExtendedPoint& z) const {
  if (z.is_infinite()) {
    if (c_ == 0) return ExtendedPoint::infinity();
    return ExtendedPoint(Rational(a_ / c_));
  }
  const Rational& x = z.value();
  Rational den = c_ * x + d_;
  if (den == 0) return ExtendedPoint::infinity();
  return ExtendedPoint(Rational((a_ * x + b_) / den));
}

double MobiusMap::apply(double z) const {
  const double a = a_.get_d(), b = b_.get_d(), c = c_.get_d(), d = d_.get_d();
  if (std::isinf(z)) return c == 0 ? std::numeric_limits<double>::infinity() : a / c;
  const double den = c * z + d;
  if (den == 0) return std::numeric_limits<double>::infinity();
  return (a * z + b) / den;
}

MobiusMap MobiusMap::inverse() const { return {d_, Rational(-b_), Rational(-c_), a_}; }

MobiusMap MobiusMap::after(const MobiusMap& inner) const {
  // Matrix product [[a b][c d]] * [[a' b'][c' d']].
  return {a_ * inner.a_ + b_ * inner.c_, a_ * inner.b_ + b_ * inner.d_,
          c_ * inner.a_ + d_ * inner.c_, c_ * inner.b_ + d_ * inner.d_};
}

std::string MobiusMap::str() const {
  return "(" + to_string(a_) + " z + " + to_string(b_) + ") / (" + to_string(c_) + " z + " + to_string(d_) + ")";
}

}  // namespace polarlab
