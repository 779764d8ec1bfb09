#ifndef POLARLAB_MOBIUS_HPP
#define POLARLAB_MOBIUS_HPP

#include "polarlab/rational.hpp"

#include <string>

namespace polarlab {

/// T(z) = (a z + b) / (c z + d) with rational entries and a d - b c != 0.
///
/// Acts on the extended real line: T(-d/c) = inf and T(inf) = a/c (or inf when c = 0).
/// Entries are stored as given; scaling all four by a constant describes the same map
/// but changes the normalization of the polynomial pushforward.
class MobiusMap {
 public:
  MobiusMap(Rational a, Rational b, Rational c, Rational d);

  static MobiusMap identity() { return {1, 0, 0, 1}; }
  static MobiusMap dilation(const Rational& factor);  // z -> factor * z
  static MobiusMap shift(const Rational& offset);     // z -> z + offset
  /// z -> 1 / (z - pole): the map sending a finite pole to infinity.
  static MobiusMap inversion_at(const Rational& pole);
  /// inversion_at(pole) for finite poles, the identity for the point at infinity.
  static MobiusMap sending_to_infinity(const ExtendedPoint& pole);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  Rational determinant() const { return a_ * d_ - b_ * c_; }
  bool preserves_infinity() const { return c_ == 0; }

  ExtendedPoint operator()(const ExtendedPoint& z) const;

  /// Floating evaluation; returns +inf at the pole and for z = +-inf returns a/c.
  double apply(double z) const;

  /// (d z - b) / (-c z + a), the inverse written with the entries the pushforward formula uses.
  MobiusMap inverse() const;

  /// (*this) o inner.
  MobiusMap after(const MobiusMap& inner) const;

  std::string str() const;

 private:
  Rational a_, b_, c_, d_;
};

}  // namespace polarlab

#endif  // POLARLAB_MOBIUS_HPP
