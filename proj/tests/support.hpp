#ifndef POLARLAB_TESTS_SUPPORT_HPP
#define POLARLAB_TESTS_SUPPORT_HPP

#include "polarlab/polynomial.hpp"
#include "polarlab/rational.hpp"

#include "doctest.h"

#include <optional>
#include <random>
#include <vector>

namespace testing {

using polarlab::ExtendedPoint;
using polarlab::FormalPolynomial;
using polarlab::Integer;
using polarlab::Rational;

inline Rational random_rational(std::mt19937_64& rng, int num_range = 20, int den_range = 7) {
  std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_range);
  return polarlab::make_rational(num(rng), den(rng));
}

inline Rational random_nonzero(std::mt19937_64& rng, int num_range = 20, int den_range = 7) {
  Rational r;
  do r = random_rational(rng, num_range, den_range);
  while (r == 0);
  return r;
}

// Arbitrary rational coefficients; the top one is nonzero so the precise degree is n.
inline FormalPolynomial random_polynomial(std::mt19937_64& rng, int n) {
  std::vector<Rational> c;
  for (int k = 0; k < n; ++k) c.push_back(random_rational(rng));
  c.push_back(random_nonzero(rng));
  return FormalPolynomial(c);
}

// Real-rooted with roots on the grid k/16, repeats allowed.
inline std::vector<Rational> random_roots(std::mt19937_64& rng, int n, int span = 64) {
  std::uniform_int_distribution<int> k(-span, span);
  std::vector<Rational> r;
  for (int i = 0; i < n; ++i) r.push_back(polarlab::make_rational(k(rng), 16));
  return r;
}

// A random extended point: infinity with probability 1/5.
inline ExtendedPoint random_point(std::mt19937_64& rng) {
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) return ExtendedPoint::infinity();
  return random_rational(rng);
}

// n p(x) - (x - a) p'(x) evaluated from a root list via p'/p = sum 1/(x - r), x not a root.
// Independent of the coefficient route in polar_derivative.
inline Rational polar_derivative_at(const std::vector<Rational>& roots, const Rational& lead, const ExtendedPoint& a,
                                    const Rational& x) {
  Rational p = lead, log_derivative = 0;
  for (const auto& r : roots) {
    p *= x - r;
    log_derivative += 1 / Rational(x - r);
  }
  if (a.is_infinite()) return p * log_derivative;
  return p * (static_cast<long>(roots.size()) - (x - a.value()) * log_derivative);
}

}  // namespace testing

namespace doctest {
template <>
struct StringMaker<polarlab::FormalPolynomial> {
  static String convert(const polarlab::FormalPolynomial& p) { return p.str().c_str(); }
};
template <>
struct StringMaker<polarlab::Rational> {
  static String convert(const polarlab::Rational& q) { return polarlab::to_string(q).c_str(); }
};
template <>
struct StringMaker<std::optional<polarlab::Rational>> {
  static String convert(const std::optional<polarlab::Rational>& q) {
    return q ? polarlab::to_string(*q).c_str() : "none";
  }
};
}  // namespace doctest

#endif  // POLARLAB_TESTS_SUPPORT_HPP
