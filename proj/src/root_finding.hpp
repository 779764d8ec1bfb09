#ifndef POLARLAB_SRC_ROOT_FINDING_HPP
#define POLARLAB_SRC_ROOT_FINDING_HPP

#include "intpoly.hpp"

#include <vector>

namespace polarlab::detail {

/// Exact dyadic number j / 2^level.
struct Dyadic {
  Integer j;
  unsigned long level = 0;

  Rational value() const;
  static Dyadic floor_of(const Rational& x, unsigned long level);  // largest grid point <= x
};

int sign_at(const IntPoly& p, const Dyadic& x);

/// Open interval (lo, hi) containing exactly one root; p(lo) and p(hi) are nonzero with
/// opposite signs.
struct IsolatingInterval {
  Dyadic lo, hi;
  int sign_lo = 0;
  Rational approx;  // a point of (lo, hi) close to the root
};

struct Isolation {
  int degree = 0;
  int real_count = 0;                      // distinct real roots (Sturm) or degree when certified
  bool certified_by_approximation = false;  // true when the sign-alternation certificate succeeded
  std::vector<IsolatingInterval> intervals;  // sorted; filled only when every root is real
};

/// Multiprecision Aberth iteration on the real line followed by an exact sign-alternation
/// check at dyadic separators. Returns false (leaving out unspecified) when the check fails,
/// which includes every polynomial with repeated or non-real roots.
bool isolate_by_approximation(const IntPoly& p, Isolation& out);

/// Isolates the real roots of a square-free primitive polynomial of degree >= 1.
/// Fast path: multiprecision Aberth iteration on the real line followed by an exact
/// sign-alternation check at dyadic separators. Fallback: Sturm sequence bisection.
Isolation isolate_square_free(const IntPoly& p);

/// Distinct real roots of a square-free polynomial via its Sturm sequence.
int sturm_count(const IntPoly& p);

}  // namespace polarlab::detail

#endif  // POLARLAB_SRC_ROOT_FINDING_HPP
