#ifndef POLARLAB_ROOTS_HPP
#define POLARLAB_ROOTS_HPP

#include "polarlab/measure.hpp"
#include "polarlab/polynomial.hpp"

#include "json.hpp"

#include <stdexcept>
#include <vector>

namespace polarlab {

/// Closed interval [lo, hi] certified to contain exactly one distinct root, of the given multiplicity.
/// lo == hi when the root is a dyadic rational found exactly.
struct RootInterval {
  Rational lo, hi;
  int multiplicity = 1;

  Rational midpoint() const { return (lo + hi) / 2; }
  double approx() const { return to_double(midpoint()); }
  friend bool operator==(const RootInterval&, const RootInterval&) = default;
};

/// Sorted finite roots with multiplicity and the number of roots at infinity.
struct RootProfile {
  std::vector<RootInterval> roots;
  int at_infinity = 0;

  int finite_count() const;
  int formal_degree() const { return finite_count() + at_infinity; }
  /// Root midpoints repeated by multiplicity, ascending.
  std::vector<double> values() const;
  friend bool operator==(const RootProfile&, const RootProfile&) = default;
};

/// Raised by isolate_roots for polynomials with non-real roots. Carries the Sturm count.
class NotRealRooted : public std::runtime_error {
 public:
  NotRealRooted(int real_count, int distinct_degree);
  int real_count() const { return real_count_; }          // distinct real roots
  int distinct_degree() const { return distinct_degree_; }  // degree of the square-free part

 private:
  int real_count_;
  int distinct_degree_;
};

/// Whether all roots of the precise-degree part are real. Throws for the zero polynomial.
bool is_real_rooted(const FormalPolynomial& p);

/// Number of distinct real roots, from a Sturm sequence of the square-free part.
int sturm_real_root_count(const FormalPolynomial& p);

/// Dyadic enclosures of width <= tol. Intervals only depend on p and tol, and shrinking
/// tol yields nested intervals. Throws NotRealRooted, or std::invalid_argument for zero p.
RootProfile isolate_roots(const FormalPolynomial& p, const Rational& tol);

/// Atoms multiplicity / n at the interval midpoints and at_infinity / n at infinity.
ExtendedMeasure empirical_distribution(const RootProfile& r);

/// q interlaces p: lambda_1(p) <= lambda_1(q) <= lambda_2(p) <= ... , with q having the same
/// number of finite roots as p or one fewer. Overlapping enclosures count as equal.
bool interlaces(const RootProfile& p, const RootProfile& q);

/// lambda_k(p) <= lambda_k(q) for all k; requires equal finite root counts.
bool dominates(const RootProfile& p, const RootProfile& q);

void to_json(nlohmann::json& j, const RootProfile& r);
RootProfile root_profile_from_json(const nlohmann::json& j);

}  // namespace polarlab

#endif  // POLARLAB_ROOTS_HPP
