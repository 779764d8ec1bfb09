#ifndef POLARLAB_SRC_INTPOLY_HPP
#define POLARLAB_SRC_INTPOLY_HPP

// Dense integer polynomials used internally by root isolation.
// Coefficients are low-to-high; the zero polynomial is the empty vector.

#include "polarlab/rational.hpp"

#include <optional>
#include <vector>

namespace polarlab::detail {

using IntPoly = std::vector<Integer>;

void trim(IntPoly& p);
int degree(const IntPoly& p);  // -1 for zero

/// Divides out the content and makes the leading coefficient positive.
IntPoly primitive(IntPoly p);
IntPoly derivative(const IntPoly& p);

/// Primitive integer multiple of the given rational coefficients.
IntPoly from_rationals(const std::vector<Rational>& c);

/// a / b when b divides a over Z[x].
std::optional<IntPoly> exact_div(const IntPoly& a, const IntPoly& b);

/// Primitive gcd with positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

/// True when gcd(p, p') is constant modulo a prime not dividing the leading coefficient,
/// which proves p square-free. False means "probably not square-free".
bool square_free_mod_prime(const IntPoly& p);

IntPoly multiply(const IntPoly& a, const IntPoly& b);

/// factors[i] holds the product of the irreducible factors of multiplicity i + 1
/// (possibly the constant 1). Input must be primitive and nonconstant.
std::vector<IntPoly> square_free_decomposition(const IntPoly& p);

/// Sign of p(j / 2^level).
int sign_at_dyadic(const IntPoly& p, const Integer& j, unsigned long level);
int sign_at(const IntPoly& p, const Rational& x);
/// Sign of p(x) as x -> +inf (positive = true) or -inf.
int sign_at_infinity(const IntPoly& p, bool positive);

/// Smallest k >= 1 with every root strictly inside (-2^k, 2^k).
unsigned long root_bound_log2(const IntPoly& p);

/// Sturm sequence p, p', -rem, ... with positive-content normalization.
std::vector<IntPoly> sturm_sequence(const IntPoly& p);
int sign_variations_at_dyadic(const std::vector<IntPoly>& seq, const Integer& j, unsigned long level);
int sign_variations_at_infinity(const std::vector<IntPoly>& seq, bool positive);
/// Number of distinct real roots of the first element of seq.
int sturm_real_root_count(const std::vector<IntPoly>& seq);

}  // namespace polarlab::detail

#endif  // POLARLAB_SRC_INTPOLY_HPP
