#ifndef POLARLAB_POLYNOMIAL_HPP
#define POLARLAB_POLYNOMIAL_HPP

#include "polarlab/mobius.hpp"
#include "polarlab/rational.hpp"

#include "json.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polarlab {

/// Exact polynomial that remembers its formal degree.
///
/// coeffs()[k] is the coefficient of x^k and there are always formal_degree() + 1 of them.
/// Trailing zeros are meaningful: formal_degree() - precise_degree() is the number of
/// roots at infinity. The zero polynomial is allowed and has no precise degree.
class FormalPolynomial {
 public:
  /// Formal degree is coeffs.size() - 1.
  explicit FormalPolynomial(std::vector<Rational> coeffs);
  /// Pads with zeros up to formal_degree + 1 entries; throws if a nonzero coefficient
  /// would sit above formal_degree.
  FormalPolynomial(std::vector<Rational> coeffs, int formal_degree);

  static FormalPolynomial zero(int formal_degree);
  static FormalPolynomial constant(const Rational& c, int formal_degree);
  /// leading * prod (x - r), embedded at formal_degree (defaults to the number of roots).
  static FormalPolynomial from_roots(std::span<const Rational> roots, std::optional<int> formal_degree = {},
                                     const Rational& leading = 1);

  int formal_degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::optional<int> precise_degree() const;
  bool is_zero() const;
  /// Multiplicity of the root at infinity; throws for the zero polynomial.
  int infinity_multiplicity() const;

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  /// Coefficient of x^{precise degree}; throws for the zero polynomial.
  const Rational& leading_coefficient() const;

  Rational operator()(const Rational& x) const;

  /// Same coefficients at a different formal degree (must be >= precise degree).
  FormalPolynomial with_formal_degree(int n) const;

  FormalPolynomial scaled(const Rational& c) const;

  friend bool operator==(const FormalPolynomial& p, const FormalPolynomial& q) = default;

  std::string str() const;

 private:
  std::vector<Rational> coeffs_;
};

/// Product with formal degree equal to the sum of the formal degrees.
FormalPolynomial operator*(const FormalPolynomial& p, const FormalPolynomial& q);

/// D_alpha p = n p(x) - (x - alpha) p'(x) for finite alpha, and p' for alpha = infinity.
/// Result has formal degree n - 1. Throws std::invalid_argument for formal degree 0.
FormalPolynomial polar_derivative(const FormalPolynomial& p, const ExtendedPoint& alpha);

/// Applies polar_derivative (formal_degree - target_degree) times.
FormalPolynomial polar_derivative_iter(const FormalPolynomial& p, const ExtendedPoint& alpha, int target_degree);

/// T_* p(x) = (-c x + a)^n p(T^{-1}(x)) with T = (a z + b)/(c z + d), applied verbatim.
/// Roots (including those at infinity) are carried to their images under T.
FormalPolynomial mobius_pushforward(const FormalPolynomial& p, const MobiusMap& t);

FormalPolynomial shift(const FormalPolynomial& p, const Rational& c);   // roots r -> r + c
FormalPolynomial dilate(const FormalPolynomial& p, const Rational& c);  // roots r -> c r

/// Normalized coefficient vector e_k with a_{n-k} = (-1)^k binom(n,k) e_k (no monic rescaling).
std::vector<Rational> e_vector(const FormalPolynomial& p);
FormalPolynomial from_e_vector(std::span<const Rational> e);

/// Finite free multiplicative convolution at the common formal degree (bilinear).
FormalPolynomial finite_free_mult(const FormalPolynomial& p, const FormalPolynomial& q);

/// (n)_k (x - 1)^k at formal degree n, (n)_k the falling factorial.
FormalPolynomial q_polynomial(int n, int k);

/// sum_k x^{n-k} (-1)^k binom(n,k) (n b)_k / (n a)_k over tuples b (upper) and a (lower).
FormalPolynomial hypergeometric(int n, std::span<const Rational> upper, std::span<const Rational> lower);

/// hypergeometric(n, {lambda}, {}).
FormalPolynomial laguerre(int n, const Rational& lambda);

/// cos(d/dx) x^n = sum_k (-1)^k binom(n, 2k) x^{n-2k}.
FormalPolynomial cosine_appell(int n);

/// c with p = c q, if one exists and is nonzero. Requires equal formal degrees.
std::optional<Rational> proportionality_constant(const FormalPolynomial& p, const FormalPolynomial& q);

/// True when p = c q for some nonzero c, or when both are zero.
bool proportional(const FormalPolynomial& p, const FormalPolynomial& q);

Integer binomial(long n, long k);
Rational falling_factorial(const Rational& x, long k);

void to_json(nlohmann::json& j, const FormalPolynomial& p);
FormalPolynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace polarlab

#endif  // POLARLAB_POLYNOMIAL_HPP
