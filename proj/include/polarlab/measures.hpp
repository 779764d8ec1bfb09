#ifndef POLARLAB_MEASURES_HPP
#define POLARLAB_MEASURES_HPP

#include "polarlab/measure.hpp"
#include "polarlab/mobius.hpp"
#include "polarlab/polynomial.hpp"

namespace polarlab {

/// Settings for the polynomial route used when no closed form applies:
/// quantile polynomial of degree `degree`, iterated polar derivative, root distribution.
struct BridgeOptions {
  int degree = 512;
  Rational root_tolerance = Rational(1, Integer(1) << 30);
};

struct CommuteParams {
  Rational s, t, s_prime, t_prime;
};

/// Pushforward T_* mu. Atoms and samples map pointwise (a sample at the pole becomes mass at
/// infinity). Family parts map under affine T, and Cauchy laws under every T.
/// Throws std::invalid_argument("push not representable; convert to Empirical first") otherwise.
ExtendedMeasure mobius_push(const ExtendedMeasure& mu, const MobiusMap& t);

/// F^t on the extended line: with s = mu({inf}), ts >= 1 gives delta_inf and otherwise
/// ts delta_inf + (1 - ts) F^{(t - ts)/(1 - ts)} of the normalized finite part.
ExtendedMeasure f_power(const ExtendedMeasure& mu, const Rational& t, const BridgeOptions& opts = {});

/// F^u for a measure without mass at infinity.
ExtendedMeasure f_power_real(const ExtendedMeasure& nu, const Rational& u, const BridgeOptions& opts = {});

/// F_a^t. Closed forms: a = inf reduces to f_power; t mu({a}) >= 1 gives delta_a; Cauchy laws
/// are fixed; free Poisson laws shifted to a follow the shifted-dilated rule. Anything else goes
/// through the bridge with D_a.
ExtendedMeasure polar_power(const ExtendedMeasure& mu, const ExtendedPoint& a, const Rational& t,
                            const BridgeOptions& opts = {});

/// Predicted mass of F_a^s mu at b: max{0, 1 - s (1 - mu({b}))}. Requires a != b and mu({a}) < 1/s.
Rational atom_mass(const ExtendedMeasure& mu, const ExtendedPoint& a, const Rational& s, const ExtendedPoint& b);

/// s' = 1 + st - s and t' = st / s', so that F_0^s F^t = F^{s'} F_0^{t'}.
CommuteParams commute_params(const Rational& s, const Rational& t);

/// B_t^{b,a} mu = F_b^{1+t} F_a^{1/(1+t)} mu on the families where the inverse power has a closed
/// form: free Poisson with rate > 1 and a at its shift (b = inf), and Cauchy laws.
ExtendedMeasure bn_semigroup(const ExtendedMeasure& mu, const ExtendedPoint& b, const ExtendedPoint& a,
                             const Rational& t);

/// Polynomial of formal degree n with round(n w) roots at each atom (infinity included) and the
/// remaining R roots at the part's quantiles (2i - 1) / (2R), rounded to the 2^-32 grid.
FormalPolynomial quantile_polynomial(const ExtendedMeasure& mu, int n);

/// Quantile of a (decorated) family law.
double family_quantile(const FamilyPart& f, double u);

/// sup |F1 - F2| over `grid` points equally spaced in the arctan chart, every atom and sample
/// location of either measure (both one-sided limits), and the point at infinity.
double kolmogorov_distance(const ExtendedMeasure& m1, const ExtendedMeasure& m2, int grid = 4096);

}  // namespace polarlab

#endif  // POLARLAB_MEASURES_HPP
