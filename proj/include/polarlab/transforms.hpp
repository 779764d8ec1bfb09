#ifndef POLARLAB_TRANSFORMS_HPP
#define POLARLAB_TRANSFORMS_HPP

#include "polarlab/measure.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace polarlab {

using Complex = std::complex<double>;

/// G_mu(z) = integral of 1/(z - x) dmu(x). Atoms at infinity contribute 0.
/// Throws std::invalid_argument when im(z) == 0.
Complex cauchy_transform(const ExtendedMeasure& mu, Complex z);

/// Marchenko-Pastur density of pi_lambda; lambda < 1 (atom at 0) is rejected.
double mp_density(double lambda, double x);

double cauchy_density(double x);

/// lambda / (1 - z); throws at z = 1.
Complex r_free_poisson(double lambda, Complex z);

/// R-transform of a decorated family law: c + d R_X(d z).
Complex r_transform(const FamilyPart& f, Complex z);

/// |R_a(t xi0 + (1 - t) / (a - R_mu(xi0)), t) - R_mu(xi0)| for a free Poisson law shifted to a,
/// both sides from closed forms. Throws on a pole collision.
double characteristic_residual(const FamilyPart& f, const Rational& a, double t, double xi0);

/// Central-difference residual of the Cauchy-transform PDE for F_a^t mu: the F^t form at
/// a = inf, the polar form otherwise. mu must be a pure family law with a closed-form power.
double pde_residual_G(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z, double h);

/// Central-difference residual of the R-transform PDE t dR/dt = -z dR/dz + (dR/dz) / (a - R)
/// (last term dropped at a = inf), for the same closed-form families.
double pde_residual_R(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z, double h);

struct ResidualRow {
  std::string family;
  double lambda = 0;
  std::string a;
  double t = 0;
  Complex z;
  double h = 0;
  double residual = 0;
};

/// CSV with header family,lambda,a,t,z_re,z_im,h,residual.
void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows);

}  // namespace polarlab

#endif  // POLARLAB_TRANSFORMS_HPP
