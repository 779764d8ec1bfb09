#include "polarlab/transforms.hpp"

#include "polarlab/measures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace polarlab {

namespace {

constexpr double kPoleTolerance = 1e-12;

// Resolvent of pi_lambda. The product of principal square roots has its cut on the support
// and behaves like w at infinity, which gives G ~ 1/w off the real line on both sides.
Complex free_poisson_resolvent(double lambda, Complex w) {
  const double s = std::sqrt(lambda);
  const double lo = (1 - s) * (1 - s), hi = (1 + s) * (1 + s);
  const Complex root = std::sqrt(w - lo) * std::sqrt(w - hi);
  const Complex b = w + 1.0 - lambda;
  // (b - root)(b + root) = 4w; pick the form without cancellation.
  if (std::abs(b + root) >= std::abs(b - root)) return 2.0 / (b + root);
  return (b - root) / (2.0 * w);
}

Complex base_resolvent(const FamilyPart& f, Complex w) {
  if (f.kind == FamilyPart::Kind::Cauchy) return w.imag() > 0 ? 1.0 / (w + Complex(0, 1)) : 1.0 / (w - Complex(0, 1));
  return free_poisson_resolvent(to_double(f.lambda), w);
}

Complex family_resolvent(const FamilyPart& f, Complex z) {
  const double d = to_double(f.dilate), c = to_double(f.shift);
  return base_resolvent(f, (z - c) / d) / d;
}

void require_off_axis(Complex z) {
  if (z.imag() == 0) throw std::invalid_argument("Cauchy transform needs a point off the real axis");
}

// F_a^t mu for the families with a closed form; the bridge is never used here.
FamilyPart closed_power(const ExtendedMeasure& mu, const ExtendedPoint& a, double t) {
  const FamilyPart* f = mu.family();
  if (!f || !mu.atoms().empty()) throw std::invalid_argument("closed-form power needs a pure family law");
  if (f->kind == FamilyPart::Kind::FreePoisson && a.is_finite() && f->shift != a.value())
    throw std::invalid_argument("closed-form polar power needs the free Poisson law shifted to the pole");
  const ExtendedMeasure p = polar_power(mu, a, from_double(t));
  if (!p.family() || !p.atoms().empty()) throw std::invalid_argument("power left the family (rate dropped to 0)");
  return *p.family();
}

Complex power_resolvent(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z) {
  return family_resolvent(closed_power(mu, a, t), z);
}

Complex power_r(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z) {
  return r_transform(closed_power(mu, a, t), z);
}

}  // namespace

Complex cauchy_transform(const ExtendedMeasure& mu, Complex z) {
  require_off_axis(z);
  Complex g = 0;
  for (const auto& atom : mu.atoms())
    if (atom.at.is_finite()) g += to_double(atom.weight) / (z - to_double(atom.at.value()));
  const double w = to_double(mu.part_weight());
  if (const auto* f = mu.family()) {
    g += w * family_resolvent(*f, z);
  } else if (const auto* e = mu.empirical_part()) {
    Complex s = 0;
    for (double x : e->samples) s += 1.0 / (z - x);
    g += w * s / static_cast<double>(e->samples.size());
  }
  return g;
}

double mp_density(double lambda, double x) {
  if (lambda < 1) throw std::invalid_argument("mp_density needs lambda >= 1 (the atom at 0 is not a density)");
  const double s = std::sqrt(lambda);
  const double lo = (1 - s) * (1 - s), hi = (1 + s) * (1 + s);
  if (x <= lo || x >= hi) return 0;
  return std::sqrt((x - lo) * (hi - x)) / (2 * std::numbers::pi * x);
}

double cauchy_density(double x) { return 1 / (std::numbers::pi * (1 + x * x)); }

Complex r_free_poisson(double lambda, Complex z) {
  if (std::abs(1.0 - z) < kPoleTolerance) throw std::invalid_argument("R-transform of free Poisson has a pole at z = 1");
  return lambda / (1.0 - z);
}

Complex r_transform(const FamilyPart& f, Complex z) {
  const double d = to_double(f.dilate), c = to_double(f.shift);
  // Standard Cauchy: G^{-1}(w) = 1/w - i, so R = -i; dX has the law of |d| X.
  if (f.kind == FamilyPart::Kind::Cauchy) return Complex(c, -std::abs(d));
  return c + d * r_free_poisson(to_double(f.lambda), d * z);
}

double characteristic_residual(const FamilyPart& f, const Rational& a, double t, double xi0) {
  if (f.kind != FamilyPart::Kind::FreePoisson || f.shift != a)
    throw std::invalid_argument("characteristic relation needs a free Poisson law shifted to a");
  const ExtendedMeasure mu = ExtendedMeasure::of(f);
  const Complex r0 = r_transform(f, xi0);
  const Complex gap = to_double(a) - r0;
  if (std::abs(gap) < kPoleTolerance) throw std::invalid_argument("characteristic line hits a pole (a = R(xi0))");
  const Complex y = t * xi0 + (1 - t) / gap;
  const Complex lhs = power_r(mu, a, t, y);
  return std::abs(lhs - r0);
}

double pde_residual_G(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z, double h) {
  require_off_axis(z);
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const Complex g = power_resolvent(mu, a, t, z);
  const Complex gt = (power_resolvent(mu, a, t + h, z) - power_resolvent(mu, a, t - h, z)) / (2 * h);
  const Complex gz = (power_resolvent(mu, a, t, z + h) - power_resolvent(mu, a, t, z - h)) / (2 * h);
  Complex rhs;
  if (a.is_infinite()) {
    if (std::abs(g) < kPoleTolerance) throw std::invalid_argument("degenerate denominator G = 0");
    rhs = g + gz / g;
  } else {
    const Complex za = z - to_double(a.value());
    const Complex den = -1.0 + za * g;
    if (std::abs(den) < kPoleTolerance) throw std::invalid_argument("degenerate denominator -1 + (z - a) G");
    rhs = g + (g + za * gz) / den;
  }
  return std::abs(t * gt - rhs);
}

double pde_residual_R(const ExtendedMeasure& mu, const ExtendedPoint& a, double t, Complex z, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const Complex r = power_r(mu, a, t, z);
  const Complex rt = (power_r(mu, a, t + h, z) - power_r(mu, a, t - h, z)) / (2 * h);
  const Complex rz = (power_r(mu, a, t, z + h) - power_r(mu, a, t, z - h)) / (2 * h);
  Complex rhs = -z * rz;
  if (a.is_finite()) {
    const Complex gap = to_double(a.value()) - r;
    if (std::abs(gap) < kPoleTolerance) throw std::invalid_argument("degenerate denominator a - R");
    rhs += rz / gap;
  }
  return std::abs(t * rt - rhs);
}

void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows) {
  os << "family,lambda,a,t,z_re,z_im,h,residual\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.family.c_str(), r.lambda,
                  r.a.c_str(), r.t, r.z.real(), r.z.imag(), r.h, r.residual);
    os << buf;
  }
}

}  // namespace polarlab
