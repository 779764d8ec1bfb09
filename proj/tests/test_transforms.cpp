#include "doctest.h"
#include "support.hpp"

#include "polarlab/measures.hpp"
#include "polarlab/transforms.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace polarlab;

namespace {

const Complex I(0, 1);

Rational q(long n, long d = 1) { return make_rational(n, d); }

FamilyPart fp(const Rational& lambda, const Rational& shift = 0, const Rational& dilate = 1) {
  return {FamilyPart::Kind::FreePoisson, lambda, shift, dilate};
}

std::pair<double, double> support(double lambda) {
  const double s = std::sqrt(lambda);
  return {(1 - s) * (1 - s), (1 + s) * (1 + s)};
}

// G of pi_lambda by quadrature of the density, real and imaginary parts separately.
Complex resolvent_by_quadrature(double lambda, Complex z) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto [lo, hi] = support(lambda);
  const double re = ts.integrate([&](double x) { return (1.0 / (z - x)).real() * mp_density(lambda, x); }, lo, hi);
  const double im = ts.integrate([&](double x) { return (1.0 / (z - x)).imag() * mp_density(lambda, x); }, lo, hi);
  return {re, im};
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("Cauchy transform examples") {
  CHECK(std::abs(cauchy_transform(ExtendedMeasure::dirac(0), I) - (-I)) < 1e-15);
  CHECK(std::abs(cauchy_transform(ExtendedMeasure::cauchy(), 2.0 * I) - 1.0 / (3.0 * I)) < 1e-15);
  CHECK(std::abs(cauchy_transform(ExtendedMeasure::dirac(ExtendedPoint::infinity()), I)) == 0);
  CHECK_THROWS_AS(cauchy_transform(ExtendedMeasure::cauchy(), 1.5), std::invalid_argument);

  for (const Complex z : {Complex(5, 1), Complex(0.3, 0.2), Complex(2, -0.5), Complex(-1, 3)})
    CHECK(std::abs(cauchy_transform(ExtendedMeasure::free_poisson(2), z) - resolvent_by_quadrature(2, z)) < 1e-8);

  const ExtendedMeasure mixed({{1, q(1, 4)}, {ExtendedPoint::infinity(), q(1, 4)}}, EmpiricalPart{{-1.0, 2.0}});
  const Complex z(0.5, 1);
  CHECK(std::abs(cauchy_transform(mixed, z) - (0.25 / (z - 1.0) + 0.25 / (z + 1.0) + 0.25 / (z - 2.0))) < 1e-15);
}

TEST_CASE("Marchenko-Pastur density") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double lambda : {1.0, 2.0, 4.0}) {
    const auto [lo, hi] = support(lambda);
    const double mass = ts.integrate([&](double x) { return mp_density(lambda, x); }, lo, hi);
    const double mean = ts.integrate([&](double x) { return x * mp_density(lambda, x); }, lo, hi);
    CHECK(std::abs(mass - 1) < 1e-10);
    CHECK(std::abs(mean - lambda) < 1e-8);
  }
  CHECK(mp_density(1, 0) == 0);
  CHECK(mp_density(2, 100) == 0);
  CHECK_THROWS_AS(mp_density(0.5, 1), std::invalid_argument);
}

TEST_CASE("Cauchy density") {
  CHECK(cauchy_density(0) == doctest::Approx(1 / std::numbers::pi).epsilon(1e-15));
  CHECK(cauchy_density(1) == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-15));
  for (double x : {0.3, 2.0, 17.0}) CHECK(cauchy_density(x) == cauchy_density(-x));
}

TEST_CASE("Stieltjes inversion recovers the densities") {
  auto max_error = [](const ExtendedMeasure& mu, auto density, double eps, double lo, double hi) {
    double worst = 0;
    for (double x = lo; x <= hi; x += (hi - lo) / 50) {
      const double approx = -cauchy_transform(mu, Complex(x, eps)).imag() / std::numbers::pi;
      worst = std::max(worst, std::abs(approx - density(x)));
    }
    return worst;
  };
  const auto mp = [](double x) { return mp_density(2, x); };
  const double e2 = max_error(ExtendedMeasure::free_poisson(2), mp, 1e-2, 0.5, 5);
  const double e3 = max_error(ExtendedMeasure::free_poisson(2), mp, 1e-3, 0.5, 5);
  CHECK(e3 < e2);
  CHECK(e3 < 1e-2);
  const double c2 = max_error(ExtendedMeasure::cauchy(), cauchy_density, 1e-2, -4, 4);
  const double c3 = max_error(ExtendedMeasure::cauchy(), cauchy_density, 1e-3, -4, 4);
  CHECK(c3 < c2);
  CHECK(c3 < 1e-3);
}

TEST_CASE("resolvent branch behaves like 1/z at infinity") {
  for (double theta : {0.1, 1.0, 2.0, 3.0, -0.5, -2.5}) {
    const Complex z = 1e6 * std::exp(I * theta);
    for (const auto& mu : {ExtendedMeasure::free_poisson(2), ExtendedMeasure::free_poisson(q(3, 2)),
                           ExtendedMeasure::of(fp(4, 1, q(-1, 2))), ExtendedMeasure::cauchy()})
      CHECK(std::abs(z * cauchy_transform(mu, z) - 1.0) < 1e-5);
  }
}

TEST_CASE("pushforward identity for the Cauchy transform") {
  // For T(z) = 1/(z - a): G_{T mu}(z) = 1/z - G_mu(a + 1/z) / z^2.
  const std::vector<Complex> grid{Complex(0.5, 1), Complex(-2, 0.3), Complex(1, -1.5), Complex(0.1, 4)};
  const ExtendedMeasure mixed({{q(1, 3), q(1, 4)}, {-2, q(1, 8)}}, EmpiricalPart{{-1.5, 0.25, 0.75, 3.0}});
  for (const Rational& a : {q(0), q(1), q(-1, 2)}) {
    const double ad = to_double(a);
    for (const auto& mu : {ExtendedMeasure::cauchy(), mixed}) {
      const auto pushed = mobius_push(mu, MobiusMap::inversion_at(a));
      for (const Complex z : grid) {
        const Complex rhs = 1.0 / z - cauchy_transform(mu, ad + 1.0 / z) / (z * z);
        CHECK(std::abs(cauchy_transform(pushed, z) - rhs) < 1e-10);
      }
    }
  }
}

TEST_CASE("R-transforms") {
  CHECK(std::abs(r_free_poisson(2.5, 0) - 2.5) < 1e-15);
  CHECK_THROWS_AS(r_free_poisson(2, 1), std::invalid_argument);

  SUBCASE("dilation rule") {
    for (const Rational& t : {q(1), q(3, 2), q(3)})
      for (const Rational& lambda : {q(3, 2), q(2)}) {
        const auto f = fp(t * lambda - t + 1, 0, 1 / t);
        for (const Complex y : {Complex(0.2, 0.1), Complex(-1, 0.5), Complex(0.7, 0)}) {
          const Complex expect = to_double(t * lambda - (t - 1)) / (to_double(t) - y);
          CHECK(std::abs(r_transform(f, y) - expect) < 1e-13);
        }
      }
  }
  SUBCASE("F^t rescales the argument") {
    for (const Rational& t : {q(3, 2), q(4)}) {
      const auto pushed = f_power(ExtendedMeasure::free_poisson(2), t);
      for (const Complex z : {Complex(0.2, 0.1), Complex(-0.5, 0.4)})
        CHECK(std::abs(r_transform(*pushed.family(), z) - r_free_poisson(2, z / to_double(t))) < 1e-13);
    }
  }
  SUBCASE("G(R(z) + 1/z) = z") {
    for (const auto& f : {fp(2), fp(q(3, 2), 1, q(1, 2)), fp(4, q(-1, 3), -2)})
      for (const Complex z : {Complex(0.1, 0.05), Complex(-0.08, 0.1), Complex(0.05, -0.1), Complex(-0.1, -0.02)})
        CHECK(std::abs(cauchy_transform(ExtendedMeasure::of(f), r_transform(f, z) + 1.0 / z) - z) < 1e-9);
    const FamilyPart c = FamilyPart::cauchy();
    for (const Complex z : {Complex(0, -0.2), Complex(0.1, -0.3)})
      CHECK(std::abs(cauchy_transform(ExtendedMeasure::of(c), r_transform(c, z) + 1.0 / z) - z) < 1e-12);
  }
}

TEST_CASE("characteristic relation") {
  CHECK(characteristic_residual(fp(2), 0, 1, -0.3) == 0);
  CHECK(characteristic_residual(fp(2), 0, 2, -0.3) < 1e-10);
  CHECK_THROWS_AS(characteristic_residual(fp(2), 1, 2, -0.3), std::invalid_argument);
  CHECK_THROWS_AS(characteristic_residual(FamilyPart::cauchy(), 0, 2, -0.3), std::invalid_argument);

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> xi(-2, 0.9), tt(1, 5);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto f = i % 2 ? fp(2, 0, 1) : fp(q(5, 2), 1, q(3, 4));
    worst = std::max(worst, characteristic_residual(f, f.shift, tt(rng), xi(rng)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("PDE residuals of the closed-form powers") {
  const auto cauchy = ExtendedMeasure::cauchy();
  for (const ExtendedPoint& a : {ExtendedPoint(0), ExtendedPoint(1), ExtendedPoint::infinity()}) {
    CHECK(pde_residual_G(cauchy, a, 2, Complex(1, 2), 1e-4) < 1e-6);
    CHECK(pde_residual_R(cauchy, a, 2, Complex(0.1, -0.2), 1e-4) < 1e-6);
  }
  const auto pi = ExtendedMeasure::free_poisson(2);
  CHECK(pde_residual_G(pi, ExtendedPoint::infinity(), 2, Complex(0, 3), 1e-4) < 1e-6);
  CHECK(pde_residual_G(pi, 0, 2, Complex(1, 2), 1e-4) < 1e-6);
  CHECK(pde_residual_R(pi, 0, 2, Complex(0.1, 0.2), 1e-4) < 1e-6);
  CHECK_THROWS_AS(pde_residual_G(pi, 0, 2, Complex(1, 0), 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(pde_residual_G(pi, 0, 2, Complex(1, 1), 0), std::invalid_argument);
  CHECK_THROWS_AS(pde_residual_G(pi, 1, 2, Complex(1, 1), 1e-4), std::invalid_argument);

  SUBCASE("second-order convergence in h") {
    const auto shifted = ExtendedMeasure::of(fp(2, 1));
    for (const auto& [mu, a] : {std::pair{pi, ExtendedPoint::infinity()}, std::pair{pi, ExtendedPoint(0)},
                                std::pair{shifted, ExtendedPoint(1)}}) {
      for (const Complex z : {Complex(0, 3), Complex(1, 2), Complex(-0.5, 0.75)}) {
        const double r1 = pde_residual_G(mu, a, 2, z, 1e-3), r2 = pde_residual_G(mu, a, 2, z, 5e-4);
        CHECK(r1 / r2 > 3);
        CHECK(r1 / r2 < 5);
      }
    }
  }
}

TEST_CASE("residual CSV") {
  std::ostringstream os;
  write_residual_csv(os, {{"free_poisson", 2, "inf", 2, Complex(0, 3), 1e-4, 1.5e-9}});
  CHECK(os.str() == "family,lambda,a,t,z_re,z_im,h,residual\nfree_poisson,2,inf,2,0,3,0.0001,1.5e-09\n");
}

}  // TEST_SUITE
