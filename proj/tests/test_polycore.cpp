#include "doctest.h"
#include "support.hpp"

#include "polarlab/polynomial.hpp"

#include <random>

using namespace polarlab;
using testing::random_point;
using testing::random_polynomial;
using testing::random_rational;
using testing::random_roots;

namespace {

FormalPolynomial poly(std::vector<long> c) {
  std::vector<Rational> q;
  for (long x : c) q.emplace_back(x);
  return FormalPolynomial(q);
}

FormalPolynomial power_of_linear(const Rational& alpha, int n) {
  std::vector<Rational> roots(static_cast<std::size_t>(n), alpha);
  return FormalPolynomial::from_roots(roots);
}

Rational root_mean(const std::vector<Rational>& roots) {
  Rational s = 0;
  for (const auto& r : roots) s += r;
  return s / static_cast<long>(roots.size());
}

}  // namespace

TEST_SUITE("polycore") {

TEST_CASE("formal degree is kept apart from the precise degree") {
  const FormalPolynomial p({Rational(-1), Rational(0), Rational(1)}, 4);
  CHECK(p.formal_degree() == 4);
  CHECK(p.precise_degree() == 2);
  CHECK(p.infinity_multiplicity() == 2);
  CHECK(p.leading_coefficient() == 1);

  const auto z = FormalPolynomial::zero(3);
  CHECK(z.is_zero());
  CHECK_FALSE(z.precise_degree().has_value());
  CHECK_THROWS_AS(z.infinity_multiplicity(), std::invalid_argument);
  CHECK_THROWS_AS(FormalPolynomial({Rational(1), Rational(1)}, 0), std::invalid_argument);
  CHECK(p.with_formal_degree(2) == poly({-1, 0, 1}));
  CHECK_THROWS(p.with_formal_degree(1));
}

TEST_CASE("polar derivative examples") {
  SUBCASE("(x - alpha)^n is sent to zero") {
    for (int n = 1; n <= 6; ++n) {
      const Rational alpha(3, 7);
      const auto d = polar_derivative(power_of_linear(alpha, n), alpha);
      CHECK(d.is_zero());
      CHECK(d.formal_degree() == n - 1);
    }
  }
  SUBCASE("alpha = infinity is ordinary differentiation") {
    const auto d = polar_derivative(poly({0, 0, 0, 0, 0, 1}), ExtendedPoint::infinity());
    CHECK(d == poly({0, 0, 0, 0, 5}));
  }
  SUBCASE("x^2 - 1 at the root mean drops to a constant") {
    const auto d = polar_derivative(poly({-1, 0, 1}), 0);
    CHECK(d == poly({-2, 0}));
    CHECK(d.precise_degree() == 0);
    CHECK(d.infinity_multiplicity() == 1);
  }
  SUBCASE("formal degree 0 is rejected") {
    CHECK_THROWS_WITH_AS(polar_derivative(FormalPolynomial::constant(5, 0), 1), "cannot differentiate formal degree 0",
                         std::invalid_argument);
  }
}

TEST_CASE("polar derivative agrees with the logarithmic-derivative oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 9;
    const auto roots = random_roots(rng, n);
    const Rational lead = testing::random_nonzero(rng);
    const auto p = FormalPolynomial::from_roots(roots, {}, lead);
    const ExtendedPoint a = random_point(rng);
    const auto d = polar_derivative(p, a);
    for (int i = 0; i < 5; ++i) {
      const Rational x(2 * i + 1, 37);  // off the k/16 grid, never a root
      CHECK(d(x) == testing::polar_derivative_at(roots, lead, a, x));
    }
  }
}

TEST_CASE("iterated polar derivative") {
  const auto p = poly({3, -1, 4, 1, -5});
  CHECK(polar_derivative_iter(p, 2, 4) == p);
  CHECK(polar_derivative_iter(p, 2, 2) == polar_derivative(polar_derivative(p, 2), 2));
  CHECK_THROWS_AS(polar_derivative_iter(p, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(polar_derivative_iter(p, 2, -1), std::invalid_argument);

  SUBCASE("a factor (x - alpha)^m passes through") {
    std::mt19937_64 rng(5);
    for (int m = 1; m <= 4; ++m) {
      const Rational alpha = random_rational(rng);
      const auto q = random_polynomial(rng, 5);
      const auto p = power_of_linear(alpha, m) * q;
      const auto expect = power_of_linear(alpha, m) * polar_derivative(q, alpha);
      CHECK(polar_derivative_iter(p, alpha, p.formal_degree() - 1) == expect);
    }
  }
}

TEST_CASE("commutation of polar derivatives") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 80; ++trial) {
    const auto p = random_polynomial(rng, 2 + trial % 11);
    const ExtendedPoint a = random_point(rng);
    ExtendedPoint b = random_point(rng);
    while (b == a) b = random_point(rng);
    CHECK(polar_derivative(polar_derivative(p, a), b) == polar_derivative(polar_derivative(p, b), a));
  }
}

TEST_CASE("degree drop happens exactly at the root mean") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 7;
    const auto roots = random_roots(rng, n);
    const auto p = FormalPolynomial::from_roots(roots);
    const Rational mean = root_mean(roots);
    CHECK(polar_derivative(p, mean).precise_degree().value_or(-1) < n - 1);
    const Rational off = mean + Rational(1, 3);
    CHECK(polar_derivative(p, off).precise_degree() == n - 1);
    // The same criterion read off the coefficients: n a lead = -(second coefficient).
    CHECK(n * mean * p[n] == -p[n - 1]);
  }
}

TEST_CASE("Mobius map") {
  const MobiusMap t(2, 1, 1, 3);
  CHECK(t(ExtendedPoint::infinity()) == ExtendedPoint(2));
  CHECK(t(-3) == ExtendedPoint::infinity());
  CHECK(t(0) == ExtendedPoint(Rational(1, 3)));
  const ExtendedPoint x = Rational(5, 2);
  CHECK(t.inverse()(t(x)) == x);
  CHECK(t.after(t.inverse())(x) == x);
  CHECK(MobiusMap::inversion_at(4)(4) == ExtendedPoint::infinity());
  CHECK_THROWS_AS(MobiusMap(1, 2, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(MobiusMap::dilation(0), std::invalid_argument);
}

TEST_CASE("pushforward examples") {
  const auto p = poly({2, -3, 1});
  CHECK(proportional(mobius_pushforward(p, MobiusMap::identity()), p));
  CHECK(mobius_pushforward(p, MobiusMap(0, 1, 1, 0)) == poly({1, -3, 2}));
  CHECK_THROWS_AS(mobius_pushforward(FormalPolynomial::zero(2), MobiusMap::identity()), std::invalid_argument);

  SUBCASE("roots at infinity are carried") {
    // x - 1 at formal degree 2 has one root at infinity; 1/z sends it to 0 and 1 to 1.
    const FormalPolynomial q({Rational(-1), Rational(1)}, 2);
    const auto image = mobius_pushforward(q, MobiusMap(0, 1, 1, 0));
    const std::vector<Rational> expect_roots{0, 1};
    CHECK(proportional(image, FormalPolynomial::from_roots(expect_roots)));
  }
}

TEST_CASE("shift and dilate") {
  CHECK(shift(poly({0, 0, 1}), 1) == poly({1, -2, 1}));
  const std::vector<Rational> pm2{-2, 2};
  CHECK(proportional(dilate(poly({-1, 0, 1}), 2), FormalPolynomial::from_roots(pm2)));
  CHECK_THROWS_AS(dilate(poly({-1, 0, 1}), 0), std::invalid_argument);

  // shift after dilate is the single affine map z -> c z + s.
  const auto p = poly({7, -2, 0, 3});
  const Rational c(3, 2), s(-5, 4);
  CHECK(proportional(shift(dilate(p, c), s), mobius_pushforward(p, MobiusMap(c, s, 0, 1))));
}

TEST_CASE("Mobius intertwining and conjugation") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_polynomial(rng, 2 + trial % 8);
    const ExtendedPoint alpha = random_point(rng);
    MobiusMap t = MobiusMap::identity();
    do {
      try {
        t = MobiusMap(random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng));
        break;
      } catch (const std::invalid_argument&) {
      }
    } while (true);
    const auto lhs = mobius_pushforward(polar_derivative(p, alpha), t);
    const auto rhs = polar_derivative(mobius_pushforward(p, t), t(alpha));
    CHECK(proportionality_constant(lhs, rhs).has_value());

    if (alpha.is_finite()) {
      const auto to_inf = MobiusMap::inversion_at(alpha.value());
      const auto conj = mobius_pushforward(
          polar_derivative(mobius_pushforward(p, to_inf), ExtendedPoint::infinity()), to_inf.inverse());
      CHECK(proportional(polar_derivative(p, alpha), conj));
    }
  }
}

TEST_CASE("finite free multiplicative convolution") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    const auto p = random_polynomial(rng, n);
    CHECK(finite_free_mult(p, power_of_linear(1, n)) == p);
  }
  CHECK(finite_free_mult(poly({-1, 0, 1}), q_polynomial(2, 1)) == poly({2, 0, 0}));
  CHECK_THROWS_AS(finite_free_mult(poly({-1, 0, 1}), poly({1, 1})), std::invalid_argument);

  const auto p = random_polynomial(rng, 4), q = random_polynomial(rng, 4), r = random_polynomial(rng, 4);
  CHECK(finite_free_mult(p, q) == finite_free_mult(q, p));
  CHECK(finite_free_mult(finite_free_mult(p, q), r) == finite_free_mult(p, finite_free_mult(q, r)));
}

TEST_CASE("q polynomials") {
  CHECK(q_polynomial(2, 1) == poly({-2, 2, 0}));
  CHECK(q_polynomial(3, 2) == poly({6, -12, 6, 0}));
  CHECK(q_polynomial(3, 0) == poly({1, 0, 0, 0}));
  CHECK_THROWS_AS(q_polynomial(2, 3), std::invalid_argument);
}

TEST_CASE("polar derivative as a finite free product with Q") {
  // D_0^{k|n} p = (-1)^{n-k} (n-k)!/k! (p boxtimes Q_{n,k}), the product read at formal degree k.
  std::mt19937_64 rng(41);
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k < n; ++k) {
      const auto p = random_polynomial(rng, n);
      const auto lhs = polar_derivative_iter(p, 0, k);
      const auto rhs = finite_free_mult(p, q_polynomial(n, k)).with_formal_degree(k);
      Rational expect = Rational(falling_factorial(n - k, n - k)) / Rational(falling_factorial(k, k));
      if ((n - k) % 2 == 1) expect = -expect;
      CHECK(proportionality_constant(lhs, rhs) == expect);
    }
  }
}

TEST_CASE("hypergeometric polynomials") {
  const std::vector<Rational> none;
  for (int n = 0; n <= 5; ++n) CHECK(hypergeometric(n, none, none) == power_of_linear(1, n).with_formal_degree(n));

  const Rational lambda(5, 3);
  const std::vector<Rational> up{lambda};
  const auto h2 = hypergeometric(2, up, none);
  CHECK(h2 == FormalPolynomial({(2 * lambda) * (2 * lambda - 1), -2 * (2 * lambda), Rational(1)}));
  CHECK(laguerre(1, lambda) == FormalPolynomial({-lambda, Rational(1)}));

  const std::vector<Rational> bad{Rational(1, 2)};
  CHECK_THROWS_WITH_AS(hypergeometric(4, none, bad),
                       doctest::Contains("violates n*a not in {0, 1, ..., n-1}"), std::invalid_argument);
}

TEST_CASE("Laguerre flow") {
  for (const Rational lambda : {Rational(3, 2), Rational(2), Rational(3)}) {
    for (int n = 2; n <= 10; ++n) {
      const auto h = laguerre(n, lambda);
      const auto d = polar_derivative(h, 0);
      const Rational next = Rational(n, n - 1) * (lambda - 1) + 1;
      CHECK(d == laguerre(n - 1, next).scaled(-n * (n * lambda)));
      for (int m = 1; m < n; ++m) {
        const auto dm = polar_derivative_iter(h, 0, m);
        CHECK(proportional(dm, laguerre(m, make_rational(n, m) * (lambda - 1) + 1)));
      }
    }
  }
}

TEST_CASE("hypergeometric derivative rescales the parameters by n/(n-1)") {
  const std::vector<Rational> up{Rational(3, 2)}, lo{Rational(5, 2)};
  for (int n = 2; n <= 9; ++n) {
    const auto h = hypergeometric(n, up, lo);
    const auto d = polar_derivative(h, ExtendedPoint::infinity());
    const Rational r(n, n - 1);
    const std::vector<Rational> up2{up[0] * r}, lo2{lo[0] * r};
    CHECK(d == hypergeometric(n - 1, up2, lo2).scaled(n));

    // The reciprocal rescaling does not give the derivative (degree 1 cannot tell them apart).
    const std::vector<Rational> up3{up[0] / r}, lo3{lo[0] / r};
    if (n >= 3) CHECK_FALSE(proportional(d, hypergeometric(n - 1, up3, lo3)));

    for (int m = 1; m < n; ++m) {
      const Rational s = make_rational(n, m);
      const std::vector<Rational> upm{up[0] * s}, lom{lo[0] * s};
      const auto dm = polar_derivative_iter(h, ExtendedPoint::infinity(), m);
      CHECK(dm == hypergeometric(m, upm, lom).scaled(Rational(falling_factorial(n, n - m))));

      const std::vector<Rational> up0{up[0] * s - s + 1}, lo0{lo[0] * s - s + 1};
      CHECK(proportional(polar_derivative_iter(h, 0, m), hypergeometric(m, up0, lo0)));
    }
  }
}

TEST_CASE("cosine Appell polynomials") {
  CHECK(cosine_appell(2) == poly({-1, 0, 1}));
  CHECK(cosine_appell(0) == poly({1}));
  for (int n = 1; n <= 20; ++n)
    CHECK(polar_derivative(cosine_appell(n), ExtendedPoint::infinity()) == cosine_appell(n - 1).scaled(n));
  for (int n = 2; n <= 30; ++n)
    CHECK(polar_derivative_iter(cosine_appell(n), 0, n - 2) == cosine_appell(n - 2).scaled(-n * (n - 1)));
}

TEST_CASE("proportionality") {
  const auto p = poly({1, 2, 3});
  CHECK(proportionality_constant(p.scaled(Rational(-7, 2)), p) == Rational(-7, 2));
  CHECK_FALSE(proportionality_constant(poly({1, 2, 4}), p).has_value());
  CHECK(proportional(FormalPolynomial::zero(2), FormalPolynomial::zero(2)));
  CHECK_FALSE(proportional(FormalPolynomial::zero(2), p));
  CHECK_THROWS_AS(proportionality_constant(p, poly({1, 1})), std::invalid_argument);
}

TEST_CASE("JSON round trip") {
  const FormalPolynomial p({Rational(-1, 3), Rational(0), Rational(5, 2)}, 4);
  const nlohmann::json j = p;
  CHECK(j["formal_degree"] == 4);
  CHECK(j["coeffs"][0] == "-1/3");
  CHECK(j["coeffs"][4] == "0/1");
  CHECK(polynomial_from_json(j) == p);
  CHECK_THROWS_AS(polynomial_from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-1.25e-3") == Rational(-1, 800));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(ExtendedPoint::parse("Inf").is_infinite());
  CHECK(ExtendedPoint::parse("-oo").is_infinite());
  CHECK(from_double(0.375) == Rational(3, 8));
}

}  // TEST_SUITE
