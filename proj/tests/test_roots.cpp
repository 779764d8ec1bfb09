#include "doctest.h"
#include "support.hpp"

#include "polarlab/measures.hpp"
#include "polarlab/roots.hpp"

#include <cmath>
#include <random>

using namespace polarlab;

namespace {

const Rational kTol = make_rational(1, Integer(1) << 30);

FormalPolynomial poly(std::vector<long> c) {
  std::vector<Rational> q;
  for (long x : c) q.emplace_back(x);
  return FormalPolynomial(q);
}

RootProfile profile(std::vector<Rational> roots, int at_infinity = 0) {
  RootProfile r;
  for (const auto& x : roots) r.roots.push_back({x, x, 1});
  r.at_infinity = at_infinity;
  return r;
}

double eval(const FormalPolynomial& p, double x) {
  double v = 0;
  for (int k = p.formal_degree(); k >= 0; --k) v = v * x + to_double(p[k]);
  return v;
}

// Sign changes on a fine grid refined by plain bisection; only for simple, well separated roots.
std::vector<double> bisection_roots(const FormalPolynomial& p, double lo, double hi, int grid) {
  std::vector<double> out;
  const double step = (hi - lo) / grid;
  for (int i = 0; i < grid; ++i) {
    double a = lo + i * step, b = a + step;
    double fa = eval(p, a);
    if ((fa < 0) == (eval(p, b) < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double m = (a + b) / 2;
      if ((eval(p, m) < 0) == (fa < 0)) a = m, fa = eval(p, a);
      else b = m;
    }
    out.push_back((a + b) / 2);
  }
  return out;
}

}  // namespace

TEST_SUITE("roots") {

TEST_CASE("real-rootedness") {
  CHECK(is_real_rooted(poly({-1, 0, 1})));
  CHECK_FALSE(is_real_rooted(poly({1, 0, 1})));
  CHECK(is_real_rooted(cosine_appell(6)));
  CHECK(sturm_real_root_count(cosine_appell(6)) == 6);
  CHECK(is_real_rooted(FormalPolynomial({Rational(-1), Rational(1)}, 3)));
  CHECK_THROWS_AS(is_real_rooted(FormalPolynomial::zero(2)), std::invalid_argument);
  // (x - 1)^2 (x^2 + 1): one distinct real root, square-free part of degree 3.
  const auto p = poly({-1, 1}) * poly({-1, 1}) * poly({1, 0, 1});
  CHECK(sturm_real_root_count(p) == 1);
  CHECK_FALSE(is_real_rooted(p));
}

TEST_CASE("isolation examples") {
  const auto r = isolate_roots(poly({-1, 0, 1}), make_rational(1, 1000000000));
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0].lo <= -1);
  CHECK(r.roots[0].hi >= -1);
  CHECK(r.roots[1].lo <= 1);
  CHECK(r.roots[1].hi >= 1);
  CHECK(r.at_infinity == 0);

  const auto d = isolate_roots(polar_derivative(poly({-1, 0, 1}), 0), kTol);
  CHECK(d.roots.empty());
  CHECK(d.at_infinity == 1);
  CHECK(d.formal_degree() == 1);

  CHECK_THROWS_AS(isolate_roots(FormalPolynomial::zero(3), kTol), std::invalid_argument);
  CHECK_THROWS_AS(isolate_roots(poly({-1, 0, 1}), 0), std::invalid_argument);
}

TEST_CASE("non-real input carries the Sturm count") {
  const auto p = poly({-1, 0, 0, 1});  // x^3 - 1
  try {
    isolate_roots(p, kTol);
    FAIL("expected NotRealRooted");
  } catch (const NotRealRooted& e) {
    CHECK(e.real_count() == 1);
    CHECK(e.distinct_degree() == 3);
  }
}

TEST_CASE("Laguerre roots against a bisection oracle") {
  const auto h = laguerre(4, 2);
  const auto r = isolate_roots(h, make_rational(1, 1000000000));
  REQUIRE(r.roots.size() == 4);
  for (const auto& iv : r.roots) CHECK(iv.lo > 0);
  const auto oracle = bisection_roots(h, 0, 40, 4000);
  REQUIRE(oracle.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.roots[i].approx() - oracle[i]) < 1e-8);
}

TEST_CASE("multiplicities and exact dyadic roots") {
  // (x - 1)^3 (x + 2) (x - 3/8)^2
  std::vector<Rational> roots{1, 1, 1, -2, make_rational(3, 8), make_rational(3, 8)};
  const auto r = isolate_roots(FormalPolynomial::from_roots(roots), kTol);
  REQUIRE(r.roots.size() == 3);
  CHECK(r.roots[0] == RootInterval{-2, -2, 1});
  CHECK(r.roots[1] == RootInterval{make_rational(3, 8), make_rational(3, 8), 2});
  CHECK(r.roots[2] == RootInterval{1, 1, 3});
  CHECK(r.finite_count() == 6);
  CHECK(r.values() == std::vector<double>{-2, 0.375, 0.375, 1, 1, 1});
}

TEST_CASE("close roots are separated") {
  const Rational eps = make_rational(1, Integer(1) << 50);
  std::vector<Rational> roots{make_rational(1, 3), make_rational(1, 3) + eps, 5};
  const auto r = isolate_roots(FormalPolynomial::from_roots(roots), kTol);
  REQUIRE(r.roots.size() == 3);
  CHECK(r.roots[0].hi < r.roots[1].lo);
  CHECK(r.roots[0].lo <= roots[0]);
  CHECK(r.roots[0].hi >= roots[0]);
}

TEST_CASE("intervals respect the tolerance and nest under refinement") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    auto roots = testing::random_roots(rng, 3 + trial % 6);
    roots.push_back(make_rational(1, 3));  // a non-dyadic root keeps the intervals open
    const auto p = FormalPolynomial::from_roots(roots);
    const auto coarse = isolate_roots(p, make_rational(1, 1024));
    const auto fine = isolate_roots(p, make_rational(1, Integer(1) << 40));
    CHECK(isolate_roots(p, make_rational(1, 1024)) == coarse);
    REQUIRE(coarse.roots.size() == fine.roots.size());
    for (std::size_t i = 0; i < fine.roots.size(); ++i) {
      CHECK(coarse.roots[i].hi - coarse.roots[i].lo <= make_rational(1, 1024));
      CHECK(coarse.roots[i].lo <= fine.roots[i].lo);
      CHECK(fine.roots[i].hi <= coarse.roots[i].hi);
      CHECK(fine.roots[i].multiplicity == coarse.roots[i].multiplicity);
    }
  }
}

TEST_CASE("high-degree cosine polynomial") {
  const auto r = isolate_roots(cosine_appell(40), kTol);
  CHECK(r.finite_count() == 40);
  // C_n is even or odd, so the roots are symmetric about 0.
  const auto v = r.values();
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] + v[v.size() - 1 - i]) < 1e-8);
}

TEST_CASE("empirical distribution") {
  const auto m = empirical_distribution(profile({-1, 1}));
  CHECK(m == ExtendedMeasure({{-1, make_rational(1, 2)}, {1, make_rational(1, 2)}}, std::monostate{}));

  const auto w = empirical_distribution(profile({0}, 1));
  CHECK(w.atom_at(0) == make_rational(1, 2));
  CHECK(w.infinity_mass() == make_rational(1, 2));
  CHECK_THROWS_AS(empirical_distribution(RootProfile{}), std::invalid_argument);
}

TEST_CASE("Laguerre flow at degree 64 is close to the free Poisson law") {
  const auto h = dilate(laguerre(64, 2), make_rational(1, 64));
  const auto d = polar_derivative_iter(h, 0, 32);
  const auto mu = empirical_distribution(isolate_roots(d, kTol));
  const auto target = ExtendedMeasure::of({FamilyPart::Kind::FreePoisson, 3, 0, make_rational(1, 2)});
  CHECK(kolmogorov_distance(mu, target) < 0.1);
}

TEST_CASE("interlacing and domination examples") {
  CHECK(interlaces(profile({1, 3}), profile({2})));
  CHECK(interlaces(profile({-2, make_rational(-1, 2)}), profile({-1, 1})));
  CHECK_FALSE(interlaces(profile({0, 2}), profile({3, 4})));
  CHECK_THROWS_AS(interlaces(profile({1}), profile({1, 2, 3})), std::invalid_argument);

  const auto p = profile({-3, 1, 2});
  CHECK(dominates(p, p));
  CHECK(dominates(profile({-2, make_rational(-1, 2)}), profile({-1, 1})));
  CHECK_FALSE(dominates(profile({0, 5}), profile({1, 4})));
  CHECK_THROWS_AS(dominates(profile({1}), profile({1, 2})), std::invalid_argument);
}

TEST_CASE("polar derivative outside the roots interlaces") {
  const auto p = isolate_roots(poly({-1, 0, 1}), kTol);
  CHECK(interlaces(p, isolate_roots(polar_derivative(poly({-1, 0, 1}), 2), kTol)));
  const auto da = isolate_roots(polar_derivative(poly({-1, 0, 1}), -3), kTol);
  const auto db = isolate_roots(polar_derivative(poly({-1, 0, 1}), -2), kTol);
  CHECK(da.roots[0].lo <= make_rational(-1, 3));
  CHECK(da.roots[0].hi >= make_rational(-1, 3));
  CHECK(db.roots[0].lo == make_rational(-1, 2));
  CHECK(interlaces(db, da));
}

TEST_CASE("interlacing implies domination") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const auto p = isolate_roots(FormalPolynomial::from_roots(testing::random_roots(rng, n)), kTol);
    const auto q = isolate_roots(FormalPolynomial::from_roots(testing::random_roots(rng, n)), kTol);
    if (p.finite_count() != q.finite_count() || p.roots.size() != q.roots.size()) continue;
    if (interlaces(p, q)) {
      ++checked;
      CHECK(dominates(p, q));
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("JSON round trip") {
  const auto r = isolate_roots(FormalPolynomial({Rational(-2), Rational(0), Rational(1)}, 3), kTol);
  const nlohmann::json j = r;
  CHECK(j["at_infinity"] == 1);
  CHECK(j["roots"].size() == 2);
  CHECK(j["roots"][0].contains("mult"));
  CHECK(root_profile_from_json(j) == r);
}

}  // TEST_SUITE
