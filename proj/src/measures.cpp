#include "polarlab/measures.hpp"

#include "polarlab/roots.hpp"

#include "intpoly.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace polarlab {

namespace {

void require_power(const Rational& t) {
  if (t < 1) throw std::invalid_argument("power must be >= 1, got " + t.get_str());
}

// (1 - w) mu + w delta_inf for mu without mass at infinity.
ExtendedMeasure with_infinity_mass(const ExtendedMeasure& mu, const Rational& w) {
  if (w == 0) return mu;
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.at, a.weight * (1 - w)});
  atoms.push_back({ExtendedPoint::infinity(), w});
  return ExtendedMeasure(std::move(atoms), mu.part());
}

// mu restricted to the real line and renormalized; requires mu({inf}) < 1.
ExtendedMeasure finite_part(const ExtendedMeasure& mu) {
  const Rational s = mu.infinity_mass();
  if (s == 0) return mu;
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms())
    if (a.at.is_finite()) atoms.push_back({a.at, a.weight / (1 - s)});
  return ExtendedMeasure(std::move(atoms), mu.part());
}

Integer round_half_up(const Rational& x) {
  Integer r;
  Rational y = x + Rational(1, 2);
  mpz_fdiv_q(r.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return r;
}

ExtendedMeasure bridge(const ExtendedMeasure& mu, const ExtendedPoint& a, const Rational& t, const BridgeOptions& o) {
  const int n = o.degree;
  const Integer m = round_half_up(Rational(n) / t);
  if (m < 1)
    throw std::invalid_argument("bridge degree " + std::to_string(n) + " leaves no roots at power " + t.get_str());
  const FormalPolynomial q = quantile_polynomial(mu, n);
  const FormalPolynomial d = polar_derivative_iter(q, a, static_cast<int>(m.get_si()));
  if (d.is_zero()) throw std::runtime_error("bridge produced the zero polynomial; raise the bridge degree");
  return empirical_distribution(isolate_roots(d, o.root_tolerance));
}

bool is_pure_family(const ExtendedMeasure& mu) { return mu.atoms().empty() && mu.family() != nullptr; }

// Closed-form F_a^u of a free Poisson law shifted to a (valid for any u > 0 with positive rate).
ExtendedMeasure shifted_free_poisson_power(const FamilyPart& f, const Rational& u) {
  const Rational rate = u * f.lambda - u + 1;
  if (rate <= 0) return ExtendedMeasure::dirac(f.shift);
  FamilyPart g = f;
  g.lambda = rate;
  g.dilate = f.dilate / u;
  return ExtendedMeasure::of(g);
}

using IntPoly = detail::IntPoly;

IntPoly product_of(std::vector<IntPoly>& factors, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return factors[lo];
  const std::size_t mid = (lo + hi) / 2;
  return detail::multiply(product_of(factors, lo, mid), product_of(factors, mid, hi));
}

double free_poisson_quantile(double lambda, double u) {
  const double s = std::sqrt(lambda);
  const double lo = (1 - s) * (1 - s), hi = (1 + s) * (1 + s);
  const FamilyPart f = FamilyPart::free_poisson(from_double(lambda));
  if (lambda < 1 && u <= 1 - lambda) return 0;
  auto g = [&](double x) { return family_cdf(f, x) - u; };
  if (u <= 0) return lo;
  if (u >= 1) return hi;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

ExtendedMeasure mobius_push(const ExtendedMeasure& mu, const MobiusMap& t) {
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({t(a.at), a.weight});
  ContinuousPart part = std::monostate{};
  if (const auto* f = mu.family()) {
    if (t.preserves_infinity()) {
      // T(z) = (a z + b) / d applied to d0 X + c0.
      FamilyPart g = *f;
      const Rational slope = t.a() / t.d(), offset = t.b() / t.d();
      g.dilate = slope * f->dilate;
      g.shift = slope * f->shift + offset;
      part = g;
    } else if (f->kind == FamilyPart::Kind::Cauchy) {
      // Cauchy with location x and scale y is Cauchy(tau), tau = x + i y; it maps to Cauchy(T(tau)).
      const Rational x = f->shift, y = abs(f->dilate);
      const Rational dr = t.c() * x + t.d(), di = t.c() * y;
      const Rational nr = t.a() * x + t.b();
      const Rational den = dr * dr + di * di;
      FamilyPart g = FamilyPart::cauchy();
      g.shift = (nr * dr + t.a() * t.c() * y * y) / den;
      g.dilate = abs(Rational(y * t.determinant() / den));
      part = g;
    } else {
      throw std::invalid_argument("push not representable; convert to Empirical first");
    }
  } else if (const auto* e = mu.empirical_part()) {
    std::vector<double> samples;
    std::size_t at_pole = 0;
    for (double x : e->samples) {
      const double y = t.apply(x);
      if (std::isinf(y)) ++at_pole;
      else samples.push_back(y);
    }
    if (at_pole > 0) {
      const Rational w = mu.part_weight() * make_rational(static_cast<long>(at_pole), static_cast<long>(e->samples.size()));
      auto it = std::find_if(atoms.begin(), atoms.end(), [](const Atom& a) { return a.at.is_infinite(); });
      if (it != atoms.end()) it->weight += w;
      else atoms.push_back({ExtendedPoint::infinity(), w});
    }
    if (!samples.empty()) part = EmpiricalPart{std::move(samples)};
  }
  return ExtendedMeasure(std::move(atoms), std::move(part));
}

ExtendedMeasure f_power(const ExtendedMeasure& mu, const Rational& t, const BridgeOptions& opts) {
  require_power(t);
  if (t == 1) return mu;
  const Rational s = mu.infinity_mass();
  const Rational ts = t * s;
  if (ts >= 1) return ExtendedMeasure::dirac(ExtendedPoint::infinity());
  const Rational u = (t - ts) / (1 - ts);
  return with_infinity_mass(f_power_real(finite_part(mu), u, opts), ts);
}

ExtendedMeasure f_power_real(const ExtendedMeasure& nu, const Rational& u, const BridgeOptions& opts) {
  require_power(u);
  if (nu.infinity_mass() != 0) throw std::invalid_argument("f_power_real needs a measure without mass at infinity");
  if (u == 1) return nu;
  if (is_pure_family(nu)) {
    const FamilyPart& f = *nu.family();
    if (f.kind == FamilyPart::Kind::Cauchy) return nu;
    // F^u commutes with affine maps and sends pi_lambda to Dil_{1/u} pi_{u lambda}.
    FamilyPart g = f;
    g.lambda = u * f.lambda;
    g.dilate = f.dilate / u;
    return ExtendedMeasure::of(g);
  }
  if (!nu.has_part() && nu.atoms().size() == 1) return nu;
  return bridge(nu, ExtendedPoint::infinity(), u, opts);
}

ExtendedMeasure polar_power(const ExtendedMeasure& mu, const ExtendedPoint& a, const Rational& t,
                            const BridgeOptions& opts) {
  require_power(t);
  if (a.is_infinite()) return f_power(mu, t, opts);
  if (t == 1) return mu;
  if (t * mu.atom_at(a) >= 1) return ExtendedMeasure::dirac(a);
  if (is_pure_family(mu)) {
    const FamilyPart& f = *mu.family();
    if (f.kind == FamilyPart::Kind::Cauchy) return mu;
    if (f.shift == a.value()) return shifted_free_poisson_power(f, t);
  }
  if (!mu.has_part() && mu.atoms().size() == 1) return mu;
  return bridge(mu, a, t, opts);
}

Rational atom_mass(const ExtendedMeasure& mu, const ExtendedPoint& a, const Rational& s, const ExtendedPoint& b) {
  require_power(s);
  if (a == b) throw std::invalid_argument("atom_mass needs a != b");
  if (mu.atom_at(a) * s >= 1) throw std::invalid_argument("atom_mass needs mu({a}) < 1/s");
  const Rational v = 1 - s * (1 - mu.atom_at(b));
  return v > 0 ? v : Rational(0);
}

CommuteParams commute_params(const Rational& s, const Rational& t) {
  require_power(s);
  require_power(t);
  const Rational sp = 1 + s * t - s;
  return {s, t, sp, Rational(s * t / sp)};
}

ExtendedMeasure bn_semigroup(const ExtendedMeasure& mu, const ExtendedPoint& b, const ExtendedPoint& a,
                             const Rational& t) {
  if (t < 0) throw std::invalid_argument("semigroup time must be >= 0");
  if (a == b) throw std::invalid_argument("bn_semigroup needs a != b");
  if (t == 0) return mu;
  if (is_pure_family(mu)) {
    const FamilyPart& f = *mu.family();
    if (f.kind == FamilyPart::Kind::Cauchy) return mu;
    if (b.is_infinite() && a.is_finite() && f.shift == a.value() && f.lambda > 1) {
      const ExtendedMeasure inner = shifted_free_poisson_power(f, 1 / (1 + t));
      return f_power(inner, 1 + t);
    }
  }
  throw std::invalid_argument("inverse polar power not available");
}

double family_quantile(const FamilyPart& f, double u) {
  if (!(u > 0 && u < 1)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  const double d = to_double(f.dilate), c = to_double(f.shift);
  const double v = d > 0 ? u : 1 - u;
  const double base = f.kind == FamilyPart::Kind::Cauchy ? std::tan(std::numbers::pi * (v - 0.5))
                                                         : free_poisson_quantile(to_double(f.lambda), v);
  return c + d * base;
}

FormalPolynomial quantile_polynomial(const ExtendedMeasure& mu, int n) {
  if (n < 1) throw std::invalid_argument("quantile polynomial degree must be >= 1");
  const auto& atoms = mu.atoms();
  std::vector<long> counts(atoms.size());
  long used = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    counts[i] = round_half_up(atoms[i].weight * n).get_si();
    used += counts[i];
  }
  long rest = n - used;
  if (!atoms.empty() && (rest < 0 || (rest > 0 && !mu.has_part()))) {
    // Keep the total at exactly n by adjusting the heaviest atom.
    auto heavy = static_cast<std::size_t>(
        std::max_element(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.weight < y.weight; }) -
        atoms.begin());
    counts[heavy] += rest;
    if (counts[heavy] < 0) throw std::invalid_argument("quantile polynomial degree too small for the atoms");
    rest = 0;
  }

  std::vector<IntPoly> factors;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].at.is_infinite()) continue;  // roots at infinity: formal degree exceeds precise degree
    const Rational& x = atoms[i].at.value();
    for (long k = 0; k < counts[i]; ++k) factors.push_back({Integer(-x.get_num()), x.get_den()});
  }
  if (rest > 0) {
    const Integer grid = Integer(1) << 32;
    for (long i = 1; i <= rest; ++i) {
      const double u = (2.0 * static_cast<double>(i) - 1.0) / (2.0 * static_cast<double>(rest));
      double x;
      if (const auto* f = mu.family()) {
        x = family_quantile(*f, u);
      } else {
        const auto& s = mu.empirical_part()->samples;
        const auto idx = std::min(s.size() - 1, static_cast<std::size_t>(u * static_cast<double>(s.size())));
        x = s[idx];
      }
      const Integer j = round_half_up(from_double(x) * grid);
      factors.push_back({Integer(-j), grid});
    }
  }
  std::vector<Rational> coeffs;
  if (factors.empty()) {
    coeffs = {Rational(1)};
  } else {
    const IntPoly prod = product_of(factors, 0, factors.size());
    const Integer& lead = prod.back();
    for (const auto& c : prod) {
      Rational q(c, lead);
      q.canonicalize();
      coeffs.push_back(q);
    }
  }
  return FormalPolynomial(std::move(coeffs), n);
}

double kolmogorov_distance(const ExtendedMeasure& m1, const ExtendedMeasure& m2, int grid) {
  if (grid < 2) throw std::invalid_argument("Kolmogorov grid needs at least 2 points");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(grid));
  for (int k = 1; k < grid; ++k) xs.push_back(std::tan(std::numbers::pi * (static_cast<double>(k) / grid - 0.5)));
  for (const auto* m : {&m1, &m2}) {
    for (const auto& a : m->atoms())
      if (a.at.is_finite()) xs.push_back(to_double(a.at.value()));
    if (const auto* e = m->empirical_part()) xs.insert(xs.end(), e->samples.begin(), e->samples.end());
    if (const auto* f = m->family(); f && f->kind == FamilyPart::Kind::FreePoisson && f->lambda < 1)
      xs.push_back(to_double(f->shift));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double best = std::fabs(to_double(m1.infinity_mass() - m2.infinity_mass()));
  for (double x : xs) {
    best = std::max(best, std::fabs(m1.cdf(x) - m2.cdf(x)));
    best = std::max(best, std::fabs(m1.cdf_left(x) - m2.cdf_left(x)));
  }
  return best;
}

}  // namespace polarlab
