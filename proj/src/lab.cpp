#include "polarlab/lab.hpp"

#include "polarlab/measures.hpp"
#include "polarlab/polynomial.hpp"
#include "polarlab/transforms.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace polarlab {

namespace {

using Sink = std::function<void(const ResultRecord&)>;

constexpr double kLadderSlack = 0.01;
constexpr double kCharacteristicTol = 1e-10;

std::string point_str(const ExtendedPoint& p) { return p.is_infinite() ? "inf" : p.value().get_str(); }

std::string join_params(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += ';';
    s += k;
    s += '=';
    s += v;
  }
  return s;
}

std::vector<Rational> rationals(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return v;
}

// Uniform integer in [lo, hi] from the raw engine output, so streams match across standard libraries.
long draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double draw_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Runs jobs concurrently and returns their results in submission order.
template <class T>
std::vector<T> run_all(std::vector<std::function<T()>> jobs) {
  std::vector<std::future<T>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, std::move(job)));
  std::vector<T> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

ResultRecord record(const ExperimentConfig& cfg, std::string param, std::string metric, std::string value,
                    bool pass) {
  return {cfg.experiment, std::move(param), std::move(metric), std::move(value), pass};
}

std::string ratio_str(int failures, int total) { return std::to_string(failures) + "/" + std::to_string(total); }

// ---------------------------------------------------------------------------------------------
// thm11 and cauchy-invariance: Kolmogorov distance of the root law of D_a^{m|N} p_N to F_a^t mu.

void run_convergence(const ExperimentConfig& cfg, const Sink& sink) {
  const bool cauchy = cfg.family == "cauchy";
  const std::vector<Rational> lambdas = cauchy ? std::vector<Rational>{1} : cfg.lambdas;
  for (const auto& lambda : lambdas)
    for (const auto& a : cfg.poles)
      for (const auto& t : cfg.t_values) {
        FamilyPart f = cauchy ? FamilyPart::cauchy() : FamilyPart::free_poisson(lambda);
        // The Laguerre input is moved to the pole so the shifted closed form applies.
        if (!cauchy && a.is_finite()) f.shift = a.value();
        const ExtendedMeasure oracle = polar_power(ExtendedMeasure::of(f), a, t);
        std::vector<std::function<double()>> jobs;
        for (int n : cfg.ladder)
          jobs.push_back([n, &a, &t, &f, &oracle, cauchy]() {
            FormalPolynomial p = cauchy ? cosine_appell(n) : dilate(laguerre(n, f.lambda), Rational(1, n));
            if (f.shift != 0) p = shift(p, f.shift);
            const Rational ratio = Rational(n) / t;
            const long m = std::lround(to_double(ratio));
            if (m < 1 || m > n) throw std::invalid_argument("ladder degree too small for power " + t.get_str());
            const FormalPolynomial d = polar_derivative_iter(p, a, static_cast<int>(m));
            const ExtendedMeasure roots = empirical_distribution(isolate_roots(d, Rational(1, Integer(1) << 30)));
            return kolmogorov_distance(roots, oracle);
          });
        const auto distances = run_all(std::move(jobs));
        double prev = 0;
        for (std::size_t i = 0; i < distances.size(); ++i) {
          const double d = distances[i];
          const bool monotone = i == 0 || d <= prev + kLadderSlack;
          std::string param = cauchy ? join_params({{"family", "cauchy"}, {"a", point_str(a)}, {"t", t.get_str()},
                                                    {"N", std::to_string(cfg.ladder[i])}})
                                     : join_params({{"family", "free_poisson"}, {"lambda", lambda.get_str()},
                                                    {"a", point_str(a)}, {"t", t.get_str()},
                                                    {"N", std::to_string(cfg.ladder[i])}});
          sink(record(cfg, param, "kolmogorov", format_double(d), monotone));
          if (i + 1 == distances.size())
            sink(record(cfg, param, "kolmogorov_final", format_double(d), d < *cfg.tol));
          prev = d;
        }
      }
}

// ---------------------------------------------------------------------------------------------
// thm12: both orders of the commutation relation on closed-form families.

std::string family_summary(const ExtendedMeasure& m) {
  const FamilyPart* f = m.family();
  if (!f || !m.atoms().empty()) return m.str();
  return "intensity " + f->lambda.get_str() + ", dilation " + f->dilate.get_str();
}

void run_thm12(const ExperimentConfig& cfg, const Sink& sink) {
  for (const auto& lambda : cfg.lambdas)
    for (const auto& a : cfg.poles) {
      if (a.is_infinite()) continue;
      for (const auto& s : cfg.s_values)
        for (const auto& t : cfg.t_values) {
          FamilyPart f = FamilyPart::free_poisson(lambda);
          f.shift = a.value();
          const ExtendedMeasure mu = ExtendedMeasure::of(f);
          const CommuteParams c = commute_params(s, t);
          const ExtendedPoint inf = ExtendedPoint::infinity();
          const ExtendedMeasure left = polar_power(f_power(mu, t), a, s);
          const ExtendedMeasure right = f_power(polar_power(mu, a, c.t_prime), c.s_prime);
          FamilyPart expected = FamilyPart::free_poisson(s * t * lambda - s + 1);
          expected.shift = a.value();
          expected.dilate = 1 / (s * t);
          const bool pass = left == right && left == ExtendedMeasure::of(expected);
          const std::string param = join_params({{"lambda", lambda.get_str()},
                                                 {"a", point_str(a)},
                                                 {"b", point_str(inf)},
                                                 {"s", s.get_str()},
                                                 {"t", t.get_str()}});
          std::string value = family_summary(left);
          if (!(left == right)) value += " vs " + family_summary(right);
          sink(record(cfg, param, "closed_form", value, pass));
        }
    }
  const ExtendedMeasure nu = ExtendedMeasure::cauchy();
  for (const auto& a : cfg.poles)
    for (const auto& b : cfg.poles) {
      if (a == b) continue;
      int fixed = 0, total = 0;
      for (const auto& s : cfg.s_values)
        for (const auto& t : cfg.t_values) {
          const CommuteParams c = commute_params(s, t);
          const ExtendedMeasure left = polar_power(polar_power(nu, b, t), a, s);
          const ExtendedMeasure right = polar_power(polar_power(nu, a, c.t_prime), b, c.s_prime);
          ++total;
          if (left == nu && right == nu) ++fixed;
        }
      sink(record(cfg, join_params({{"family", "cauchy"}, {"a", point_str(a)}, {"b", point_str(b)}}), "cauchy_fixed",
                  std::to_string(fixed) + "/" + std::to_string(total), fixed == total));
    }
}

// ---------------------------------------------------------------------------------------------
// interlacing: the direction for a pole inside the roots and for iterated derivatives is pinned
// on small double-precision probes; the exact suite then checks every relation.

using DPoly = std::vector<double>;  // ascending coefficients, formal degree size() - 1

DPoly d_from_roots(const std::vector<double>& r) {
  DPoly c{1.0};
  for (double x : r) {
    DPoly next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= x * c[k];
    }
    c = next;
  }
  return c;
}

DPoly d_polar(const DPoly& c, double a) {
  const std::size_t n = c.size() - 1;
  DPoly r(n);
  for (std::size_t k = 0; k < n; ++k)
    r[k] = static_cast<double>(n - k) * c[k] + a * static_cast<double>(k + 1) * c[k + 1];
  return r;
}

// Real roots of a polynomial of precise degree 1 or 2, ascending.
std::vector<double> d_roots(const DPoly& c) {
  if (c.size() == 2) return {-c[0] / c[1]};
  const double A = c[2], B = c[1], C = c[0];
  const double disc = std::max(0.0, B * B - 4 * A * C);
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  std::vector<double> r{q / A, C / q};
  std::sort(r.begin(), r.end());
  return r;
}

bool d_interlaces(const std::vector<double>& p, const std::vector<double>& q) {
  constexpr double eps = 1e-9;
  if (q.size() != p.size() && q.size() + 1 != p.size()) return false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (p[i] > q[i] + eps) return false;
    if (i + 1 < p.size() && q[i] > p[i + 1] + eps) return false;
  }
  return true;
}

bool d_dominates(const std::vector<double>& p, const std::vector<double>& q) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > q[i] + 1e-9) return false;
  return true;
}

// First: relation(x, y) held on every probe; Second: relation(y, x) did.
enum class Direction { First, Second, Undetermined };

std::string direction_str(Direction d, const std::string& first, const std::string& second) {
  switch (d) {
    case Direction::First: return first;
    case Direction::Second: return second;
    default: return "undetermined";
  }
}

struct Pins {
  // x = p, y = (x - a) D_a p; relation interlaces.
  Direction inside_below_mean = Direction::Undetermined;  // lambda_1 < a < mean
  Direction inside_above_mean = Direction::Undetermined;  // mean < a < lambda_n
  // x = D_a^k p, y = D_b^k p with a < b outside the roots; relation dominates.
  Direction iterated = Direction::Undetermined;
  int probes = 0;
};

Direction pick(int first, int second, int total) {
  if (first == total && second < total) return Direction::First;
  if (second == total && first < total) return Direction::Second;
  return Direction::Undetermined;
}

Pins pin_directions(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  constexpr int kProbes = 200;
  int below_pq = 0, below_qp = 0, above_pq = 0, above_qp = 0, iter_ab = 0, iter_ba = 0;
  for (int i = 0; i < kProbes; ++i) {
    const int n = 2 + i % 2;
    std::vector<double> r;
    for (int j = 0; j < n; ++j) r.push_back(draw_real(rng, -3, 3));
    std::sort(r.begin(), r.end());
    if (r.back() - r.front() < 1e-3) r.back() += 1;
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    const DPoly p = d_from_roots(r);

    // (x - a) D_a p has the roots of D_a p together with a.
    auto with_pole = [&](double a) {
      auto q = d_roots(d_polar(p, a));
      q.push_back(a);
      std::sort(q.begin(), q.end());
      return q;
    };
    const double lo = r.front() + (mean - r.front()) * draw_real(rng, 0.05, 0.95);
    const auto ql = with_pole(lo);
    below_pq += d_interlaces(r, ql);
    below_qp += d_interlaces(ql, r);
    const double hi = mean + (r.back() - mean) * draw_real(rng, 0.05, 0.95);
    const auto qh = with_pole(hi);
    above_pq += d_interlaces(r, qh);
    above_qp += d_interlaces(qh, r);

    // Iterated derivatives on either side of the roots, k = n - 1 so the result is linear or quadratic.
    const bool left = i % 4 < 2;
    const double gap1 = draw_real(rng, 0.1, 3), gap2 = draw_real(rng, 0.1, 3);
    const double a = left ? r.front() - gap1 - gap2 : r.back() + gap1;
    const double b = left ? r.front() - gap1 : r.back() + gap1 + gap2;
    DPoly pa = p, pb = p;
    for (int k = 0; k < n - 1; ++k) {
      pa = d_polar(pa, a);
      pb = d_polar(pb, b);
    }
    const auto ra = d_roots(pa), rb = d_roots(pb);
    iter_ab += d_dominates(ra, rb);
    iter_ba += d_dominates(rb, ra);
  }
  Pins pins;
  pins.probes = kProbes;
  pins.inside_below_mean = pick(below_pq, below_qp, kProbes);
  pins.inside_above_mean = pick(above_pq, above_qp, kProbes);
  pins.iterated = pick(iter_ab, iter_ba, kProbes);
  return pins;
}

const Rational kRootTol = Rational(1, Integer(1) << 40);

RootProfile profile(const FormalPolynomial& p) { return isolate_roots(p, kRootTol); }

FormalPolynomial linear(const Rational& a) { return FormalPolynomial({-a, Rational(1)}); }

void run_interlacing(const ExperimentConfig& cfg, const Sink& sink) {
  const Pins pins = pin_directions(cfg.seed);
  const std::string probe_param = "probes=" + std::to_string(pins.probes) + ";degrees=2..3";
  const std::string pq = "p interlaces (x-a)D_a p", qp = "(x-a)D_a p interlaces p";
  sink(record(cfg, probe_param, "inside_pole_below_mean_direction", direction_str(pins.inside_below_mean, pq, qp),
              pins.inside_below_mean != Direction::Undetermined));
  sink(record(cfg, probe_param, "inside_pole_above_mean_direction", direction_str(pins.inside_above_mean, pq, qp),
              pins.inside_above_mean != Direction::Undetermined));
  sink(record(cfg, probe_param, "iterated_order_direction",
              direction_str(pins.iterated, "D_a^k p dominates D_b^k p", "D_b^k p dominates D_a^k p"),
              pins.iterated != Direction::Undetermined));

  std::mt19937_64 rng(cfg.seed);
  int fail_outside = 0, fail_order = 0, fail_inside = 0, fail_iterated = 0;
  for (int i = 0; i < cfg.instances; ++i) {
    const int n = static_cast<int>(draw(rng, 2, 8));
    std::vector<Rational> r;
    do {
      r.clear();
      for (int j = 0; j < n; ++j) r.push_back(make_rational(draw(rng, -64, 64), 16));
      std::sort(r.begin(), r.end());
    } while (r.front() == r.back());
    Rational mean = 0;
    for (const auto& x : r) mean += x;
    mean /= n;
    const FormalPolynomial p = FormalPolynomial::from_roots(r);
    const RootProfile rp = profile(p);

    // a outside the roots: p interlaces D_a p.
    const bool left = draw(rng, 0, 1) == 0;
    const Rational gap1 = make_rational(draw(rng, 1, 96), 32), gap2 = make_rational(draw(rng, 1, 96), 32);
    const Rational a_out = left ? Rational(r.front() - gap1) : Rational(r.back() + gap1);
    if (!interlaces(rp, profile(polar_derivative(p, a_out)))) ++fail_outside;

    // a < b on one side of the roots: D_b p interlaces D_a p.
    const Rational a = left ? Rational(r.front() - gap1 - gap2) : Rational(r.back() + gap1);
    const Rational b = left ? Rational(r.front() - gap1) : Rational(r.back() + gap1 + gap2);
    if (!interlaces(profile(polar_derivative(p, b)), profile(polar_derivative(p, a)))) ++fail_order;

    // The same pair after n - k derivatives, in the pinned direction.
    const int k = static_cast<int>(draw(rng, 1, n - 1));
    const RootProfile dak = profile(polar_derivative_iter(p, a, n - k));
    const RootProfile dbk = profile(polar_derivative_iter(p, b, n - k));
    const bool ordered = pins.iterated == Direction::First ? dominates(dak, dbk) : dominates(dbk, dak);
    if (pins.iterated == Direction::Undetermined || !ordered) ++fail_iterated;

    // a strictly between the smallest root and the mean, or between the mean and the largest.
    const Rational u = make_rational(draw(rng, 1, 16), 17);
    const bool below = draw(rng, 0, 1) == 0;
    const Rational a_in = below ? Rational(r.front() + u * (mean - r.front())) : Rational(mean + u * (r.back() - mean));
    const RootProfile q = profile(linear(a_in) * polar_derivative(p, a_in));
    const Direction pin = below ? pins.inside_below_mean : pins.inside_above_mean;
    const bool holds = pin == Direction::First ? interlaces(rp, q) : interlaces(q, rp);
    if (pin == Direction::Undetermined || !holds) ++fail_inside;
  }
  const std::string param = "instances=" + std::to_string(cfg.instances) + ";seed=" + std::to_string(cfg.seed);
  sink(record(cfg, param, "outside_pole_failures", ratio_str(fail_outside, cfg.instances), fail_outside == 0));
  sink(record(cfg, param, "pole_order_failures", ratio_str(fail_order, cfg.instances), fail_order == 0));
  sink(record(cfg, param, "inside_pole_failures", ratio_str(fail_inside, cfg.instances), fail_inside == 0));
  sink(record(cfg, param, "iterated_order_failures", ratio_str(fail_iterated, cfg.instances), fail_iterated == 0));
}

// ---------------------------------------------------------------------------------------------
// atoms: measured atom of the bridge result against max{0, 1 - s(1 - w)}.

ExtendedMeasure atom_plus_uniform(const Rational& w, const Rational& b) {
  constexpr int kGrid = 4096;
  std::vector<double> samples(kGrid);
  for (int j = 0; j < kGrid; ++j) samples[static_cast<std::size_t>(j)] = 1 + (2.0 * j + 1) / kGrid;
  return ExtendedMeasure({{ExtendedPoint(b), w}}, EmpiricalPart{std::move(samples)});
}

void run_atoms(const ExperimentConfig& cfg, const Sink& sink) {
  const Rational b = *cfg.atom_at;
  struct Job {
    Rational w, s;
    ExtendedPoint a;
    int n;
  };
  std::vector<Job> specs;
  for (const auto& w : cfg.weights)
    for (const auto& s : cfg.s_values)
      for (const auto& a : cfg.poles)
        for (int n : cfg.ladder) specs.push_back({w, s, a, n});
  std::vector<std::function<double()>> jobs;
  for (const auto& j : specs)
    jobs.push_back([&j, &b]() {
      BridgeOptions o;
      o.degree = j.n;
      return to_double(polar_power(atom_plus_uniform(j.w, b), j.a, j.s, o).atom_at(ExtendedPoint(b)));
    });
  const auto measured = run_all(std::move(jobs));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& j = specs[i];
    const double predicted = to_double(atom_mass(atom_plus_uniform(j.w, b), j.a, j.s, ExtendedPoint(b)));
    const double tol = cfg.tol ? *cfg.tol : 2.0 / j.n;
    const std::string param = join_params({{"w", j.w.get_str()},
                                           {"s", j.s.get_str()},
                                           {"a", point_str(j.a)},
                                           {"b", b.get_str()},
                                           {"N", std::to_string(j.n)},
                                           {"predicted", format_double(predicted)}});
    sink(record(cfg, param, "atom_fraction", format_double(measured[i]), std::abs(measured[i] - predicted) <= tol));
  }
}

// ---------------------------------------------------------------------------------------------
// laguerre-flow: exact identities for Laguerre and hypergeometric polynomials under D_0, D_a, d/dx, D_1.

struct Tally {
  int failures = 0, total = 0;
  void add(bool ok) {
    ++total;
    if (!ok) ++failures;
  }
};

int root_multiplicity(const FormalPolynomial& p, const Rational& x) {
  const int n = *p.precise_degree();
  int k = 0;
  while (k < n && polar_derivative_iter(p, ExtendedPoint::infinity(), p.formal_degree() - k)(x) == 0) ++k;
  return k;
}

void run_laguerre_flow(const ExperimentConfig& cfg, const Sink& sink) {
  const ExtendedPoint zero(0), one(1), inf = ExtendedPoint::infinity();
  for (const auto& lambda : cfg.lambdas) {
    Tally prop, constant, shifted;
    for (int n : cfg.ladder) {
      const FormalPolynomial h = laguerre(n, lambda);
      for (int m = 1; m < n; ++m) {
        const Rational mapped = make_rational(n, m) * (lambda - 1) + 1;
        const FormalPolynomial d = polar_derivative_iter(h, zero, m);
        const auto c = proportionality_constant(d, laguerre(m, mapped));
        prop.add(c.has_value());
        Rational expected = falling_factorial(n, n - m) * falling_factorial(n * lambda, n - m);
        if ((n - m) % 2) expected = -expected;
        constant.add(c && *c == expected);
        for (const auto& a : cfg.poles) {
          if (a.is_infinite()) continue;
          const FormalPolynomial ds = polar_derivative_iter(shift(h, a.value()), a, m);
          shifted.add(proportional(ds, shift(laguerre(m, mapped), a.value())));
        }
      }
    }
    const std::string param = "lambda=" + lambda.get_str();
    sink(record(cfg, param, "laguerre_d0_proportional", ratio_str(prop.failures, prop.total), prop.failures == 0));
    sink(record(cfg, param, "laguerre_d0_constant", ratio_str(constant.failures, constant.total),
                constant.failures == 0));
    sink(record(cfg, param, "laguerre_shifted_pole", ratio_str(shifted.failures, shifted.total),
                shifted.failures == 0));
  }

  // One upper parameter b and one lower parameter a > 1, so every lower parameter stays admissible.
  const auto uppers = rationals({"3/2", "2"});
  const auto lowers = rationals({"3", "5/2"});
  for (const auto& ub : uppers)
    for (const auto& la : lowers) {
      Tally diff, d0, d1;
      int vanishing = 0;
      for (int n : cfg.ladder) {
        const std::vector<Rational> up{ub}, lo{la};
        const FormalPolynomial h = hypergeometric(n, up, lo);
        const int at_one = root_multiplicity(h, 1);
        for (int m = 1; m < n; ++m) {
          const Rational r = make_rational(n, m);
          const std::vector<Rational> up_d{r * ub}, lo_d{r * la};
          diff.add(proportional(polar_derivative_iter(h, inf, m), hypergeometric(m, up_d, lo_d)));
          const std::vector<Rational> up_0{r * ub - r + 1}, lo_0{r * la - r + 1};
          d0.add(proportional(polar_derivative_iter(h, zero, m), hypergeometric(m, up_0, lo_0)));
          const std::vector<Rational> lo_1{r * la - r + 1};
          const FormalPolynomial d = polar_derivative_iter(h, one, m);
          // More than m roots at the pole: D_1^{m|n} h vanishes and there is nothing to compare.
          if (d.is_zero() && at_one > m) {
            ++vanishing;
            continue;
          }
          d1.add(proportional(d, hypergeometric(m, up_d, lo_1)));
        }
      }
      const std::string param = "b=" + ub.get_str() + ";a=" + la.get_str();
      sink(record(cfg, param, "hypergeometric_derivative", ratio_str(diff.failures, diff.total), diff.failures == 0));
      sink(record(cfg, param, "hypergeometric_d0", ratio_str(d0.failures, d0.total), d0.failures == 0));
      std::string d1_value = ratio_str(d1.failures, d1.total);
      if (vanishing > 0) d1_value += " (" + std::to_string(vanishing) + " vanish: root 1 of multiplicity > m)";
      sink(record(cfg, param, "hypergeometric_d1", d1_value, d1.failures == 0));
    }
}

// ---------------------------------------------------------------------------------------------
// pde-residual: finite-difference residuals of the G and R equations and the characteristic relation.

bool second_order(double coarse, double fine) {
  if (coarse < 1e-12 && fine < 1e-12) return true;  // already at rounding level
  const double ratio = coarse / fine;
  return ratio >= 3 && ratio <= 5;
}

void run_pde_residual(const ExperimentConfig& cfg, const Sink& sink) {
  const double h = *cfg.h;
  const std::vector<Complex> zs{{0, 3}, {1, 2}, {-0.5, 0.75}, {2, -1.5}};
  std::vector<ResidualRow> rows;
  struct Fam {
    std::string name;
    Rational lambda;
  };
  std::vector<Fam> fams;
  for (const auto& l : cfg.lambdas) fams.push_back({"free_poisson", l});
  fams.push_back({"cauchy", 1});
  for (const auto& fam : fams)
    for (const auto& a : cfg.poles)
      for (const auto& t : cfg.t_values) {
        FamilyPart f = fam.name == "cauchy" ? FamilyPart::cauchy() : FamilyPart::free_poisson(fam.lambda);
        if (fam.name != "cauchy" && a.is_finite()) f.shift = a.value();
        const ExtendedMeasure mu = ExtendedMeasure::of(f);
        const double td = to_double(t);
        for (const Complex& z : zs) {
          const double r1 = pde_residual_G(mu, a, td, z, h);
          const double r2 = pde_residual_G(mu, a, td, z, h / 2);
          const double rr = pde_residual_R(mu, a, td, z * 0.1, h);
          char zbuf[64];
          std::snprintf(zbuf, sizeof zbuf, "%.12g%+.12gi", z.real(), z.imag());
          std::string param = join_params({{"family", fam.name}, {"a", point_str(a)}, {"t", t.get_str()}, {"z", zbuf}});
          if (fam.name != "cauchy") param = "lambda=" + fam.lambda.get_str() + ";" + param;
          sink(record(cfg, param + ";h=" + format_double(h), "residual_G", format_double(r1), r1 < *cfg.tol));
          sink(record(cfg, param + ";h=" + format_double(h), "halving_ratio", format_double(r1 / r2),
                      second_order(r1, r2)));
          sink(record(cfg, param + ";h=" + format_double(h) + ";z_R=z/10", "residual_R", format_double(rr),
                      rr < *cfg.tol));
          rows.push_back({fam.name, to_double(fam.lambda), point_str(a), td, z, h, r1});
          rows.push_back({fam.name, to_double(fam.lambda), point_str(a), td, z, h / 2, r2});
        }
      }

  // Characteristic relation for free Poisson laws shifted to each finite pole.
  std::mt19937_64 rng(cfg.seed);
  for (const auto& lambda : cfg.lambdas)
    for (const auto& a : cfg.poles) {
      if (a.is_infinite()) continue;
      FamilyPart f = FamilyPart::free_poisson(lambda);
      f.shift = a.value();
      double worst = 0;
      for (int i = 0; i < cfg.instances; ++i) {
        const double xi0 = draw_real(rng, -2, 0.9);
        const double t = draw_real(rng, 1, 5);
        worst = std::max(worst, characteristic_residual(f, a.value(), t, xi0));
      }
      const double at_one = characteristic_residual(f, a.value(), 1, -0.3);
      const std::string param = join_params({{"lambda", lambda.get_str()},
                                             {"a", point_str(a)},
                                             {"draws", std::to_string(cfg.instances)}});
      sink(record(cfg, param, "characteristic_max_residual", format_double(worst), worst < kCharacteristicTol));
      sink(record(cfg, param, "characteristic_t1_residual", format_double(at_one), at_one == 0));
    }

  if (!cfg.residual_csv.empty()) {
    std::ofstream out(cfg.residual_csv);
    if (!out) throw std::runtime_error("cannot write " + cfg.residual_csv);
    write_residual_csv(out, rows);
  }
}

bool is_kind(const std::string& k) {
  const auto& kinds = experiment_kinds();
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"thm11",     "thm12",         "cauchy-invariance", "interlacing",
                                              "atoms",     "laguerre-flow", "pde-residual"};
  return kinds;
}

ExperimentConfig with_defaults(ExperimentConfig c) {
  const std::string& e = c.experiment;
  auto fill = [](auto& field, auto value) {
    if (field.empty()) field = value;
  };
  const ExtendedPoint inf = ExtendedPoint::infinity();
  if (e == "thm11") {
    if (c.family.empty()) c.family = "free_poisson";
    fill(c.lambdas, rationals({"2"}));
    fill(c.poles, std::vector<ExtendedPoint>{ExtendedPoint(0)});
    fill(c.t_values, rationals({"2"}));
    fill(c.ladder, std::vector<int>{64, 128, 256, 512});
    if (!c.tol) c.tol = 0.05;
  } else if (e == "cauchy-invariance") {
    if (c.family.empty()) c.family = "cauchy";
    fill(c.poles, std::vector<ExtendedPoint>{ExtendedPoint(1)});
    fill(c.t_values, rationals({"2"}));
    fill(c.ladder, std::vector<int>{100, 200, 400});
    if (!c.tol) c.tol = 0.08;
  } else if (e == "thm12") {
    fill(c.lambdas, rationals({"3/2", "2", "4"}));
    fill(c.poles, std::vector<ExtendedPoint>{ExtendedPoint(0), ExtendedPoint(1), inf});
    fill(c.s_values, rationals({"1", "7/4", "5/2", "13/4", "4"}));
    fill(c.t_values, rationals({"1", "7/4", "5/2", "13/4", "4"}));
  } else if (e == "interlacing") {
    if (c.instances == 0) c.instances = 500;
  } else if (e == "atoms") {
    fill(c.weights, rationals({"3/10", "3/5"}));
    fill(c.s_values, rationals({"5/4", "3/2", "2"}));
    fill(c.poles, std::vector<ExtendedPoint>{ExtendedPoint(0)});
    fill(c.ladder, std::vector<int>{400});
    if (!c.atom_at) c.atom_at = Rational(2);
  } else if (e == "laguerre-flow") {
    fill(c.lambdas, rationals({"3/2", "2", "3"}));
    fill(c.poles, std::vector<ExtendedPoint>{ExtendedPoint(1), ExtendedPoint(Rational(-1, 2))});
    fill(c.ladder, std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  } else if (e == "pde-residual") {
    fill(c.lambdas, rationals({"2"}));
    fill(c.poles, std::vector<ExtendedPoint>{inf, ExtendedPoint(0), ExtendedPoint(1)});
    fill(c.t_values, rationals({"2"}));
    if (!c.tol) c.tol = 1e-6;
    if (!c.h) c.h = 1e-4;
    if (c.instances == 0) c.instances = 100;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  if (!is_kind(c.experiment)) throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  if (!c.family.empty() && c.family != "free_poisson" && c.family != "cauchy")
    throw ConfigError("family", "expected free_poisson or cauchy, got '" + c.family + "'");
  if (c.experiment == "cauchy-invariance" && c.family != "cauchy")
    throw ConfigError("family", "cauchy-invariance runs on the Cauchy family");
  for (std::size_t i = 0; i < c.ladder.size(); ++i) {
    if (c.ladder[i] < 1) throw ConfigError("ladder", "degrees must be positive");
    if (i > 0 && c.ladder[i] <= c.ladder[i - 1]) throw ConfigError("ladder", "degrees must be strictly increasing");
  }
  if (c.tol && !(*c.tol > 0)) throw ConfigError("tol", "tolerance must be positive");
  if (c.h && !(*c.h > 0)) throw ConfigError("h", "finite-difference step must be positive");
  for (const auto& l : c.lambdas)
    if (l <= 0) throw ConfigError("lambda", "rates must be positive");
  for (const auto& s : c.s_values)
    if (s < 1) throw ConfigError("s", "powers must be >= 1");
  for (const auto& t : c.t_values)
    if (t < 1) throw ConfigError("t", "powers must be >= 1");
  for (const auto& w : c.weights)
    if (w <= 0 || w >= 1) throw ConfigError("weights", "atom weights must lie in (0, 1)");
  if (c.instances < 0) throw ConfigError("instances", "must be positive");
  if (c.experiment == "atoms")
    for (const auto& a : c.poles)
      if (c.atom_at && a == ExtendedPoint(*c.atom_at)) throw ConfigError("pole", "pole must differ from the atom");
  if (c.experiment == "thm11" || c.experiment == "cauchy-invariance" || c.experiment == "atoms") {
    if (c.ladder.empty()) throw ConfigError("ladder", "needs at least one degree");
  }
}

void run(const ExperimentConfig& raw, const Sink& sink) {
  const ExperimentConfig cfg = with_defaults(raw);
  validate(cfg);
  const std::string& e = cfg.experiment;
  if (e == "thm11" || e == "cauchy-invariance") run_convergence(cfg, sink);
  else if (e == "thm12") run_thm12(cfg, sink);
  else if (e == "interlacing") run_interlacing(cfg, sink);
  else if (e == "atoms") run_atoms(cfg, sink);
  else if (e == "laguerre-flow") run_laguerre_flow(cfg, sink);
  else run_pde_residual(cfg, sink);
}

std::vector<ResultRecord> run(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> out;
  run(cfg, [&](const ResultRecord& r) { out.push_back(r); });
  return out;
}

bool all_pass(const std::vector<ResultRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const ResultRecord& r) { return r.pass; });
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv_header(std::ostream& os) { os << "experiment,param,metric,value,pass\n"; }

void write_csv_row(std::ostream& os, const ResultRecord& r) {
  // Only free-text values can carry commas.
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  os << field(r.experiment) << ',' << field(r.param) << ',' << field(r.metric) << ',' << field(r.value) << ','
     << (r.pass ? "true" : "false") << '\n';
}

void write_json(std::ostream& os, const std::vector<ResultRecord>& records) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records)
    j.push_back({{"experiment", r.experiment}, {"param", r.param}, {"metric", r.metric}, {"value", r.value},
                 {"pass", r.pass}});
  os << j.dump(2) << '\n';
}

Histogram emit_histogram(const RootProfile& profile, int bins, Chart chart, double scale) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  const int n = profile.formal_degree();
  if (n == 0) throw std::invalid_argument("histogram of an empty root profile");
  std::vector<double> xs;
  for (double v : profile.values()) xs.push_back(chart == Chart::Arctan ? std::atan(v * scale) : v * scale);
  double lo, hi;
  if (chart == Chart::Arctan) {
    lo = -std::numbers::pi / 2;
    hi = std::numbers::pi / 2;
  } else if (xs.empty()) {
    lo = 0;
    hi = 1;
  } else {
    lo = xs.front();
    hi = xs.back();
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  Histogram h;
  h.bins.resize(static_cast<std::size_t>(bins));
  const double width = (hi - lo) / bins;
  for (int i = 0; i < bins; ++i) {
    auto& b = h.bins[static_cast<std::size_t>(i)];
    b.lo = lo + width * i;
    b.hi = i + 1 == bins ? hi : lo + width * (i + 1);
  }
  const double unit = 1.0 / n;
  for (double x : xs) {
    auto i = static_cast<long>(std::floor((x - lo) / width));
    i = std::clamp(i, 0L, static_cast<long>(bins) - 1);
    h.bins[static_cast<std::size_t>(i)].mass += unit;
  }
  h.at_infinity = profile.at_infinity * unit;
  if (chart == Chart::Arctan) h.bins.back().mass += h.at_infinity;
  for (auto& b : h.bins) b.density = b.mass / (b.hi - b.lo);
  return h;
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin,lo,hi,mass,density\n";
  for (std::size_t i = 0; i < h.bins.size(); ++i) {
    const auto& b = h.bins[i];
    os << i << ',' << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.mass) << ','
       << format_double(b.density) << '\n';
  }
  if (h.at_infinity > 0) os << "at_infinity,,," << format_double(h.at_infinity) << ",\n";
}

}  // namespace polarlab
