#include "polarlab/roots.hpp"

#include "intpoly.hpp"
#include "root_finding.hpp"

#include <algorithm>
#include <map>

namespace polarlab {

using detail::Dyadic;
using detail::IntPoly;

namespace {

struct Analysis {
  IntPoly square_free;
  std::vector<IntPoly> factors;  // factors[i] has multiplicity i + 1
  detail::Isolation isolation;
};

IntPoly precise_part(const FormalPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("the zero polynomial has no roots");
  std::vector<Rational> c(p.coeffs().begin(), p.coeffs().begin() + *p.precise_degree() + 1);
  return detail::from_rationals(c);
}

// Square-free reduction followed by isolation. isolation.intervals is empty unless all roots are real.
Analysis analyse(const IntPoly& prim) {
  Analysis a;
  if (detail::degree(prim) < 1) return a;
  if (detail::square_free_mod_prime(prim)) {
    a.square_free = prim;
    a.factors = {prim};
  } else {
    a.factors = detail::square_free_decomposition(prim);
    a.square_free = IntPoly{Integer(1)};
    for (const auto& f : a.factors)
      if (detail::degree(f) > 0) a.square_free = detail::multiply(a.square_free, f);
    a.square_free = detail::primitive(a.square_free);
  }
  a.isolation = detail::isolate_square_free(a.square_free);
  return a;
}

// Canonical dyadic cell of the root isolated by iv, at the first level >= min_level where
// the cell lies strictly inside (lo, hi). Exact dyadic roots come back as [x, x].
RootInterval locate(const IntPoly& p, const detail::IsolatingInterval& iv, unsigned long min_level) {
  const Rational lo = iv.lo.value(), hi = iv.hi.value();
  for (unsigned long level = min_level;; ++level) {
    std::map<Integer, int> cache;
    const Dyadic jlo = Dyadic::floor_of(lo, level);
    Dyadic jhi = Dyadic::floor_of(hi, level);
    if (jhi.value() < hi) jhi.j += 1;
    std::optional<Rational> exact;
    // below(j): grid point j / 2^level lies strictly left of the root.
    auto below = [&](const Integer& j) {
      if (j <= jlo.j) return true;
      if (j >= jhi.j) return false;
      auto it = cache.find(j);
      int s;
      if (it != cache.end()) {
        s = it->second;
      } else {
        s = detail::sign_at(p, Dyadic{j, level});
        cache.emplace(j, s);
      }
      if (s == 0) {
        exact = Dyadic{j, level}.value();
        return false;
      }
      return s == iv.sign_lo;
    };
    Integer guess = Dyadic::floor_of(iv.approx, level).j;
    guess = std::clamp(guess, jlo.j, Integer(jhi.j - 1));
    Integer left, right;  // below(left) true, below(right) false
    if (below(guess)) {
      left = guess;
      Integer step = 1;
      for (;;) {
        Integer cand = left + step;
        if (cand >= jhi.j) {
          right = jhi.j;
          break;
        }
        if (!below(cand)) {
          right = cand;
          break;
        }
        left = cand;
        step *= 2;
      }
    } else {
      if (exact) return {*exact, *exact, 1};
      right = guess;
      Integer step = 1;
      for (;;) {
        Integer cand = right - step;
        if (cand <= jlo.j) {
          left = jlo.j;
          break;
        }
        if (below(cand)) {
          left = cand;
          break;
        }
        if (exact) return {*exact, *exact, 1};
        right = cand;
        step *= 2;
      }
    }
    while (right - left > 1) {
      Integer mid = (left + right) / 2;
      if (below(mid)) left = mid;
      else right = mid;
    }
    if (right < jhi.j) below(right);  // detects an exact root at the right end
    if (exact) return {*exact, *exact, 1};
    const Rational cell_lo = Dyadic{left, level}.value();
    const Rational cell_hi = Dyadic{right, level}.value();
    if (right == left + 1 && cell_lo > lo && cell_hi < hi) return {cell_lo, cell_hi, 1};
  }
}

unsigned long tolerance_level(const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("root tolerance must be positive");
  unsigned long k = 0;
  Rational width = 1;
  while (width > tol) {
    width /= 2;
    ++k;
  }
  return k;
}

std::vector<RootInterval> expanded(const RootProfile& r) {
  std::vector<RootInterval> out;
  for (const auto& iv : r.roots)
    for (int m = 0; m < iv.multiplicity; ++m) out.push_back(iv);
  return out;
}

// x <= y unless the enclosures prove otherwise.
bool weakly_below(const RootInterval& x, const RootInterval& y) { return x.lo <= y.hi; }

}  // namespace

int RootProfile::finite_count() const {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

std::vector<double> RootProfile::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(finite_count()));
  for (const auto& r : roots) v.insert(v.end(), static_cast<std::size_t>(r.multiplicity), r.approx());
  return v;
}

NotRealRooted::NotRealRooted(int real_count, int distinct_degree)
    : std::runtime_error("polynomial is not real-rooted: Sturm count " + std::to_string(real_count) +
                         " distinct real roots out of " + std::to_string(distinct_degree)),
      real_count_(real_count),
      distinct_degree_(distinct_degree) {}

bool is_real_rooted(const FormalPolynomial& p) {
  const IntPoly prim = precise_part(p);
  if (detail::degree(prim) < 1) return true;
  const Analysis a = analyse(prim);
  return a.isolation.real_count == a.isolation.degree;
}

int sturm_real_root_count(const FormalPolynomial& p) {
  const IntPoly prim = precise_part(p);
  if (detail::degree(prim) < 1) return 0;
  return detail::sturm_real_root_count(detail::sturm_sequence(prim));
}

RootProfile isolate_roots(const FormalPolynomial& p, const Rational& tol) {
  const unsigned long level = tolerance_level(tol);
  const IntPoly prim = precise_part(p);
  RootProfile out;
  out.at_infinity = p.infinity_multiplicity();
  if (detail::degree(prim) < 1) return out;

  const Analysis a = analyse(prim);
  if (a.isolation.real_count != a.isolation.degree) throw NotRealRooted(a.isolation.real_count, a.isolation.degree);
  for (const auto& iv : a.isolation.intervals) {
    RootInterval r = locate(a.square_free, iv, level);
    if (a.factors.size() > 1) {
      for (std::size_t i = 0; i < a.factors.size(); ++i) {
        const IntPoly& f = a.factors[i];
        if (detail::degree(f) < 1) continue;
        if (detail::sign_at(f, iv.lo) * detail::sign_at(f, iv.hi) < 0) {
          r.multiplicity = static_cast<int>(i) + 1;
          break;
        }
      }
    }
    out.roots.push_back(r);
  }
  return out;
}

ExtendedMeasure empirical_distribution(const RootProfile& r) {
  const int n = r.formal_degree();
  if (n == 0) throw std::invalid_argument("empirical distribution of an empty root profile");
  std::vector<Atom> atoms;
  atoms.reserve(r.roots.size() + 1);
  for (const auto& iv : r.roots) atoms.push_back({iv.midpoint(), make_rational(iv.multiplicity, n)});
  if (r.at_infinity > 0) atoms.push_back({ExtendedPoint::infinity(), make_rational(r.at_infinity, n)});
  return ExtendedMeasure(std::move(atoms), std::monostate{});
}

bool interlaces(const RootProfile& p, const RootProfile& q) {
  const auto a = expanded(p), b = expanded(q);
  if (b.size() != a.size() && b.size() + 1 != a.size())
    throw std::invalid_argument("interlacing needs equal root counts or one fewer (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!weakly_below(a[i], b[i])) return false;
    if (i + 1 < a.size() && !weakly_below(b[i], a[i + 1])) return false;
  }
  return true;
}

bool dominates(const RootProfile& p, const RootProfile& q) {
  const auto a = expanded(p), b = expanded(q);
  if (a.size() != b.size())
    throw std::invalid_argument("domination needs equal root counts (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!weakly_below(a[i], b[i])) return false;
  return true;
}

void to_json(nlohmann::json& j, const RootProfile& r) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& iv : r.roots)
    roots.push_back({{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}, {"mult", iv.multiplicity}});
  j = nlohmann::json{{"roots", std::move(roots)}, {"at_infinity", r.at_infinity}};
}

RootProfile root_profile_from_json(const nlohmann::json& j) {
  RootProfile r;
  for (const auto& e : j.at("roots"))
    r.roots.push_back({parse_rational(e.at("lo").get<std::string>()), parse_rational(e.at("hi").get<std::string>()),
                       e.value("mult", 1)});
  r.at_infinity = j.value("at_infinity", 0);
  return r;
}

}  // namespace polarlab
