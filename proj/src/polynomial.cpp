#include "polarlab/polynomial.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace polarlab {

namespace {

// lcm of all denominators; multiplying the coefficients by it gives integers.
Integer common_denominator(const std::vector<Rational>& c) {
  Integer l = 1;
  for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

std::vector<Integer> integer_coeffs(const std::vector<Rational>& c, const Integer& den) {
  std::vector<Integer> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].get_num() * (den / c[i].get_den());
  return out;
}

Integer content(const std::vector<Integer>& c) {
  Integer g = 0;
  for (const auto& z : c) {
    if (z == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

// Binomial row of (u x + v)^m over the integers, low-to-high.
std::vector<Integer> linear_power(const Integer& u, const Integer& v, int m) {
  std::vector<Integer> r(static_cast<std::size_t>(m) + 1);
  r[0] = 1;
  for (int j = 1; j <= m; ++j) {
    r[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j) - 1] * u;
    for (int i = j - 1; i >= 1; --i)
      r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] * v + r[static_cast<std::size_t>(i) - 1] * u;
    r[0] *= v;
  }
  return r;
}

}  // namespace

FormalPolynomial::FormalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("a polynomial needs at least one coefficient");
  for (auto& c : coeffs_) c.canonicalize();
}

FormalPolynomial::FormalPolynomial(std::vector<Rational> coeffs, int formal_degree) : coeffs_(std::move(coeffs)) {
  if (formal_degree < 0) throw std::invalid_argument("formal degree must be non-negative");
  const auto want = static_cast<std::size_t>(formal_degree) + 1;
  if (coeffs_.size() > want) {
    for (std::size_t i = want; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0)
        throw std::invalid_argument("nonzero coefficient of x^" + std::to_string(i) + " above formal degree " +
                                    std::to_string(formal_degree));
  }
  coeffs_.resize(want);
  for (auto& c : coeffs_) c.canonicalize();
}

FormalPolynomial FormalPolynomial::zero(int formal_degree) { return FormalPolynomial({}, formal_degree); }

FormalPolynomial FormalPolynomial::constant(const Rational& c, int formal_degree) {
  return FormalPolynomial({c}, formal_degree);
}

FormalPolynomial FormalPolynomial::from_roots(std::span<const Rational> roots, std::optional<int> formal_degree,
                                              const Rational& leading) {
  const int m = static_cast<int>(roots.size());
  const int n = formal_degree.value_or(m);
  if (n < m) throw std::invalid_argument("formal degree below the number of roots");
  std::vector<Rational> c(static_cast<std::size_t>(m) + 1);
  c[0] = 1;
  for (int j = 0; j < m; ++j) {
    const Rational& r = roots[static_cast<std::size_t>(j)];
    for (int i = j + 1; i >= 1; --i) c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i) - 1] - r * c[static_cast<std::size_t>(i)];
    c[0] = -r * c[0];
  }
  for (auto& x : c) x *= leading;
  return FormalPolynomial(std::move(c), n);
}

std::optional<int> FormalPolynomial::precise_degree() const {
  for (int k = formal_degree(); k >= 0; --k)
    if (coeffs_[static_cast<std::size_t>(k)] != 0) return k;
  return std::nullopt;
}

bool FormalPolynomial::is_zero() const { return !precise_degree().has_value(); }

int FormalPolynomial::infinity_multiplicity() const {
  auto d = precise_degree();
  if (!d) throw std::invalid_argument("the zero polynomial has no roots");
  return formal_degree() - *d;
}

const Rational& FormalPolynomial::leading_coefficient() const {
  auto d = precise_degree();
  if (!d) throw std::invalid_argument("the zero polynomial has no leading coefficient");
  return coeffs_[static_cast<std::size_t>(*d)];
}

Rational FormalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

FormalPolynomial FormalPolynomial::with_formal_degree(int n) const { return FormalPolynomial(coeffs_, n); }

FormalPolynomial FormalPolynomial::scaled(const Rational& c) const {
  std::vector<Rational> out(coeffs_);
  for (auto& x : out) x *= c;
  return FormalPolynomial(std::move(out));
}

std::string FormalPolynomial::str() const {
  std::string s;
  for (int k = formal_degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Rational a = abs(c);
    bool unit = a == 1 && k > 0;
    if (!unit) s += a.get_den() == 1 ? a.get_num().get_str() : a.get_str();
    if (k > 0) {
      if (!unit) s += "*";
      s += "x";
      if (k > 1) s += "^" + std::to_string(k);
    }
  }
  if (s.empty()) s = "0";
  return s + " (formal degree " + std::to_string(formal_degree()) + ")";
}

FormalPolynomial operator*(const FormalPolynomial& p, const FormalPolynomial& q) {
  const int n = p.formal_degree(), m = q.formal_degree();
  std::vector<Rational> c(static_cast<std::size_t>(n + m) + 1);
  for (int i = 0; i <= n; ++i) {
    if (p[i] == 0) continue;
    for (int j = 0; j <= m; ++j) c[static_cast<std::size_t>(i + j)] += p[i] * q[j];
  }
  return FormalPolynomial(std::move(c));
}

FormalPolynomial polar_derivative(const FormalPolynomial& p, const ExtendedPoint& alpha) {
  const int n = p.formal_degree();
  if (n == 0) throw std::invalid_argument("cannot differentiate formal degree 0");
  std::vector<Rational> c(static_cast<std::size_t>(n));
  if (alpha.is_infinite()) {
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = (k + 1) * p[k + 1];
  } else {
    const Rational& a = alpha.value();
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = (n - k) * p[k] + a * (k + 1) * p[k + 1];
  }
  return FormalPolynomial(std::move(c));
}

FormalPolynomial polar_derivative_iter(const FormalPolynomial& p, const ExtendedPoint& alpha, int target_degree) {
  const int n = p.formal_degree();
  if (target_degree < 0 || target_degree > n)
    throw std::invalid_argument("target degree " + std::to_string(target_degree) + " outside [0, " +
                                std::to_string(n) + "]");
  if (target_degree == n) return p;

  // Work with p = scale * P, P integral and primitive, so repeated steps stay cheap.
  const Integer den = common_denominator(p.coeffs());
  std::vector<Integer> P = integer_coeffs(p.coeffs(), den);
  Rational scale(1, den);
  Integer u = 0, v = 1;
  if (alpha.is_finite()) {
    u = alpha.value().get_num();
    v = alpha.value().get_den();
  }
  for (int deg = n; deg > target_degree; --deg) {
    std::vector<Integer> next(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k) {
      auto ks = static_cast<std::size_t>(k);
      if (alpha.is_infinite()) {
        next[ks] = P[ks + 1] * (k + 1);
      } else {
        next[ks] = P[ks] * v * (deg - k) + P[ks + 1] * u * (k + 1);
      }
    }
    if (alpha.is_finite()) scale /= v;
    Integer g = content(next);
    if (g > 1) {
      for (auto& z : next) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
      scale *= g;
    }
    P = std::move(next);
  }
  scale.canonicalize();
  std::vector<Rational> c(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    c[i] = Rational(P[i]) * scale;
  }
  return FormalPolynomial(std::move(c));
}

FormalPolynomial mobius_pushforward(const FormalPolynomial& p, const MobiusMap& t) {
  if (p.is_zero()) throw std::invalid_argument("cannot push forward the zero polynomial");
  const int n = p.formal_degree();

  // Sum_k p_k (d x - b)^k (-c x + a)^{n-k}, with everything scaled to integers first.
  const Integer pden = common_denominator(p.coeffs());
  const std::vector<Integer> P = integer_coeffs(p.coeffs(), pden);
  const std::vector<Rational> entries{t.a(), t.b(), t.c(), t.d()};
  const Integer tden = common_denominator(entries);
  const std::vector<Integer> E = integer_coeffs(entries, tden);
  const Integer &a = E[0], &b = E[1], &c = E[2], &d = E[3];

  // Horner in the homogeneous form: H_j = p_j L2^{n-j} + L1 H_{j+1}, L1 = d x - b, L2 = -c x + a.
  std::vector<std::vector<Integer>> l2pow(static_cast<std::size_t>(n) + 1);
  l2pow[0] = {Integer(1)};
  for (int m = 1; m <= n; ++m) {
    const auto& prev = l2pow[static_cast<std::size_t>(m) - 1];
    std::vector<Integer> cur(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i) {
      auto is = static_cast<std::size_t>(i);
      cur[is] += prev[is] * a;
      cur[is + 1] -= prev[is] * c;
    }
    l2pow[static_cast<std::size_t>(m)] = std::move(cur);
  }
  std::vector<Integer> H(static_cast<std::size_t>(n) + 1);
  for (int j = n; j >= 0; --j) {
    std::vector<Integer> next(static_cast<std::size_t>(n) + 1);
    if (j < n) {
      for (int i = 0; i < n; ++i) {
        auto is = static_cast<std::size_t>(i);
        if (H[is] == 0) continue;
        next[is] -= H[is] * b;
        next[is + 1] += H[is] * d;
      }
    }
    const auto pj = P[static_cast<std::size_t>(j)];
    if (pj != 0) {
      const auto& pw = l2pow[static_cast<std::size_t>(n - j)];
      for (std::size_t i = 0; i < pw.size(); ++i) next[i] += pj * pw[i];
    }
    H = std::move(next);
  }
  Integer tscale;
  mpz_pow_ui(tscale.get_mpz_t(), tden.get_mpz_t(), static_cast<unsigned long>(n));
  Rational scale(1, Integer(tscale * pden));
  scale.canonicalize();
  std::vector<Rational> out(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) out[i] = Rational(H[i]) * scale;
  return FormalPolynomial(std::move(out));
}

FormalPolynomial shift(const FormalPolynomial& p, const Rational& c) {
  return mobius_pushforward(p, MobiusMap::shift(c));
}

FormalPolynomial dilate(const FormalPolynomial& p, const Rational& c) {
  return mobius_pushforward(p, MobiusMap::dilation(c));
}

std::vector<Rational> e_vector(const FormalPolynomial& p) {
  const int n = p.formal_degree();
  std::vector<Rational> e(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    Rational v = p[n - k] / Rational(binomial(n, k));
    e[static_cast<std::size_t>(k)] = k % 2 ? Rational(-v) : v;
  }
  return e;
}

FormalPolynomial from_e_vector(std::span<const Rational> e) {
  if (e.empty()) throw std::invalid_argument("empty e-vector");
  const int n = static_cast<int>(e.size()) - 1;
  std::vector<Rational> c(e.size());
  for (int k = 0; k <= n; ++k) {
    Rational v = e[static_cast<std::size_t>(k)] * Rational(binomial(n, k));
    c[static_cast<std::size_t>(n - k)] = k % 2 ? Rational(-v) : v;
  }
  return FormalPolynomial(std::move(c));
}

FormalPolynomial finite_free_mult(const FormalPolynomial& p, const FormalPolynomial& q) {
  if (p.formal_degree() != q.formal_degree())
    throw std::invalid_argument("finite free convolution needs equal formal degrees (" +
                                std::to_string(p.formal_degree()) + " vs " + std::to_string(q.formal_degree()) + ")");
  std::vector<Rational> e = e_vector(p);
  const std::vector<Rational> f = e_vector(q);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] *= f[k];
  return from_e_vector(e);
}

FormalPolynomial q_polynomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("q_polynomial needs 0 <= k <= n");
  std::vector<Integer> row = linear_power(1, -1, k);
  const Rational ff = falling_factorial(n, k);
  std::vector<Rational> c(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) c[i] = ff * row[i];
  return FormalPolynomial(std::move(c), n);
}

FormalPolynomial hypergeometric(int n, std::span<const Rational> upper, std::span<const Rational> lower) {
  if (n < 0) throw std::invalid_argument("hypergeometric degree must be non-negative");
  for (const auto& a : lower) {
    Rational na = a * n;
    if (na.get_den() == 1 && na >= 0 && na < n)
      throw std::invalid_argument("hypergeometric lower parameter " + to_string(a) +
                                  " violates n*a not in {0, 1, ..., n-1} for n = " + std::to_string(n));
  }
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  Rational ratio = 1;  // prod (n b)_k / prod (n a)_k, built up one factor per k
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      for (const auto& b : upper) ratio *= b * n - (k - 1);
      for (const auto& a : lower) ratio /= a * n - (k - 1);
    }
    Rational v = ratio * Rational(binomial(n, k));
    c[static_cast<std::size_t>(n - k)] = k % 2 ? Rational(-v) : v;
  }
  return FormalPolynomial(std::move(c));
}

FormalPolynomial laguerre(int n, const Rational& lambda) {
  const Rational upper[] = {lambda};
  return hypergeometric(n, upper, {});
}

FormalPolynomial cosine_appell(int n) {
  if (n < 0) throw std::invalid_argument("cosine_appell needs n >= 0");
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; 2 * k <= n; ++k) {
    Rational v(binomial(n, 2 * k));
    c[static_cast<std::size_t>(n - 2 * k)] = k % 2 ? Rational(-v) : v;
  }
  return FormalPolynomial(std::move(c));
}

std::optional<Rational> proportionality_constant(const FormalPolynomial& p, const FormalPolynomial& q) {
  if (p.formal_degree() != q.formal_degree())
    throw std::invalid_argument("proportionality needs equal formal degrees");
  const int n = p.formal_degree();
  int pivot = -1;
  for (int k = 0; k <= n; ++k)
    if (q[k] != 0) {
      pivot = k;
      break;
    }
  if (pivot < 0) return std::nullopt;
  Rational c = p[pivot] / q[pivot];
  if (c == 0) return std::nullopt;
  for (int k = 0; k <= n; ++k)
    if (p[k] != c * q[k]) return std::nullopt;
  return c;
}

bool proportional(const FormalPolynomial& p, const FormalPolynomial& q) {
  if (p.is_zero() && q.is_zero()) return p.formal_degree() == q.formal_degree();
  return proportionality_constant(p, q).has_value();
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Rational falling_factorial(const Rational& x, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= x - i;
  return r;
}

void to_json(nlohmann::json& j, const FormalPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_string(c));
  j = nlohmann::json{{"formal_degree", p.formal_degree()}, {"coeffs", std::move(coeffs)}};
}

FormalPolynomial polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs")) throw std::invalid_argument("polynomial JSON needs a \"coeffs\" array");
  std::vector<Rational> c;
  for (const auto& v : j.at("coeffs")) {
    if (v.is_string()) c.push_back(parse_rational(v.get<std::string>()));
    else if (v.is_number_integer()) c.emplace_back(Integer(std::to_string(v.get<long long>())));
    else throw std::invalid_argument("polynomial coefficients must be strings or integers");
  }
  if (j.contains("formal_degree")) return FormalPolynomial(std::move(c), j.at("formal_degree").get<int>());
  return FormalPolynomial(std::move(c));
}

}  // namespace polarlab
