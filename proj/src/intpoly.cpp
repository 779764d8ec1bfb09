#include "intpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <stdexcept>

namespace polarlab::detail {

namespace {

int sgn(const Integer& z) { return mpz_sgn(z.get_mpz_t()); }

Integer content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& z : p) {
    if (z == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Integer max_norm(const IntPoly& p) {
  Integer m = 0;
  for (const auto& z : p)
    if (mpz_cmpabs(z.get_mpz_t(), m.get_mpz_t()) > 0) m = ::abs(z);
  return m;
}

Integer eval(const IntPoly& p, const Integer& x) {
  Integer acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// One attempt family of the heuristic gcd: evaluate at a large integer, take the integer
// gcd and read its balanced xi-adic digits back as a polynomial candidate.
std::optional<IntPoly> heuristic_gcd(const IntPoly& a, const IntPoly& b) {
  Integer xi = 2 * std::min(max_norm(a), max_norm(b)) + 29;
  const auto maxdeg = static_cast<std::size_t>(std::max(degree(a), degree(b)));
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * maxdeg > 64'000'000) break;
    const Integer alpha = eval(a, xi), beta = eval(b, xi);
    Integer gamma;
    mpz_gcd(gamma.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t());
    IntPoly g;
    const Integer half = xi / 2;
    while (gamma != 0) {
      Integer digit;
      mpz_fdiv_r(digit.get_mpz_t(), gamma.get_mpz_t(), xi.get_mpz_t());
      if (digit > half) digit -= xi;
      g.push_back(digit);
      gamma -= digit;
      mpz_divexact(gamma.get_mpz_t(), gamma.get_mpz_t(), xi.get_mpz_t());
    }
    trim(g);
    if (!g.empty()) {
      g = primitive(std::move(g));
      if (exact_div(a, g) && exact_div(b, g)) return g;
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

// Remainder of a by b up to a positive factor, plus the sign of the factor used.
IntPoly pseudo_remainder(IntPoly r, const IntPoly& b, int& multiplier_sign) {
  const int db = degree(b);
  const Integer& lb = b.back();
  multiplier_sign = 1;
  while (degree(r) >= db) {
    const int shift = degree(r) - db;
    const Integer lr = r.back();
    for (auto& z : r) z *= lb;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(i + shift)] -= lr * b[static_cast<std::size_t>(i)];
    if (lb < 0) multiplier_sign = -multiplier_sign;
    trim(r);
    Integer c = content(r);
    if (c > 1)
      for (auto& z : r) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), c.get_mpz_t());
  }
  return r;
}

// Arithmetic modulo word-size primes for the modular gcd.
using u64 = std::uint64_t;
using Zp = std::vector<u64>;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

Zp reduce(const IntPoly& a, u64 p) {
  Zp r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = mpz_fdiv_ui(a[i].get_mpz_t(), p);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// Monic gcd over F_p.
Zp gcd_mod(Zp a, Zp b, u64 p) {
  while (!b.empty()) {
    const u64 inv = invmod(b.back(), p);
    while (a.size() >= b.size()) {
      const u64 f = mulmod(a.back(), inv, p);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        u64 t = mulmod(f, b[i], p);
        u64& x = a[i + shift];
        x = x >= t ? x - t : x + p - t;
      }
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    const u64 inv = invmod(a.back(), p);
    for (auto& x : a) x = mulmod(x, inv, p);
  }
  return a;
}

class PrimeStream {
 public:
  u64 next() {
    do {
      current_ -= 2;
    } while (!mpz_probab_prime_p(Integer(std::to_string(current_)).get_mpz_t(), 30));
    return current_;
  }

 private:
  u64 current_ = (u64{1} << 62) + 1;
};

// Brown-style modular gcd: images of gamma * monic gcd combined by CRT, verified by division.
IntPoly modular_gcd(const IntPoly& a, const IntPoly& b) {
  Integer gamma;
  mpz_gcd(gamma.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
  PrimeStream primes;
  IntPoly h;
  Integer modulus = 0;
  int hdeg = std::numeric_limits<int>::max();
  IntPoly last_candidate;
  for (int used = 0; used < 100000; ++used) {
    const u64 p = primes.next();
    if (mpz_fdiv_ui(a.back().get_mpz_t(), p) == 0 || mpz_fdiv_ui(b.back().get_mpz_t(), p) == 0) continue;
    Zp g = gcd_mod(reduce(a, p), reduce(b, p), p);
    const int dg = static_cast<int>(g.size()) - 1;
    if (dg == 0) return {Integer(1)};
    if (dg > hdeg) continue;
    const u64 gp = mpz_fdiv_ui(gamma.get_mpz_t(), p);
    for (auto& x : g) x = mulmod(x, gp, p);
    if (dg < hdeg) {
      hdeg = dg;
      h.assign(g.size(), 0);
      for (std::size_t i = 0; i < g.size(); ++i) h[i] = static_cast<unsigned long>(g[i]);
      modulus = static_cast<unsigned long>(p);
      last_candidate.clear();
      continue;
    }
    const u64 minv = invmod(mpz_fdiv_ui(modulus.get_mpz_t(), p), p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const u64 hi = mpz_fdiv_ui(h[i].get_mpz_t(), p);
      const u64 diff = g[i] >= hi ? g[i] - hi : g[i] + p - hi;
      h[i] += modulus * static_cast<unsigned long>(mulmod(diff, minv, p));
    }
    modulus *= static_cast<unsigned long>(p);
    const Integer half = modulus / 2;
    IntPoly candidate(h);
    for (auto& x : candidate)
      if (x > half) x -= modulus;
    if (candidate == last_candidate) {
      IntPoly c = primitive(candidate);
      if (exact_div(a, c) && exact_div(b, c)) return c;
    }
    last_candidate = std::move(candidate);
  }
  throw std::runtime_error("modular gcd did not stabilize");
}

}  // namespace

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }

IntPoly primitive(IntPoly p) {
  trim(p);
  if (p.empty()) return p;
  Integer c = content(p);
  if (p.back() < 0) c = -c;
  if (c != 1)
    for (auto& z : p) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), c.get_mpz_t());
  return p;
}

IntPoly derivative(const IntPoly& p) {
  if (p.size() <= 1) return {};
  IntPoly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<unsigned long>(k);
  return d;
}

IntPoly from_rationals(const std::vector<Rational>& c) {
  Integer l = 1;
  for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IntPoly p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i].get_num() * (l / c[i].get_den());
  return primitive(std::move(p));
}

std::optional<IntPoly> exact_div(const IntPoly& a, const IntPoly& b) {
  if (b.empty()) throw std::invalid_argument("division by the zero polynomial");
  if (a.empty()) return IntPoly{};
  const int da = degree(a), db = degree(b);
  if (da < db) return std::nullopt;
  IntPoly r = a;
  IntPoly q(static_cast<std::size_t>(da - db) + 1);
  const Integer& lb = b.back();
  for (int k = da - db; k >= 0; --k) {
    Integer& top = r[static_cast<std::size_t>(k + db)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return std::nullopt;
    Integer t;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= t * b[static_cast<std::size_t>(i)];
    q[static_cast<std::size_t>(k)] = std::move(t);
  }
  for (int i = 0; i < db; ++i)
    if (r[static_cast<std::size_t>(i)] != 0) return std::nullopt;
  return q;
}

IntPoly gcd(const IntPoly& a0, const IntPoly& b0) {
  IntPoly a = primitive(a0), b = primitive(b0);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (degree(a) == 0 || degree(b) == 0) return {Integer(1)};
  // The heuristic gcd is fastest on small inputs; large ones go through word-size primes.
  std::size_t bits = 0;
  for (const auto& z : a) bits = std::max(bits, mpz_sizeinbase(z.get_mpz_t(), 2));
  if (bits * a.size() < 20000) {
    if (auto g = heuristic_gcd(a, b)) return *g;
  }
  return modular_gcd(a, b);
}

bool square_free_mod_prime(const IntPoly& p0) {
  const IntPoly p = primitive(p0);
  if (degree(p) < 1) return true;
  const IntPoly dp = derivative(p);
  PrimeStream primes;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const u64 q = primes.next();
    if (mpz_fdiv_ui(p.back().get_mpz_t(), q) == 0) continue;
    Zp a = reduce(p, q), b = reduce(dp, q);
    if (b.empty()) continue;
    return gcd_mod(std::move(a), std::move(b), q).size() == 1;
  }
  return false;
}

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<IntPoly> square_free_decomposition(const IntPoly& p) {
  if (degree(p) < 1) throw std::invalid_argument("square-free decomposition needs a nonconstant polynomial");
  // Yun's algorithm; all divisions are exact over Z because the divisors are primitive.
  std::vector<IntPoly> out;
  const IntPoly dp = derivative(p);
  IntPoly g = gcd(p, dp);
  IntPoly c = *exact_div(p, g);
  IntPoly d = *exact_div(dp, g);
  for (;;) {
    IntPoly dc = derivative(c);
    IntPoly e(std::max(d.size(), dc.size()));
    for (std::size_t i = 0; i < d.size(); ++i) e[i] += d[i];
    for (std::size_t i = 0; i < dc.size(); ++i) e[i] -= dc[i];
    trim(e);
    if (degree(c) == 0) break;
    IntPoly a = e.empty() ? primitive(c) : gcd(c, e);
    out.push_back(a);
    c = *exact_div(c, a);
    d = e.empty() ? IntPoly{} : *exact_div(e, a);
  }
  while (!out.empty() && degree(out.back()) == 0) out.pop_back();
  return out;
}

int sign_at_dyadic(const IntPoly& p, const Integer& j, unsigned long level) {
  if (p.empty()) return 0;
  // 2^{level d} p(j / 2^level) = sum p_k j^k 2^{level (d - k)}, Horner in homogeneous form.
  const std::size_t d = p.size() - 1;
  Integer acc = p[d];
  Integer term;
  for (std::size_t k = d; k-- > 0;) {
    acc *= j;
    mpz_mul_2exp(term.get_mpz_t(), p[k].get_mpz_t(), level * (d - k));
    acc += term;
  }
  return sgn(acc);
}

int sign_at(const IntPoly& p, const Rational& x) {
  if (p.empty()) return 0;
  const Integer& u = x.get_num();
  const Integer& v = x.get_den();
  const std::size_t d = p.size() - 1;
  Integer acc = p[d];
  Integer vp = v;
  for (std::size_t k = d; k-- > 0;) {
    acc = acc * u + p[k] * vp;
    vp *= v;
  }
  return sgn(acc);
}

int sign_at_infinity(const IntPoly& p, bool positive) {
  if (p.empty()) return 0;
  int s = sgn(p.back());
  if (!positive && degree(p) % 2 == 1) s = -s;
  return s;
}

unsigned long root_bound_log2(const IntPoly& p) {
  // Fujiwara: |z| <= 2 max_k |a_{n-k} / a_n|^{1/k}. With b(x) the bit length,
  // |a_{n-k} / a_n| < 2^(b(a_{n-k}) - b(a_n) + 1), so |z| < 2^(1 + max_k ceil(that / k)).
  const long n = static_cast<long>(p.size()) - 1;
  const long lead_bits = static_cast<long>(mpz_sizeinbase(p.back().get_mpz_t(), 2));
  long best = 0;
  for (long k = 1; k <= n; ++k) {
    const Integer& a = p[static_cast<std::size_t>(n - k)];
    if (a == 0) continue;
    const long diff = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) - lead_bits + 1;
    const long c = diff >= 0 ? (diff + k - 1) / k : -((-diff) / k);
    best = std::max(best, 1 + c);
  }
  return static_cast<unsigned long>(std::max(1L, best));
}

std::vector<IntPoly> sturm_sequence(const IntPoly& p0) {
  std::vector<IntPoly> seq{primitive(p0)};
  IntPoly d = derivative(seq[0]);
  if (d.empty()) return seq;
  seq.push_back(primitive(d));
  while (degree(seq.back()) > 0) {
    int s = 1;
    IntPoly r = pseudo_remainder(seq[seq.size() - 2], seq.back(), s);
    if (r.empty()) break;
    // -rem(a, b) up to a positive factor.
    Integer c = content(r);
    if (s > 0) c = -c;
    for (auto& z : r) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), c.get_mpz_t());
    seq.push_back(std::move(r));
  }
  return seq;
}

namespace {
int variations(const std::vector<int>& signs) {
  int count = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}
}  // namespace

int sign_variations_at_dyadic(const std::vector<IntPoly>& seq, const Integer& j, unsigned long level) {
  std::vector<int> s;
  s.reserve(seq.size());
  for (const auto& p : seq) s.push_back(sign_at_dyadic(p, j, level));
  return variations(s);
}

int sign_variations_at_infinity(const std::vector<IntPoly>& seq, bool positive) {
  std::vector<int> s;
  s.reserve(seq.size());
  for (const auto& p : seq) s.push_back(sign_at_infinity(p, positive));
  return variations(s);
}

int sturm_real_root_count(const std::vector<IntPoly>& seq) {
  return sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true);
}

}  // namespace polarlab::detail
