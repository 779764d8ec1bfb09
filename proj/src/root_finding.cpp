#include "root_finding.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace polarlab::detail {

Rational Dyadic::value() const {
  Integer den;
  mpz_setbit(den.get_mpz_t(), level);
  Rational q(j, den);
  q.canonicalize();
  return q;
}

Dyadic Dyadic::floor_of(const Rational& x, unsigned long level) {
  Integer num;
  mpz_mul_2exp(num.get_mpz_t(), x.get_num_mpz_t(), level);
  Dyadic out;
  mpz_fdiv_q(out.j.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
  out.level = level;
  return out;
}

int sign_at(const IntPoly& p, const Dyadic& x) { return sign_at_dyadic(p, x.j, x.level); }

namespace {

class Mp {
 public:
  explicit Mp(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); }
  Mp(const Mp& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mp& operator=(const Mp& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

Rational to_rational(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0;
  Integer m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  Rational q;
  if (e >= 0) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    q = Rational(m);
  } else {
    Integer den;
    mpz_setbit(den.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    q = Rational(m, den);
    q.canonicalize();
  }
  return q;
}

// Horner evaluation of p, p' (and optionally p'') with a running bound on sum |a_k| |x|^k.
class Evaluator {
 public:
  explicit Evaluator(const IntPoly& p) : p_(p), d_(degree(p)) {
    abs_.reserve(p.size());
    for (const auto& c : p) {
      Mp m(64);
      mpfr_set_z(m.get(), c.get_mpz_t(), MPFR_RNDU);
      mpfr_abs(m.get(), m.get(), MPFR_RNDU);
      abs_.push_back(m);
    }
  }

  void set_precision(mpfr_prec_t prec) {
    prec_ = prec;
    a_.clear();
    for (const auto& c : p_) {
      Mp m(prec);
      mpfr_set_z(m.get(), c.get_mpz_t(), MPFR_RNDN);
      a_.push_back(m);
    }
    for (Mp* m : {&pv_, &dv_, &ddv_, &tmp_}) mpfr_set_prec(m->get(), prec);
  }
  mpfr_prec_t precision() const { return prec_; }

  void eval(mpfr_srcptr x, bool second) {
    mpfr_set(pv_.get(), a_[static_cast<std::size_t>(d_)].get(), MPFR_RNDN);
    mpfr_set_zero(dv_.get(), 1);
    mpfr_set_zero(ddv_.get(), 1);
    mpfr_abs(ax_.get(), x, MPFR_RNDU);
    mpfr_set(bound_.get(), abs_[static_cast<std::size_t>(d_)].get(), MPFR_RNDU);
    for (int k = d_ - 1; k >= 0; --k) {
      if (second) mpfr_fma(ddv_.get(), ddv_.get(), x, dv_.get(), MPFR_RNDN);
      mpfr_fma(dv_.get(), dv_.get(), x, pv_.get(), MPFR_RNDN);
      mpfr_fma(pv_.get(), pv_.get(), x, a_[static_cast<std::size_t>(k)].get(), MPFR_RNDN);
      mpfr_fma(bound_.get(), bound_.get(), ax_.get(), abs_[static_cast<std::size_t>(k)].get(), MPFR_RNDU);
    }
    if (second) mpfr_mul_2ui(ddv_.get(), ddv_.get(), 1, MPFR_RNDN);
    // Rounding error of the value is at most (2d + 2) 2^-prec sum |a_k| |x|^k.
    mpfr_mul_ui(bound_.get(), bound_.get(), static_cast<unsigned long>(2 * d_ + 2), MPFR_RNDU);
    mpfr_mul_2si(bound_.get(), bound_.get(), -static_cast<long>(prec_), MPFR_RNDU);
  }

  bool value_is_zero() const { return mpfr_zero_p(pv_.get()); }
  bool rounding_dominated() const { return mpfr_cmpabs(pv_.get(), bound_.get()) <= 0; }
  /// p / p' as a double; NaN when p' vanishes.
  double newton_ratio() {
    if (mpfr_zero_p(dv_.get())) return std::numeric_limits<double>::quiet_NaN();
    mpfr_div(tmp_.get(), pv_.get(), dv_.get(), MPFR_RNDN);
    return mpfr_get_d(tmp_.get(), MPFR_RNDN);
  }
  /// p' / p and p'' / p as doubles.
  std::pair<double, double> log_derivatives() {
    mpfr_div(tmp_.get(), dv_.get(), pv_.get(), MPFR_RNDN);
    const double g = mpfr_get_d(tmp_.get(), MPFR_RNDN);
    mpfr_div(tmp_.get(), ddv_.get(), pv_.get(), MPFR_RNDN);
    return {g, mpfr_get_d(tmp_.get(), MPFR_RNDN)};
  }
  /// Width of the region where the computed value is pure rounding noise.
  double uncertainty() {
    if (mpfr_zero_p(dv_.get())) return std::numeric_limits<double>::infinity();
    Mp t(64);
    mpfr_div(t.get(), bound_.get(), dv_.get(), MPFR_RNDU);
    return std::fabs(mpfr_get_d(t.get(), MPFR_RNDU));
  }

 private:
  const IntPoly& p_;
  int d_;
  mpfr_prec_t prec_ = 64;
  std::vector<Mp> a_, abs_;
  Mp pv_, dv_, ddv_, tmp_, ax_{64}, bound_{64};
};

// Laguerre's method from outside the root set; monotone for real-rooted polynomials.
void laguerre_extreme(Evaluator& ev, int d, Mp& x) {
  const double n = d;
  for (int it = 0; it < 200; ++it) {
    ev.eval(x.get(), true);
    if (ev.value_is_zero() || ev.rounding_dominated()) return;
    auto [g, h2] = ev.log_derivatives();
    const double h = g * g - h2;
    const double disc = std::sqrt(std::max(0.0, (n - 1) * (n * h - g * g)));
    const double den = g >= 0 ? g + disc : g - disc;
    if (!std::isfinite(den) || den == 0) return;
    const double step = n / den;
    mpfr_sub_d(x.get(), x.get(), step, MPFR_RNDN);
    const double xd = mpfr_get_d(x.get(), MPFR_RNDN);
    if (std::fabs(step) <= 0x1p-45 * std::max(std::fabs(xd), 0x1p-900)) return;
  }
}

enum class AberthStatus { Converged, NeedPrecision, Stalled };

AberthStatus aberth(Evaluator& ev, std::vector<Mp>& z, double scale, int max_iter) {
  const std::size_t d = z.size();
  std::vector<double> zd(d);
  for (std::size_t i = 0; i < d; ++i) zd[i] = mpfr_get_d(z[i].get(), MPFR_RNDN);
  std::vector<char> done(d, 0);
  bool need_precision = false;
  const double tiny = scale * 0x1p-60;
  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      ev.eval(z[i].get(), false);
      if (ev.value_is_zero()) {
        done[i] = 1;
        continue;
      }
      double nearest = std::numeric_limits<double>::infinity();
      double s = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        const double diff = zd[i] - zd[j];
        nearest = std::min(nearest, std::fabs(diff));
        if (diff != 0) s += 1.0 / diff;
      }
      if (ev.rounding_dominated()) {
        if (ev.uncertainty() > 1e-3 * nearest) need_precision = true;
        done[i] = 1;
        continue;
      }
      const double ratio = ev.newton_ratio();
      if (!std::isfinite(ratio)) {
        mpfr_add_d(z[i].get(), z[i].get(), std::max(tiny, 1e-7 * nearest), MPFR_RNDN);
        zd[i] = mpfr_get_d(z[i].get(), MPFR_RNDN);
        all_done = false;
        continue;
      }
      double w = ratio / (1.0 - ratio * s);
      if (!std::isfinite(w)) w = ratio;
      mpfr_sub_d(z[i].get(), z[i].get(), w, MPFR_RNDN);
      if (!mpfr_number_p(z[i].get())) return AberthStatus::Stalled;
      zd[i] = mpfr_get_d(z[i].get(), MPFR_RNDN);
      if (std::fabs(w) <= 0x1p-50 * std::max(std::fabs(zd[i]), tiny)) done[i] = 1;
      else all_done = false;
    }
    if (all_done) return need_precision ? AberthStatus::NeedPrecision : AberthStatus::Converged;
  }
  return need_precision ? AberthStatus::NeedPrecision : AberthStatus::Stalled;
}

// Dyadic strictly between a < b, with few bits.
Dyadic dyadic_between(const Rational& a, const Rational& b) {
  const Rational gap = b - a;
  const Rational mid = (a + b) / 2;
  long m = static_cast<long>(mpz_sizeinbase(gap.get_den_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(gap.get_num_mpz_t(), 2));
  m = std::max(0L, m);
  for (;;) {
    Integer scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), gap.get_num_mpz_t(), static_cast<mp_bitcnt_t>(m));
    if (scaled >= 4 * gap.get_den()) break;  // 2^-m <= gap / 4
    ++m;
  }
  return Dyadic::floor_of(mid, static_cast<unsigned long>(m));
}

bool certify(const IntPoly& p, std::vector<Rational> approx, unsigned long bound_log2, Isolation& out) {
  const std::size_t d = approx.size();
  std::sort(approx.begin(), approx.end());
  for (std::size_t i = 1; i < d; ++i)
    if (approx[i - 1] == approx[i]) return false;
  std::vector<Dyadic> sep(d + 1);
  Integer big;
  mpz_setbit(big.get_mpz_t(), bound_log2);
  sep[0] = Dyadic{Integer(-big), 0};
  sep[d] = Dyadic{big, 0};
  if (approx.front() <= sep[0].value() || approx.back() >= sep[d].value()) return false;
  for (std::size_t i = 1; i < d; ++i) sep[i] = dyadic_between(approx[i - 1], approx[i]);

  std::vector<int> sg(d + 1);
  int expected = sign_at_infinity(p, false);
  for (std::size_t i = 0; i <= d; ++i) {
    sg[i] = sign_at(p, sep[i]);
    if (sg[i] != expected) return false;
    expected = -expected;
  }
  out.intervals.clear();
  for (std::size_t i = 0; i < d; ++i) out.intervals.push_back({sep[i], sep[i + 1], sg[i], approx[i]});
  out.real_count = static_cast<int>(d);
  out.certified_by_approximation = true;
  return true;
}

Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
  const unsigned long level = std::max(a.level, b.level) + 1;
  Integer ja = a.j, jb = b.j;
  mpz_mul_2exp(ja.get_mpz_t(), ja.get_mpz_t(), level - a.level);
  mpz_mul_2exp(jb.get_mpz_t(), jb.get_mpz_t(), level - b.level);
  Integer s = ja + jb;
  Dyadic m{s / 2, level};
  if (mpz_odd_p(s.get_mpz_t())) {
    // (ja + jb) odd: use level + 1.
    m = Dyadic{s, level + 1};
  }
  return m;
}

bool sturm_isolate(const IntPoly& p, Isolation& out) {
  const auto seq = sturm_sequence(p);
  out.real_count = sturm_real_root_count(seq);
  if (out.real_count != out.degree) return false;

  const unsigned long k = root_bound_log2(p);
  Integer big;
  mpz_setbit(big.get_mpz_t(), k);
  struct Cell {
    Dyadic a, b;
    int va, vb;
  };
  Dyadic lo{Integer(-big), 0}, hi{big, 0};
  std::vector<Cell> stack{{lo, hi, sign_variations_at_dyadic(seq, lo.j, 0), sign_variations_at_dyadic(seq, hi.j, 0)}};
  std::vector<IsolatingInterval> found;
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const int count = c.va - c.vb;
    if (count == 0) continue;
    if (count == 1) {
      const Rational approx = (c.a.value() + c.b.value()) / 2;
      found.push_back({c.a, c.b, sign_at(p, c.a), approx});
      continue;
    }
    Dyadic m = midpoint(c.a, c.b);
    // Keep split points off the roots so every endpoint has a nonzero sign.
    for (int attempt = 0; sign_at(p, m) == 0; ++attempt) m = midpoint(attempt % 2 ? c.a : c.b, m);
    const int vm = sign_variations_at_dyadic(seq, m.j, m.level);
    stack.push_back({c.a, m, c.va, vm});
    stack.push_back({m, c.b, vm, c.vb});
  }
  std::sort(found.begin(), found.end(),
            [](const IsolatingInterval& x, const IsolatingInterval& y) { return x.approx < y.approx; });
  out.intervals = std::move(found);
  out.certified_by_approximation = false;
  return true;
}

}  // namespace

int sturm_count(const IntPoly& p) { return sturm_real_root_count(sturm_sequence(p)); }

bool isolate_by_approximation(const IntPoly& p, Isolation& out) {
  out.degree = degree(p);
  if (out.degree < 1) throw std::invalid_argument("isolation needs a nonconstant polynomial");
  const unsigned long bound_log2 = root_bound_log2(p);
  if (out.degree == 1) {
    Rational r(-p[0], p[1]);
    r.canonicalize();
    return certify(p, {r}, bound_log2, out);
  }

  const int d = out.degree;
  Evaluator ev(p);
  mpfr_prec_t prec = std::max<mpfr_prec_t>(128, 2 * d);
  ev.set_precision(prec);

  // Initial points: Chebyshev nodes between the extreme roots located by Laguerre's method.
  Mp lo(prec), hi(prec);
  mpfr_set_ui_2exp(hi.get(), 1, static_cast<mpfr_exp_t>(bound_log2), MPFR_RNDN);
  mpfr_neg(lo.get(), hi.get(), MPFR_RNDN);
  laguerre_extreme(ev, d, hi);
  laguerre_extreme(ev, d, lo);
  double a = mpfr_get_d(lo.get(), MPFR_RNDN), b = mpfr_get_d(hi.get(), MPFR_RNDN);
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  if (!(a < b)) std::swap(a, b);
  if (!(a < b)) {
    a -= 1;
    b += 1;
  }
  const double scale = std::max({std::fabs(a), std::fabs(b), 0x1p-900});
  std::vector<Mp> z;
  z.reserve(static_cast<std::size_t>(d));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < d; ++i) {
    Mp zi(prec);
    const double c = std::cos(pi * (2.0 * (d - 1 - i) + 1.0) / (2.0 * d));
    mpfr_set_d(zi.get(), 0.5 * (a + b) + 0.5 * (b - a) * c, MPFR_RNDN);
    z.push_back(zi);
  }

  int converged_failures = 0;
  for (;;) {
    const AberthStatus status = aberth(ev, z, scale, 400);
    if (status == AberthStatus::Stalled) return false;
    std::vector<Rational> approx;
    approx.reserve(z.size());
    for (const auto& zi : z) approx.push_back(to_rational(zi.get()));
    if (certify(p, approx, bound_log2, out)) return true;
    if (status == AberthStatus::Converged && ++converged_failures > 1) return false;
    if (prec >= (1 << 16)) return false;
    prec *= 2;
    ev.set_precision(prec);
    for (auto& zi : z) mpfr_prec_round(zi.get(), prec, MPFR_RNDN);
  }
}

Isolation isolate_square_free(const IntPoly& p) {
  Isolation out;
  if (isolate_by_approximation(p, out)) return out;
  out.degree = degree(p);
  sturm_isolate(p, out);
  return out;
}

}  // namespace polarlab::detail
