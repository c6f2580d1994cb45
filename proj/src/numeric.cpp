#include "recurlab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <utility>

namespace recurlab {

namespace {
std::atomic<int> g_precision{128};
}

int precision_bits() { return g_precision.load(std::memory_order_relaxed); }

void set_precision_bits(int bits) {
  if (bits < 64) throw Error("precision must be at least 64 bits");
  if (bits > 1 << 20) throw Error("precision too large");
  g_precision.store(bits, std::memory_order_relaxed);
}

PrecisionGuard::PrecisionGuard(int bits) : saved_(precision_bits()) { set_precision_bits(bits); }
PrecisionGuard::~PrecisionGuard() { g_precision.store(saved_, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

BigInt floor_of(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_of(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational floor_frac(const Rational& q) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return make_rational(r, q.get_den());
}

Rational dist_to_int(const Rational& q) {
  Rational f = floor_frac(q);
  Rational g = 1 - f;
  return f <= g ? f : g;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigInt parse_bigint(const std::string& text) {
  BigInt z;
  if (text.empty() || z.set_str(text, 10) != 0) throw Error("invalid integer: '" + text + "'");
  return z;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den <= 0) throw Error("invalid rational denominator: '" + text + "'");
  return make_rational(num, den);
}

BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Rational dyadic_down(double x, int bits) {
  Rational q(x);
  BigInt scale = pow2(static_cast<unsigned long>(bits));
  return make_rational(floor_of(q * scale), scale);
}

Rational dyadic_up(double x, int bits) {
  Rational q(x);
  BigInt scale = pow2(static_cast<unsigned long>(bits));
  return make_rational(ceil_of(q * scale), scale);
}

// ---------------------------------------------------------------------------

mpfr_rnd_t to_mpfr(Round r) {
  switch (r) {
    case Round::Down:
      return MPFR_RNDD;
    case Round::Up:
      return MPFR_RNDU;
    case Round::Nearest:
      break;
  }
  return MPFR_RNDN;
}

Real::Real() {
  mpfr_init2(value_, precision_bits());
  mpfr_set_zero(value_, 1);
}

Real::Real(int bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_double(double x) {
  Real r(std::max(precision_bits(), 64));
  mpfr_set_d(r.value_, x, MPFR_RNDN);
  return r;
}

Real Real::from_rational(const Rational& q, Round rnd) {
  Real r;
  mpfr_set_q(r.value_, q.get_mpq_t(), to_mpfr(rnd));
  return r;
}

Real Real::from_bigint(const BigInt& z, Round rnd) {
  Real r;
  mpfr_set_z(r.value_, z.get_mpz_t(), to_mpfr(rnd));
  return r;
}

Real Real::pi(Round rnd) {
  Real r;
  mpfr_const_pi(r.value_, to_mpfr(rnd));
  return r;
}

Real Real::zero() { return Real(); }

double Real::to_double(Round r) const { return mpfr_get_d(value_, to_mpfr(r)); }

Rational Real::to_rational() const {
  if (mpfr_zero_p(value_)) return Rational(0);
  if (!mpfr_number_p(value_)) throw Error("non-finite value cannot be converted to a rational");
  BigInt m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), value_);
  if (e >= 0) return Rational(m * pow2(static_cast<unsigned long>(e)));
  return make_rational(m, pow2(static_cast<unsigned long>(-e)));
}

std::string Real::to_decimal(Round r, int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*e", digits, to_mpfr(r), value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

Real add(const Real& a, const Real& b, Round r) {
  Real out;
  mpfr_add(out.get(), a.get(), b.get(), to_mpfr(r));
  return out;
}

Real sub(const Real& a, const Real& b, Round r) {
  Real out;
  mpfr_sub(out.get(), a.get(), b.get(), to_mpfr(r));
  return out;
}

Real mul(const Real& a, const Real& b, Round r) {
  Real out;
  mpfr_mul(out.get(), a.get(), b.get(), to_mpfr(r));
  return out;
}

Real div(const Real& a, const Real& b, Round r) {
  Real out;
  mpfr_div(out.get(), a.get(), b.get(), to_mpfr(r));
  return out;
}

Real sqrt(const Real& a, Round r) {
  Real out;
  mpfr_sqrt(out.get(), a.get(), to_mpfr(r));
  return out;
}

Real neg(const Real& a) {
  Real out(static_cast<int>(mpfr_get_prec(a.get())));
  mpfr_neg(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real abs(const Real& a) {
  Real out(static_cast<int>(mpfr_get_prec(a.get())));
  mpfr_abs(out.get(), a.get(), MPFR_RNDN);
  return out;
}

const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------

Interval::Interval() = default;

Interval::Interval(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw Error("interval with lo > hi");
}

Interval Interval::exact(const Rational& q) {
  return Interval(Real::from_rational(q, Round::Down), Real::from_rational(q, Round::Up));
}

Interval Interval::point(double x) {
  Real r = Real::from_double(x);
  return Interval(r, r);
}

Interval Interval::pi() { return Interval(Real::pi(Round::Down), Real::pi(Round::Up)); }

double Interval::mid_d() const { return 0.5 * (lo_.to_double() + hi_.to_double()); }

double Interval::width_d() const { return sub(hi_, lo_, Round::Up).to_double(Round::Up); }

bool Interval::contains(const Interval& other) const {
  return lo_ <= other.lo_ && other.hi_ <= hi_;
}

bool Interval::contains(double x) const {
  Real r = Real::from_double(x);
  return lo_ <= r && r <= hi_;
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(add(a.lo_, b.lo_, Round::Down), add(a.hi_, b.hi_, Round::Up));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(sub(a.lo_, b.hi_, Round::Down), sub(a.hi_, b.lo_, Round::Up));
}

Interval operator-(const Interval& a) { return Interval(neg(a.hi_), neg(a.lo_)); }

Interval operator*(const Interval& a, const Interval& b) {
  const Real* xs[2] = {&a.lo_, &a.hi_};
  const Real* ys[2] = {&b.lo_, &b.hi_};
  Real lo, hi;
  bool first = true;
  for (const Real* x : xs) {
    for (const Real* y : ys) {
      Real d = mul(*x, *y, Round::Down);
      Real u = mul(*x, *y, Round::Up);
      if (first || d < lo) lo = d;
      if (first || hi < u) hi = u;
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo_.sign() <= 0 && b.hi_.sign() >= 0) throw Error("interval division by a range containing 0");
  const Real* xs[2] = {&a.lo_, &a.hi_};
  const Real* ys[2] = {&b.lo_, &b.hi_};
  Real lo, hi;
  bool first = true;
  for (const Real* x : xs) {
    for (const Real* y : ys) {
      Real d = div(*x, *y, Round::Down);
      Real u = div(*x, *y, Round::Up);
      if (first || d < lo) lo = d;
      if (first || hi < u) hi = u;
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval sqrt(const Interval& a) {
  if (a.hi().sign() < 0) throw Error("sqrt of a negative interval");
  Real lo = a.lo().sign() <= 0 ? Real::zero() : sqrt(a.lo(), Round::Down);
  return Interval(std::move(lo), sqrt(a.hi(), Round::Up));
}

Interval abs(const Interval& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return -a;
  Real m = neg(a.lo());
  return Interval(Real::zero(), max(m, a.hi()));
}

Interval sqr(const Interval& a) {
  Interval b = abs(a);
  return Interval(mul(b.lo(), b.lo(), Round::Down), mul(b.hi(), b.hi(), Round::Up));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(min(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(max(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(min(a.lo(), b.lo()), min(a.hi(), b.hi()));
}

// ---------------------------------------------------------------------------

namespace {

const Rational kQuarter(1, 4);
const Rational kTwelfth(1, 12);
const Rational kSixth(1, 6);

// 2*pi*g rounded in the given direction.
Real two_pi_times(const Rational& g, Round r) {
  Real p = Real::pi(r);
  Real two_pi = mul(p, Real::from_rational(Rational(2), r), r);
  return mul(two_pi, Real::from_rational(g, r), r);
}

bool special_sin(const Rational& g, Real& out) {
  if (g == 0) {
    out = Real::zero();
    return true;
  }
  if (g == kQuarter) {
    out = Real::from_rational(Rational(1), Round::Nearest);
    return true;
  }
  if (g == kTwelfth) {
    out = Real::from_rational(Rational(1, 2), Round::Nearest);
    return true;
  }
  return false;
}

bool special_cos(const Rational& g, Real& out) {
  if (g == 0) {
    out = Real::from_rational(Rational(1), Round::Nearest);
    return true;
  }
  if (g == kQuarter) {
    out = Real::zero();
    return true;
  }
  if (g == kSixth) {
    out = Real::from_rational(Rational(1, 2), Round::Nearest);
    return true;
  }
  return false;
}

}  // namespace

SinCos sin_cos_2pi_quarter(const Rational& g_lo, const Rational& g_hi) {
  if (g_lo < 0 || g_hi < g_lo || g_hi > kQuarter) throw Error("sin_cos_2pi_quarter: range outside [0, 1/4]");
  const Real one = Real::from_rational(Rational(1), Round::Nearest);
  Real half_pi_lo = div(Real::pi(Round::Down), Real::from_rational(Rational(2), Round::Nearest), Round::Down);

  // sin is increasing and cos decreasing on [0, pi/2].
  Real s_lo, s_hi, c_lo, c_hi;
  if (!special_sin(g_lo, s_lo)) {
    Real x = two_pi_times(g_lo, Round::Down);
    mpfr_sin(s_lo.get(), x.get(), MPFR_RNDD);
    if (s_lo.sign() < 0) s_lo = Real::zero();
  }
  if (!special_sin(g_hi, s_hi)) {
    Real x = two_pi_times(g_hi, Round::Up);
    if (x >= half_pi_lo) {
      s_hi = one;
    } else {
      mpfr_sin(s_hi.get(), x.get(), MPFR_RNDU);
      if (one < s_hi) s_hi = one;
    }
  }
  if (!special_cos(g_hi, c_lo)) {
    Real x = two_pi_times(g_hi, Round::Up);
    mpfr_cos(c_lo.get(), x.get(), MPFR_RNDD);
    if (c_lo.sign() < 0) c_lo = Real::zero();
  }
  if (!special_cos(g_lo, c_hi)) {
    Real x = two_pi_times(g_lo, Round::Down);
    mpfr_cos(c_hi.get(), x.get(), MPFR_RNDU);
    if (one < c_hi) c_hi = one;
  }
  return SinCos{Interval(std::move(s_lo), std::move(s_hi)), Interval(std::move(c_lo), std::move(c_hi))};
}

Interval two_sin_pi(const Rational& d_lo, const Rational& d_hi) {
  if (d_lo < 0 || d_hi < d_lo || d_hi > Rational(1, 2)) throw Error("two_sin_pi: range outside [0, 1/2]");
  if (d_hi == 0) return Interval::zero();
  SinCos sc = sin_cos_2pi_quarter(d_lo / 2, d_hi / 2);
  return Interval::exact(Rational(2)) * sc.sin;
}

ComplexInterval ComplexInterval::exact(const Rational& re, const Rational& im) {
  return ComplexInterval{Interval::exact(re), Interval::exact(im)};
}

ComplexInterval ComplexInterval::unit_root(const Rational& f) {
  Rational x = floor_frac(f);
  BigInt q = floor_of(x * 4);
  Rational g = x - Rational(q) / 4;
  SinCos sc = sin_cos_2pi_quarter(g, g);
  switch (q.get_si()) {
    case 0:
      return ComplexInterval{sc.cos, sc.sin};
    case 1:
      return ComplexInterval{-sc.sin, sc.cos};
    case 2:
      return ComplexInterval{-sc.cos, -sc.sin};
    default:
      return ComplexInterval{sc.sin, -sc.cos};
  }
}

bool ComplexInterval::is_exact_one() const {
  const Real one = Real::from_rational(Rational(1), Round::Nearest);
  return re.lo() == one && re.hi() == one && im.is_exact_zero();
}

Interval ComplexInterval::abs() const { return sqrt(sqr(re) + sqr(im)); }

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return ComplexInterval{a.re + b.re, a.im + b.im};
}

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
  return ComplexInterval{a.re - b.re, a.im - b.im};
}

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return ComplexInterval{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator*(const Interval& s, const ComplexInterval& b) {
  return ComplexInterval{s * b.re, s * b.im};
}

}  // namespace recurlab
