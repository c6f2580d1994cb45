#pragma once

// Exact integers and rationals (GMP), plus certified real and complex
// enclosures built on MPFR with directed rounding.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace recurlab {

using BigInt = mpz_class;
using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Working precision (bits) for every certified evaluation. Defaults to 128.
int precision_bits();
void set_precision_bits(int bits);

/// Scoped override of the working precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  int saved_;
};

// ---------------------------------------------------------------------------
// Rational helpers

Rational make_rational(const BigInt& num, const BigInt& den);
Rational floor_frac(const Rational& q);  // q - floor(q), in [0,1)
BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);
/// Distance to the nearest integer, in [0, 1/2].
Rational dist_to_int(const Rational& q);
std::string to_string(const Rational& q);  // "p/q", or "p" when q == 1
Rational parse_rational(const std::string& text);
BigInt parse_bigint(const std::string& text);
BigInt pow2(unsigned long e);
BigInt lcm(const BigInt& a, const BigInt& b);
/// Dyadic rational with `bits` fractional bits, rounded toward -inf / +inf.
Rational dyadic_down(double x, int bits);
Rational dyadic_up(double x, int bits);

// ---------------------------------------------------------------------------
// Real: RAII mpfr_t

enum class Round { Down, Up, Nearest };
mpfr_rnd_t to_mpfr(Round r);

class Real {
 public:
  Real();
  explicit Real(int bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from_double(double x);
  static Real from_rational(const Rational& q, Round r);
  static Real from_bigint(const BigInt& z, Round r);
  static Real pi(Round r);
  static Real zero();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double(Round r = Round::Nearest) const;
  Rational to_rational() const;  // exact
  /// Scientific decimal string rounded in the given direction.
  std::string to_decimal(Round r, int digits = 40) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, const Real& b);

 private:
  mpfr_t value_;
};

Real add(const Real& a, const Real& b, Round r);
Real sub(const Real& a, const Real& b, Round r);
Real mul(const Real& a, const Real& b, Round r);
Real div(const Real& a, const Real& b, Round r);
Real sqrt(const Real& a, Round r);
Real neg(const Real& a);
Real abs(const Real& a);
const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

// ---------------------------------------------------------------------------
// Interval: closed enclosure [lo, hi] with outward rounding.

class Interval {
 public:
  Interval();
  Interval(Real lo, Real hi);
  static Interval exact(const Rational& q);
  static Interval point(double x);  // exact double
  static Interval pi();
  static Interval zero() { return exact(Rational(0)); }

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  double lo_d() const { return lo_.to_double(Round::Down); }
  double hi_d() const { return hi_.to_double(Round::Up); }
  double mid_d() const;
  double width_d() const;
  bool is_exact_zero() const { return lo_.is_zero() && hi_.is_zero(); }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const Interval& other) const;
  bool contains(double x) const;

  /// Certain comparisons: true only when the whole enclosure satisfies them.
  bool certainly_below(const Interval& other) const { return hi_ < other.lo_; }
  bool certainly_at_most(const Interval& other) const { return hi_ <= other.lo_; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);

 private:
  Real lo_;
  Real hi_;
};

Interval sqrt(const Interval& a);
Interval sqr(const Interval& a);
Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
/// Elementwise max: encloses max(x, y) for x in a, y in b.
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

/// Encloses {sin(2 pi g), cos(2 pi g)} for g in [g_lo, g_hi] with
/// 0 <= g_lo <= g_hi <= 1/4.
struct SinCos {
  Interval sin;
  Interval cos;
};
SinCos sin_cos_2pi_quarter(const Rational& g_lo, const Rational& g_hi);

/// Encloses 2 sin(pi d) for d in [d_lo, d_hi] subset of [0, 1/2]. Exact zero
/// when the range is {0}.
Interval two_sin_pi(const Rational& d_lo, const Rational& d_hi);

// ---------------------------------------------------------------------------
// Complex rectangle enclosure.

struct ComplexInterval {
  Interval re;
  Interval im;

  static ComplexInterval exact(const Rational& re, const Rational& im = Rational(0));
  /// e^{2 pi i f} for exact rational f; exact when 4f is an integer.
  static ComplexInterval unit_root(const Rational& f);

  bool is_exact_one() const;
  Interval abs() const;

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator*(const Interval& s, const ComplexInterval& b);
};

}  // namespace recurlab
