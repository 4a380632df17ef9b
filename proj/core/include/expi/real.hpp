#pragma once

#include <mpfr.h>

#include <compare>
#include <gmpxx.h>
#include <string>
#include <string_view>

namespace expi {

using BigInt = mpz_class;
using Rational = mpq_class;

// Precision is tracked in decimal digits. The binary precision backing a
// value of d digits is ceil(d * log2(10)) plus a few spare bits.
long digits_to_bits(long digits);
long bits_to_digits(long bits);

/// Arbitrary-precision real with an explicit decimal-digit precision.
///
/// Binary operations produce a result carrying the smaller of the two input
/// precisions; each rounding step costs at most one unit in the last binary
/// place. Operations with machine integers and BigInt keep the precision of
/// the Real operand.
class Real {
 public:
  static constexpr long kDefaultDigits = 30;

  Real() : Real(kDefaultDigits) {}
  explicit Real(long digits);
  Real(long value, long digits);
  Real(const BigInt& value, long digits);
  Real(const Rational& value, long digits);

  // Accepts plain decimal notation ("1.25", "-.5", "3e-7").
  static Real parse(std::string_view text, long digits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  long digits() const noexcept { return digits_; }
  Real rounded(long digits) const;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  int sign() const noexcept { return mpfr_sgn(value_); }
  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  // log10|x|, -infinity for zero. Cheap; used for error bookkeeping.
  double log10_abs() const;
  BigInt floor() const;
  BigInt nearest() const;

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);
  Real& operator*=(const BigInt& rhs);
  Real& operator+=(const BigInt& rhs);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, long b);
  friend bool operator==(const Real& a, long b);

 private:
  mpfr_t value_;
  long digits_;
};

inline Real operator+(Real a, long b) { return a += b; }
inline Real operator+(long a, Real b) { return b += a; }
inline Real operator-(Real a, long b) { return a -= b; }
inline Real operator-(long a, const Real& b) { return -b + a; }
inline Real operator*(Real a, long b) { return a *= b; }
inline Real operator*(long a, Real b) { return b *= a; }
inline Real operator/(Real a, long b) { return a /= b; }
inline Real operator/(long a, const Real& b) { return Real(a, b.digits()) / b; }
inline Real operator*(Real a, const BigInt& b) { return a *= b; }
inline Real operator*(const BigInt& a, Real b) { return b *= a; }
inline Real operator+(Real a, const BigInt& b) { return a += b; }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real nth_root(const Real& x, unsigned long n);
Real pow(const Real& x, long n);
// x^(p/q) for x > 0.
Real pow(const Real& x, const Rational& e);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

// Decimal rendering. Both truncate toward zero, never round.
//
// to_significant keeps `sig` significant digits in positional notation
// ("0.00123", "23.14"); values whose magnitude is outside 1e-30..1e60 fall
// back to "d.ddd...e-NN".
std::string to_significant(const Real& x, long sig);
std::string to_fixed(const Real& x, long fraction_digits);

}  // namespace expi
