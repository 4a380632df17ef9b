#include "expi/real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "expi/error.hpp"

namespace expi {

namespace {

constexpr double kLog2Of10 = 3.3219280948873623478703194294894;

void require_digits(long digits) {
  if (digits < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "precision must be at least one decimal digit");
  }
}

}  // namespace

long digits_to_bits(long digits) {
  return static_cast<long>(std::ceil(static_cast<double>(digits) * kLog2Of10)) + 8;
}

long bits_to_digits(long bits) {
  return std::max(1L, static_cast<long>(std::floor(static_cast<double>(bits - 8) / kLog2Of10)));
}

Real::Real(long digits) : digits_(digits) {
  require_digits(digits);
  mpfr_init2(value_, digits_to_bits(digits));
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, long digits) : Real(digits) {
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const BigInt& value, long digits) : Real(digits) {
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rational& value, long digits) : Real(digits) {
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real Real::parse(std::string_view text, long digits) {
  std::string s(text);
  // Trim surrounding whitespace; mpfr rejects it at the end.
  auto first = s.find_first_not_of(" \t\r\n");
  auto last = s.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "empty decimal literal");
  }
  s = s.substr(first, last - first + 1);
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' ||
              c == 'e' || c == 'E';
    if (!ok) {
      throw Error(ErrorKind::InvalidArgument, "not a decimal literal: " + s);
    }
  }
  Real r(digits);
  if (mpfr_set_str(r.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw Error(ErrorKind::InvalidArgument, "not a decimal literal: " + s);
  }
  return r;
}

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  // Leave `other` holding a valid minimal value so its destructor is safe.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
    digits_ = other.digits_;
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
    std::swap(digits_, other.digits_);
  }
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::rounded(long digits) const {
  Real r(digits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

double Real::log10_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  double mantissa = mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
  return std::log10(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log10(2.0);
}

BigInt Real::floor() const {
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDD);
  return out;
}

BigInt Real::nearest() const {
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDN);
  return out;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& rhs) {
  *this = *this + rhs;
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  *this = *this - rhs;
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  *this = *this * rhs;
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  *this = *this / rhs;
  return *this;
}
Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const BigInt& rhs) {
  mpfr_mul_z(value_, value_, rhs.get_mpz_t(), MPFR_RNDN);
  return *this;
}
Real& Real::operator+=(const BigInt& rhs) {
  mpfr_add_z(value_, value_, rhs.get_mpz_t(), MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(std::min(a.digits_, b.digits_));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(std::min(a.digits_, b.digits_));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(std::min(a.digits_, b.digits_));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(std::min(a.digits_, b.digits_));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.value_, b);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}
bool operator==(const Real& a, long b) {
  return !mpfr_nan_p(a.value_) && mpfr_cmp_si(a.value_, b) == 0;
}

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  if (x.sign() < 0) throw Error(ErrorKind::InvalidArgument, "sqrt of a negative number");
  Real r(x.digits());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x.digits());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  if (x.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "log of a non-positive number");
  Real r(x.digits());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sin(const Real& x) {
  Real r(x.digits());
  mpfr_sin(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real nth_root(const Real& x, unsigned long n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "zeroth root");
  if (x.sign() < 0 && n % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "even root of a negative number");
  }
  Real r(x.digits());
  mpfr_rootn_ui(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x.digits());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Rational& e) {
  Rational c = e;
  c.canonicalize();
  if (c.get_den() == 1) return pow(x, c.get_num().get_si());
  if (x.sign() <= 0) {
    throw Error(ErrorKind::InvalidArgument, "fractional power of a non-positive number");
  }
  // x^(p/q) = exp(p/q * log x); one extra rounding versus rootn+pow, but
  // stays accurate for large p.
  Real guard = x.rounded(x.digits() + 10);
  Real l = log(guard);
  mpfr_mul_q(l.get(), l.get(), c.get_mpq_t(), MPFR_RNDN);
  return exp(l).rounded(x.digits());
}

Real min(const Real& a, const Real& b) { return (b < a) ? b : a; }
Real max(const Real& a, const Real& b) { return (a < b) ? b : a; }

namespace {

// Significant digit string of |x| truncated toward zero, with the decimal
// exponent e such that |x| = 0.d1d2... * 10^e.
std::pair<std::string, long> digit_string(const Real& x, long sig) {
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(std::max(2L, sig)),
                           x.get(), MPFR_RNDZ);
  std::string s(raw);
  mpfr_free_str(raw);
  if (!s.empty() && s[0] == '-') s.erase(0, 1);
  if (static_cast<long>(s.size()) > sig) s.resize(static_cast<size_t>(sig));
  return {s, static_cast<long>(e)};
}

}  // namespace

std::string to_significant(const Real& x, long sig) {
  if (sig < 1) throw Error(ErrorKind::InvalidArgument, "need at least one digit");
  if (x.is_zero()) {
    return sig == 1 ? "0" : "0." + std::string(static_cast<size_t>(sig - 1), '0');
  }
  auto [d, e] = digit_string(x, sig);
  std::string out = x.sign() < 0 ? "-" : "";
  if (e < -29 || e > 60) {
    out += d.substr(0, 1);
    if (d.size() > 1) out += "." + d.substr(1);
    out += "e" + std::to_string(e - 1);
    return out;
  }
  if (e <= 0) {
    out += "0." + std::string(static_cast<size_t>(-e), '0') + d;
  } else if (e >= static_cast<long>(d.size())) {
    out += d + std::string(static_cast<size_t>(e - static_cast<long>(d.size())), '0');
  } else {
    out += d.substr(0, static_cast<size_t>(e)) + "." + d.substr(static_cast<size_t>(e));
  }
  return out;
}

std::string to_fixed(const Real& x, long fraction_digits) {
  if (fraction_digits < 0) throw Error(ErrorKind::InvalidArgument, "negative digit count");
  // floor(|x| * 10^f) computed with enough bits for every printed digit.
  long int_digits = x.is_zero() ? 1 : std::max(1L, static_cast<long>(x.log10_abs()) + 2);
  long need = int_digits + fraction_digits + 5;
  mpfr_t t;
  mpfr_init2(t, std::max<long>(digits_to_bits(need), mpfr_get_prec(x.get())));
  mpfr_abs(t, x.get(), MPFR_RNDN);
  mpfr_t scale;
  mpfr_init2(scale, mpfr_get_prec(t));
  mpfr_ui_pow_ui(scale, 10, static_cast<unsigned long>(fraction_digits), MPFR_RNDN);
  mpfr_mul(t, t, scale, MPFR_RNDZ);
  BigInt scaled;
  mpfr_get_z(scaled.get_mpz_t(), t, MPFR_RNDZ);
  mpfr_clear(scale);
  mpfr_clear(t);

  std::string digits = scaled.get_str();
  if (static_cast<long>(digits.size()) <= fraction_digits) {
    digits.insert(0, static_cast<size_t>(fraction_digits + 1 - static_cast<long>(digits.size())), '0');
  }
  std::string out = (x.sign() < 0 && scaled != 0) ? "-" : "";
  size_t split = digits.size() - static_cast<size_t>(fraction_digits);
  out += digits.substr(0, split);
  if (fraction_digits > 0) out += "." + digits.substr(split);
  return out;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::DivergenceRisk: return "DivergenceRisk";
    case ErrorKind::InsufficientTerms: return "InsufficientTerms";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::MismatchAgainstCatalog: return "MismatchAgainstCatalog";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::NonContiguousIndex: return "NonContiguousIndex";
    case ErrorKind::NetworkError: return "NetworkError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace expi
