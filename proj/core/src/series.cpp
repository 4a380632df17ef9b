#include "expi/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "expi/constants.hpp"
#include "expi/error.hpp"

namespace expi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn10 = 2.30258509299404568402;
constexpr std::size_t kMaxTruncation = 50'000'000;

double to_double(const Rational& r) { return r.get_d(); }

// log(e^a + e^b) without overflow.
double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Natural log of |a| from the binary size of the integer, good to ~1e-15.
double log_abs(const BigInt& a) {
  if (a == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, a.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

// Natural log of the tail majorant starting at n >= 1.
double tail_from(const GrowthBound& g, double lambda, double n) {
  const double inf = std::numeric_limits<double>::infinity();
  double log_c = std::log(g.constant);
  double ratio_log = 0;  // log of the ratio of consecutive majorant terms
  double head = 0;       // log of the first majorant term
  switch (g.kind) {
    case GrowthBound::Kind::Polynomial:
      ratio_log = g.degree * std::log1p(1.0 / n) - lambda;
      head = log_c + g.degree * std::log(n) - lambda * n;
      break;
    case GrowthBound::Kind::Exponential:
      ratio_log = std::log(g.base) - lambda;
      head = log_c + n * (std::log(g.base) - lambda);
      break;
    case GrowthBound::Kind::SubexponentialSqrt:
      ratio_log = g.rate / (2.0 * std::sqrt(n)) - lambda;
      head = log_c + g.rate * std::sqrt(n) - lambda * n;
      break;
  }
  if (ratio_log >= 0) return inf;
  return head - std::log(-std::expm1(ratio_log));
}

}  // namespace

GrowthBound GrowthBound::polynomial(double degree, double constant) {
  GrowthBound g;
  g.kind = Kind::Polynomial;
  g.degree = degree;
  g.constant = constant;
  return g;
}

GrowthBound GrowthBound::exponential(double base, double constant) {
  GrowthBound g;
  g.kind = Kind::Exponential;
  g.base = base;
  g.constant = constant;
  return g;
}

GrowthBound GrowthBound::subexponential_sqrt(double rate, double constant) {
  GrowthBound g;
  g.kind = Kind::SubexponentialSqrt;
  g.rate = rate;
  g.constant = constant;
  return g;
}

double GrowthBound::log_bound(double n) const {
  double log_c = std::log(constant);
  switch (kind) {
    case Kind::Polynomial:
      return log_c + degree * std::log(std::max(1.0, n));
    case Kind::Exponential:
      return log_c + n * std::log(base);
    case Kind::SubexponentialSqrt:
      return log_c + rate * std::sqrt(n);
  }
  return log_c;
}

bool is_valid_oeis_id(const std::string& id) {
  static const std::regex pattern("A[0-9]{6,7}");
  return std::regex_match(id, pattern);
}

void IntegerSequence::validate() const {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "sequence has no terms");
  if (id && !is_valid_oeis_id(*id)) {
    throw Error(ErrorKind::InvalidArgument, "malformed OEIS id: " + *id);
  }
}

void EvalPoint::validate() const {
  if (k <= 0) throw Error(ErrorKind::InvalidArgument, "evaluation point needs k > 0");
}

double tail_bound_log10(const GrowthBound& growth, const EvalPoint& point, std::size_t start) {
  const double lambda = to_double(point.k) * kPi;
  double t = 0;
  if (start == 0) {
    t = log_add(growth.log_bound(0), tail_from(growth, lambda, 1.0));
  } else {
    t = tail_from(growth, lambda, static_cast<double>(start));
  }
  return t / kLn10;
}

std::size_t choose_truncation(const GrowthBound& growth, const EvalPoint& point, long digits) {
  point.validate();
  if (digits < 1) throw Error(ErrorKind::InvalidArgument, "digits must be positive");
  const double lambda = to_double(point.k) * kPi;
  if (growth.kind == GrowthBound::Kind::Exponential && std::log(growth.base) >= lambda) {
    throw Error(ErrorKind::DivergenceRisk,
                "exponential growth base is not below exp(k pi); the series may diverge");
  }
  const double target = -static_cast<double>(digits + 5);
  for (std::size_t n = 1; n < kMaxTruncation; ++n) {
    if (tail_bound_log10(growth, point, n) < target) return n;
  }
  throw Error(ErrorKind::DivergenceRisk, "no truncation point found below the term cap");
}

GrowthBound fit_default_growth(const IntegerSequence& seq) {
  seq.validate();
  const std::size_t len = seq.terms.size();
  const std::size_t window = std::max<std::size_t>(1, (len + 9) / 10);
  const std::size_t begin = len - window;

  std::vector<std::pair<double, double>> points;  // (sqrt n, log|a_n|)
  for (std::size_t j = begin; j < len; ++j) {
    if (seq.terms[j] != 0) points.emplace_back(std::sqrt(static_cast<double>(j)), log_abs(seq.terms[j]));
  }

  double rate = 0;
  if (points.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [x, y] : points) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    if (sxx > 0) rate = std::max(0.0, sxy / sxx);
  }

  // C: ten times the smallest constant covering the window, raised if needed
  // so that every supplied term lies under the bound.
  double log_c = -std::numeric_limits<double>::infinity();
  for (auto [x, y] : points) log_c = std::max(log_c, y - rate * x);
  if (std::isfinite(log_c)) log_c += std::log(10.0);
  for (std::size_t j = 0; j < len; ++j) {
    if (seq.terms[j] == 0) continue;
    log_c = std::max(log_c, log_abs(seq.terms[j]) - rate * std::sqrt(static_cast<double>(j)));
  }
  if (!std::isfinite(log_c)) log_c = 0;  // all-zero sequence
  return GrowthBound::subexponential_sqrt(rate, std::exp(log_c));
}

Real nome(const Rational& k, long digits) {
  const long w = digits + guard_digits(digits);
  return exp(-(pi(w) * Real(k, w))).rounded(digits);
}

Evaluation evaluate(const IntegerSequence& seq, const EvalPoint& point, long digits,
                    const EvalOptions& options) {
  seq.validate();
  point.validate();
  if (digits < 1) throw Error(ErrorKind::InvalidArgument, "digits must be positive");

  GrowthBound growth;
  if (seq.growth) {
    growth = *seq.growth;
    for (std::size_t j = 0; j < seq.terms.size(); ++j) {
      if (seq.terms[j] == 0) continue;
      if (log_abs(seq.terms[j]) > growth.log_bound(static_cast<double>(j)) + 1e-9) {
        throw Error(ErrorKind::DivergenceRisk, "growth hint does not dominate the supplied terms");
      }
    }
  } else {
    growth = fit_default_growth(seq);
  }

  const double lambda = to_double(point.k) * kPi;
  // Prefactor q^(offset+s); a negative exponent amplifies every error.
  const Rational shift = Rational(seq.offset) + point.s;
  const double amplification = std::max(0.0, -to_double(shift) * lambda / kLn10);
  const long effective_digits = digits + static_cast<long>(std::ceil(amplification));

  Evaluation out{Real(digits), 0, false, seq.terms.size(), 0, growth};
  out.terms_needed = choose_truncation(growth, point, effective_digits);

  const std::size_t len = seq.terms.size();
  double max_mag = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < len; ++j) {
    if (seq.terms[j] == 0) continue;
    max_mag = std::max(max_mag, (log_abs(seq.terms[j]) - lambda * static_cast<double>(j)) / kLn10);
  }
  const long w = effective_digits + 10 + static_cast<long>(std::ceil(std::log10(static_cast<double>(len) + 1))) +
                 std::max(0L, static_cast<long>(std::ceil(max_mag)));

  const Real q = nome(point.k, w);
  Real acc(seq.terms[len - 1], w);
  for (std::size_t j = len - 1; j-- > 0;) {
    acc *= q;
    acc += seq.terms[j];
  }
  if (shift != 0) {
    acc *= exp(-(pi(w) * Real(point.k * shift, w)));
  }
  out.value = acc.rounded(digits);

  if (len >= out.terms_needed) {
    out.achieved_digits = static_cast<double>(digits);
  } else {
    double tail = tail_bound_log10(growth, point, len) + amplification;
    out.achieved_digits = std::min(static_cast<double>(digits), std::floor(-tail));
    out.degraded = true;
    if (options.strict || out.achieved_digits < 1) {
      throw Error(ErrorKind::InsufficientTerms,
                  "need " + std::to_string(out.terms_needed) + " terms for " + std::to_string(digits) +
                      " digits, have " + std::to_string(len));
    }
  }
  return out;
}

}  // namespace expi
