#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expi/real.hpp"

namespace expi {

/// Majorant for |a(n)|, used to bound the truncated tail of a series.
///
///   Polynomial:          |a(n)| <= C * max(1, n)^degree
///   Exponential:         |a(n)| <= C * base^n
///   SubexponentialSqrt:  |a(n)| <= C * exp(rate * sqrt(n))
///
/// n is the position counted from the first supplied term.
struct GrowthBound {
  enum class Kind { Polynomial, Exponential, SubexponentialSqrt };

  Kind kind = Kind::Polynomial;
  double constant = 1.0;
  double degree = 0.0;  // Polynomial
  double base = 1.0;    // Exponential
  double rate = 0.0;    // SubexponentialSqrt

  static GrowthBound polynomial(double degree, double constant);
  static GrowthBound exponential(double base, double constant);
  static GrowthBound subexponential_sqrt(double rate, double constant = 1.0);

  // log(C) + log of the n-dependent factor.
  double log_bound(double n) const;
};

struct IntegerSequence {
  std::optional<std::string> id;
  long offset = 0;
  std::vector<BigInt> terms;
  std::optional<GrowthBound> growth;

  // Throws InvalidArgument on an empty term list or a malformed id.
  void validate() const;
};

bool is_valid_oeis_id(const std::string& id);

/// q = exp(-k pi); the summed series is multiplied by q^s.
struct EvalPoint {
  Rational k{1};
  Rational s{0};

  void validate() const;
};

/// Smallest N such that sum_{n >= N} bound(n) q^n < 10^-(digits+5), using a
/// geometric majorant of the tail. DivergenceRisk when the bound does not
/// decay at q.
std::size_t choose_truncation(const GrowthBound& growth, const EvalPoint& point, long digits);

/// log10 of the geometric majorant of sum_{n >= start} bound(n) q^n, or
/// +infinity if the majorant does not converge from `start`.
double tail_bound_log10(const GrowthBound& growth, const EvalPoint& point, std::size_t start);

/// Fit C e^{c sqrt n} to the last 10% of the terms and inflate C by 10; C is
/// raised further when an earlier term would otherwise exceed the bound.
GrowthBound fit_default_growth(const IntegerSequence& seq);

struct EvalOptions {
  bool strict = false;
};

struct Evaluation {
  Real value;
  // Digits actually guaranteed (<= requested); lower when the supplied terms
  // stop before the truncation point.
  double achieved_digits = 0;
  bool degraded = false;
  std::size_t terms_used = 0;
  std::size_t terms_needed = 0;
  GrowthBound growth;
};

/// q^(offset + s) * sum_j a(offset + j) q^j at q = exp(-k pi), Horner order.
/// Absolute error below 10^-(digits-2) unless flagged degraded.
Evaluation evaluate(const IntegerSequence& seq, const EvalPoint& point, long digits,
                    const EvalOptions& options = {});

// q = exp(-k pi) at the given precision.
Real nome(const Rational& k, long digits);

}  // namespace expi
