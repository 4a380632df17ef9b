#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expi/real.hpp"
#include "expi/relations.hpp"

namespace expi {

// Every evaluator below takes the nome as q = exp(-k pi), k > 0 rational.

struct ThetaSum {
  Real value;
  std::size_t terms = 0;  // n = 1, 2, ... terms of 2 q^(n^2) summed
};

/// theta_3(q) = 1 + 2 sum_{n>=1} q^(n^2), stopped once a term falls below
/// 10^-(digits+5).
Real theta3(const Rational& k, long digits);
ThetaSum theta3_series(const Real& q, long digits);

/// Rogers-Ramanujan G(q) = sum q^(n^2)/(q;q)_n = 1/((q;q^5)_inf (q^4;q^5)_inf)
/// and H(q) = sum q^(n^2+n)/(q;q)_n = 1/((q^2;q^5)_inf (q^3;q^5)_inf).
/// Both forms are evaluated; the product value is returned after they are
/// found to agree to digits-3 (SelfCheckFailed otherwise).
Real rr_G(const Rational& k, long digits);
Real rr_H(const Rational& k, long digits);

// Power series coefficients of G and H through q^n.
std::vector<BigInt> rr_G_coefficients(std::size_t n);
std::vector<BigInt> rr_H_coefficients(std::size_t n);

/// R(q) = q^(1/5) H(q)/G(q) from the product, checked against the continued
/// fraction q^(1/5) / (1 + q/(1 + q^2/(1 + q^3/(1 + ...)))). The fraction is
/// cut at depth D and accepted once depths D and D+5 agree to digits+5.
Real rogers_ramanujan_R(const Rational& k, long digits);

// Finite continued fraction 1 + q/(1 + q^2/(... (1 + q^depth))).
Real rr_continued_fraction_tail(const Real& q, std::size_t depth);

using TableRow = std::pair<long, Real>;

// Row n holds the function at k = 1/n, n = 1..n_max.
std::vector<TableRow> rr_table(long n_max, long digits);
std::vector<TableRow> theta_table(long n_max, long digits);

/// "n<TAB>value" lines, `digits` significant digits truncated, with the
/// leading zero dropped for values below 1 (".5114...").
std::string format_table(const std::vector<TableRow>& rows, long digits);
std::string format_table_value(const Real& x, long digits);

/// A_m = theta_3(e^{-m pi}) Gamma(3/4) / pi^(1/4).
struct AlgebraicValue {
  long m = 1;
  Real value;
  std::optional<IntPolynomial> min_poly;
  std::optional<long> degree;
  // Degrees searched before stopping (equals max_degree when nothing found).
  long searched_degree = 0;
};

Real compute_Am(long m, long digits);

/// Computes A_m and searches for its minimal polynomial. Not finding one is
/// a valid outcome.
AlgebraicValue detect_Am(long m, long digits, long max_degree, const BigInt& max_height);

struct NewtonStep {
  int iteration = 0;
  long working_digits = 0;
  // -log10 |x_i - root| / |root|, measured against the final root.
  double correct_digits = 0;
  double residual_log10 = 0;
};

struct NewtonLog {
  double initial_digits = 0;
  std::vector<NewtonStep> steps;
};

/// Newton iteration on a simple real root, doubling the working precision
/// each step. Throws NonConvergence if the derivative vanishes or |P(x)| does
/// not shrink over the first two steps.
Real newton_refine(const IntPolynomial& poly, const Real& x0, long target_digits, NewtonLog* log = nullptr);

// Square root of c > 0 by Newton on x^2 - c from a double-precision start.
Real sqrt_newton(const Real& c, double x0_estimate, long digits, NewtonLog* log = nullptr);

// pi^(1/4) as sqrt(sqrt(pi)), each root by Newton.
Real quartic_root_pi(long digits, NewtonLog* sqrt_log = nullptr, NewtonLog* log = nullptr);

struct Gamma34Result {
  Real value;
  Real exp_pi;
  Real pi_quarter;
  Real a_m;
  Real theta;
  std::size_t theta_terms = 0;
  NewtonLog pi_sqrt_log;
  NewtonLog pi_quarter_log;
  NewtonLog a_m_log;
  // log10 |value - exp(log_gamma(3/4))|.
  double catalog_difference_log10 = 0;
};

/// Gamma(3/4) in five stages: e^pi; pi^(1/4) as two Newton square roots; A_m refined on its
/// minimal polynomial; the theta_3(e^{-m pi}) series with q = (e^pi)^-m;
/// Gamma(3/4) = A_m pi^(1/4) / theta. Throws MismatchAgainstCatalog when the
/// result differs from the log-gamma value by 10^-(digits-5) or more.
Gamma34Result gamma34_pipeline(const AlgebraicValue& am, long digits);

// Detects A_m at a modest precision first (InvalidArgument if no polynomial
// of degree <= 16 turns up), then runs the pipeline.
Gamma34Result gamma34_pipeline(long m, long digits);

}  // namespace expi
