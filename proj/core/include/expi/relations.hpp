#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expi/real.hpp"

namespace expi {

/// Integer vector c with sum c_i x_i ~ 0. Coefficients have gcd 1 and the
/// first nonzero one is positive.
struct Relation {
  std::vector<BigInt> coeffs;
  Real residual;
  BigInt height;
  // log10 of the acceptance threshold the residual was checked against.
  double threshold_log10 = 0;
};

/// Integer polynomial c_0 + c_1 x + ... + c_d x^d, content 1, c_d > 0.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients);

  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
  BigInt height() const;

  Real operator()(const Real& x) const;
  Real derivative_at(const Real& x) const;
  IntPolynomial derivative() const;

  std::string to_string(const std::string& var = "x") const;
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<BigInt> coeffs_;
};

struct RelationOptions {
  // Relations are accepted when |sum c_i x_i| < 10^-(threshold_fraction * digits).
  double threshold_fraction = 0.8;
  std::size_t max_iterations = 100000;
};

struct RelationSearch {
  std::optional<Relation> relation;
  // Every integer relation has Euclidean norm at least this large (log10);
  // when no relation is returned this is the exclusion bound reached.
  double norm_bound_log10 = 0;
  std::size_t iterations = 0;
  // True when the search stopped because precision ran out rather than
  // because the bound passed max_height.
  bool precision_exhausted = false;
};

/// PSLQ (one-level, gamma = sqrt(4/3)) run in MPFR at `digits` precision.
///
/// Throws PrecisionTooLow when digits < 10 * xs.size(). The returned relation
/// is canonical (gcd 1, first nonzero coefficient positive); if several
/// columns qualify at once, the smallest height wins, then the
/// lexicographically smallest vector.
RelationSearch find_integer_relation(const std::vector<Real>& xs, long digits, const BigInt& max_height,
                                     const RelationOptions& options = {});

/// |sum c_i x_i| evaluated at `digits`.
Real verify_relation(const std::vector<BigInt>& coeffs, const std::vector<Real>& xs, long digits);
Real verify_relation(const Relation& relation, const std::vector<Real>& xs, long digits);

// Divide by the gcd and make the first nonzero entry positive.
std::vector<BigInt> canonicalize(std::vector<BigInt> coeffs);
BigInt height_of(const std::vector<BigInt>& coeffs);

struct MinPolySearch {
  std::optional<IntPolynomial> polynomial;
  // Degrees tried; the last one is where the search stopped.
  long last_degree = 0;
  double norm_bound_log10 = 0;
};

/// Smallest-degree integer polynomial (height <= max_height) vanishing at x,
/// found by relation search on (1, x, ..., x^d) for d = 1, 2, ...
/// Accepts P when |P(x)| < 10^-(0.7 digits) max(1,|x|)^d.
MinPolySearch find_min_poly(const Real& x, long max_degree, long digits, const BigInt& max_height);

}  // namespace expi
