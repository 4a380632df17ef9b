#include "expi/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "expi/error.hpp"

namespace expi {

// ---------------------------------------------------------------------------
// Coefficient vectors

std::vector<BigInt> canonicalize(std::vector<BigInt> coeffs) {
  BigInt g = 0;
  for (const auto& c : coeffs) g = gcd(g, c);
  if (g == 0) return coeffs;
  for (auto& c : coeffs) c /= g;
  for (const auto& c : coeffs) {
    if (c == 0) continue;
    if (c < 0) {
      for (auto& d : coeffs) d = -d;
    }
    break;
  }
  return coeffs;
}

BigInt height_of(const std::vector<BigInt>& coeffs) {
  BigInt h = 0;
  for (const auto& c : coeffs) h = std::max<BigInt>(h, abs(c));
  return h;
}

Real verify_relation(const std::vector<BigInt>& coeffs, const std::vector<Real>& xs, long digits) {
  if (coeffs.size() != xs.size()) {
    throw Error(ErrorKind::InvalidArgument, "relation length does not match the vector");
  }
  Real sum(digits + 10);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    sum += xs[i].rounded(digits + 10) * coeffs[i];
  }
  return abs(sum).rounded(digits);
}

Real verify_relation(const Relation& relation, const std::vector<Real>& xs, long digits) {
  return verify_relation(relation.coeffs, xs, digits);
}

// ---------------------------------------------------------------------------
// PSLQ

namespace {

// Thin owning mpfr matrix; PSLQ runs its inner loops directly on mpfr_t to
// avoid a heap allocation per arithmetic step.
class MpfrBlock {
 public:
  MpfrBlock(std::size_t count, mpfr_prec_t prec) : data_(count) {
    for (auto& v : data_) {
      mpfr_init2(v.x, prec);
      mpfr_set_zero(v.x, 1);
    }
  }
  ~MpfrBlock() {
    for (auto& v : data_) mpfr_clear(v.x);
  }
  MpfrBlock(const MpfrBlock&) = delete;
  MpfrBlock& operator=(const MpfrBlock&) = delete;

  mpfr_ptr operator[](std::size_t i) { return data_[i].x; }

 private:
  struct Slot {
    mpfr_t x;
  };
  std::vector<Slot> data_;
};

double log10_abs(mpfr_srcptr v) {
  if (mpfr_zero_p(v)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v, MPFR_RNDN);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398120;
}

bool lex_less(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Pick the preferred relation among candidates: smallest height, then
// lexicographically smallest.
bool preferred(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  BigInt ha = height_of(a), hb = height_of(b);
  if (ha != hb) return ha < hb;
  return lex_less(a, b);
}

}  // namespace

RelationSearch find_integer_relation(const std::vector<Real>& xs, long digits, const BigInt& max_height,
                                     const RelationOptions& options) {
  const std::size_t n = xs.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "relation search needs at least two numbers");
  if (digits < 10 * static_cast<long>(n)) {
    throw Error(ErrorKind::PrecisionTooLow,
                "relation search over " + std::to_string(n) + " numbers needs at least " +
                    std::to_string(10 * n) + " digits, got " + std::to_string(digits));
  }
  for (const auto& x : xs) {
    if (x.digits() < digits) {
      throw Error(ErrorKind::PrecisionTooLow, "input carries fewer digits than requested");
    }
  }

  const double threshold_log10 = -options.threshold_fraction * static_cast<double>(digits);
  RelationSearch out;

  auto accept = [&](std::vector<BigInt> coeffs) -> bool {
    coeffs = canonicalize(std::move(coeffs));
    BigInt h = height_of(coeffs);
    if (h == 0 || h > max_height) return false;
    Real residual = verify_relation(coeffs, xs, digits);
    if (!residual.is_zero() && residual.log10_abs() >= threshold_log10) return false;
    if (out.relation && !preferred(coeffs, out.relation->coeffs)) return true;
    out.relation = Relation{std::move(coeffs), residual, h, threshold_log10};
    return true;
  };

  // Exact (or numerically exact) zeros give unit relations immediately.
  {
    Real scale(digits);
    for (const auto& x : xs) scale = max(scale, abs(x.rounded(digits)));
    if (scale.is_zero()) throw Error(ErrorKind::InvalidArgument, "all inputs are zero");
    const double zero_log10 = scale.log10_abs() + threshold_log10;
    for (std::size_t i = 0; i < n; ++i) {
      if (xs[i].is_zero() || xs[i].log10_abs() < zero_log10) {
        std::vector<BigInt> e(n, 0);
        e[i] = 1;
        accept(std::move(e));
      }
    }
    if (out.relation) {
      out.norm_bound_log10 = 0;
      return out;
    }
  }

  const long work_digits = digits + 10;
  const mpfr_prec_t prec = digits_to_bits(work_digits);

  MpfrBlock y(n, prec);
  MpfrBlock s(n, prec);
  MpfrBlock h(n * (n - 1), prec);  // row-major n x (n-1)
  MpfrBlock tmp(6, prec);
  auto H = [&](std::size_t i, std::size_t j) { return h[i * (n - 1) + j]; };
  std::vector<BigInt> b(n * n, 0);  // row-major n x n, columns are relations
  auto B = [&](std::size_t i, std::size_t j) -> BigInt& { return b[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) B(i, i) = 1;

  // s_j = sqrt(sum_{k>=j} x_k^2), y = x / s_0, s normalized by s_0.
  {
    mpfr_ptr acc = tmp[0];
    mpfr_set_zero(acc, 1);
    for (std::size_t j = n; j-- > 0;) {
      mpfr_sqr(tmp[1], xs[j].get(), MPFR_RNDN);
      mpfr_add(acc, acc, tmp[1], MPFR_RNDN);
      mpfr_sqrt(s[j], acc, MPFR_RNDN);
    }
    mpfr_set(tmp[2], s[0], MPFR_RNDN);
    for (std::size_t j = 0; j < n; ++j) {
      mpfr_div(y[j], xs[j].get(), tmp[2], MPFR_RNDN);
      mpfr_div(s[j], s[j], tmp[2], MPFR_RNDN);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (i < j) {
        mpfr_set_zero(H(i, j), 1);
      } else if (i == j) {
        mpfr_div(H(i, j), s[j + 1], s[j], MPFR_RNDN);
      } else {
        mpfr_mul(tmp[0], y[i], y[j], MPFR_RNDN);
        mpfr_mul(tmp[1], s[j], s[j + 1], MPFR_RNDN);
        mpfr_div(H(i, j), tmp[0], tmp[1], MPFR_RNDN);
        mpfr_neg(H(i, j), H(i, j), MPFR_RNDN);
      }
    }
  }

  BigInt t;
  // Hermite-style size reduction of row i against rows j <= jmax.
  auto reduce_row = [&](std::size_t i, std::size_t jmax) {
    for (std::size_t j = jmax + 1; j-- > 0;) {
      if (mpfr_zero_p(H(j, j))) continue;
      mpfr_div(tmp[0], H(i, j), H(j, j), MPFR_RNDN);
      mpfr_get_z(t.get_mpz_t(), tmp[0], MPFR_RNDN);
      if (t == 0) continue;
      mpfr_mul_z(tmp[1], y[i], t.get_mpz_t(), MPFR_RNDN);
      mpfr_add(y[j], y[j], tmp[1], MPFR_RNDN);
      for (std::size_t k = 0; k <= j; ++k) {
        mpfr_mul_z(tmp[1], H(j, k), t.get_mpz_t(), MPFR_RNDN);
        mpfr_sub(H(i, k), H(i, k), tmp[1], MPFR_RNDN);
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (B(k, i) != 0) B(k, j) += t * B(k, i);
      }
    }
  };
  for (std::size_t i = 1; i < n; ++i) reduce_row(i, i - 1);

  const double gamma = std::sqrt(4.0 / 3.0);
  const double exclusion_log10 =
      std::log10(max_height.get_d()) + 0.5 * std::log10(static_cast<double>(n));
  const double y_tol_log10 = threshold_log10;
  const double b_limit_log10 = 0.9 * static_cast<double>(digits);

  auto check_columns = [&]() {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (log10_abs(y[j]) < y_tol_log10) {
        std::vector<BigInt> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = B(k, j);
        if (accept(std::move(col))) any = true;
      }
    }
    return any;
  };

  auto update_bound = [&]() {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (mpfr_zero_p(H(j, j))) continue;
      best = std::max(best, log10_abs(H(j, j)));
    }
    out.norm_bound_log10 = -best;
  };

  if (check_columns()) {
    update_bound();
    return out;
  }

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;
    // Choose m maximizing gamma^(m+1) |H_mm| (log scale to avoid overflow).
    std::size_t m = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mpfr_zero_p(H(i, i))) continue;
      long e = 0;
      double mant = mpfr_get_d_2exp(&e, H(i, i), MPFR_RNDN);
      double v = static_cast<double>(i + 1) * std::log(gamma) + std::log(std::fabs(mant)) +
                 static_cast<double>(e) * std::log(2.0);
      if (v > best) {
        best = v;
        m = i;
      }
    }

    mpfr_swap(y[m], y[m + 1]);
    for (std::size_t k = 0; k + 1 < n; ++k) mpfr_swap(H(m, k), H(m + 1, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(B(k, m), B(k, m + 1));

    if (m + 2 < n) {
      // Restore lower-trapezoidal shape with a Givens rotation on columns m, m+1.
      mpfr_hypot(tmp[0], H(m, m), H(m, m + 1), MPFR_RNDN);
      if (!mpfr_zero_p(tmp[0])) {
        mpfr_div(tmp[1], H(m, m), tmp[0], MPFR_RNDN);
        mpfr_div(tmp[2], H(m, m + 1), tmp[0], MPFR_RNDN);
        for (std::size_t i = m; i < n; ++i) {
          mpfr_set(tmp[3], H(i, m), MPFR_RNDN);
          mpfr_set(tmp[4], H(i, m + 1), MPFR_RNDN);
          mpfr_mul(tmp[5], tmp[1], tmp[3], MPFR_RNDN);
          mpfr_fma(H(i, m), tmp[2], tmp[4], tmp[5], MPFR_RNDN);
          mpfr_mul(tmp[5], tmp[2], tmp[3], MPFR_RNDN);
          mpfr_fms(H(i, m + 1), tmp[1], tmp[4], tmp[5], MPFR_RNDN);
        }
      }
    }

    for (std::size_t i = m + 1; i < n; ++i) reduce_row(i, std::min(i - 1, m + 1));

    update_bound();
    if (check_columns()) return out;

    if (out.norm_bound_log10 > exclusion_log10) return out;

    // Entries of B growing past the working precision mean y is noise.
    std::size_t max_bits = 0;
    for (const auto& v : b) max_bits = std::max(max_bits, mpz_sizeinbase(v.get_mpz_t(), 2));
    if (static_cast<double>(max_bits) * 0.30103 > b_limit_log10) {
      out.precision_exhausted = true;
      return out;
    }
    if (mpfr_zero_p(H(n - 2, n - 2))) {
      out.precision_exhausted = true;
      return out;
    }
  }
  out.precision_exhausted = true;
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
  BigInt g = 0;
  for (const auto& c : coeffs_) g = gcd(g, c);
  if (coeffs_.back() < 0) g = -g;
  for (auto& c : coeffs_) c /= g;
}

BigInt IntPolynomial::height() const { return height_of(coeffs_); }

Real IntPolynomial::operator()(const Real& x) const {
  Real acc(coeffs_.back(), x.digits());
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
    acc *= x;
    acc += coeffs_[i];
  }
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return IntPolynomial({BigInt(0), BigInt(1)}).derivative();
  std::vector<BigInt> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  IntPolynomial p;
  p.coeffs_ = std::move(d);
  return p;
}

Real IntPolynomial::derivative_at(const Real& x) const {
  if (coeffs_.size() <= 1) return Real(x.digits());
  Real acc(BigInt(coeffs_.back() * static_cast<long>(coeffs_.size() - 1)), x.digits());
  for (std::size_t i = coeffs_.size() - 1; i-- > 1;) {
    acc *= x;
    acc += BigInt(coeffs_[i] * static_cast<long>(i));
  }
  return acc;
}

std::string IntPolynomial::to_string(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i > 0) {
      if (mag != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return first ? "0" : os.str();
}

MinPolySearch find_min_poly(const Real& x, long max_degree, long digits, const BigInt& max_height) {
  if (max_degree < 1) throw Error(ErrorKind::InvalidArgument, "max_degree must be at least 1");
  if (digits < 10 * (max_degree + 1)) {
    throw Error(ErrorKind::PrecisionTooLow,
                "degree " + std::to_string(max_degree) + " search needs at least " +
                    std::to_string(10 * (max_degree + 1)) + " digits");
  }
  MinPolySearch out;
  const Real xd = x.rounded(digits);
  const double scale_log10 = std::max(0.0, xd.log10_abs());
  std::vector<Real> powers{Real(1, digits), xd};
  for (long d = 1; d <= max_degree; ++d) {
    if (d > 1) powers.push_back(powers.back() * xd);
    out.last_degree = d;
    RelationSearch r = find_integer_relation(powers, digits, max_height);
    out.norm_bound_log10 = r.norm_bound_log10;
    if (!r.relation) continue;
    auto coeffs = r.relation->coeffs;
    bool nonconstant = std::any_of(coeffs.begin() + 1, coeffs.end(), [](const BigInt& c) { return c != 0; });
    if (!nonconstant) continue;
    IntPolynomial p(coeffs);
    Real value = p(xd.rounded(digits + 10));
    double bound = -0.7 * static_cast<double>(digits) + static_cast<double>(p.degree()) * scale_log10;
    if (!value.is_zero() && value.log10_abs() >= bound) continue;
    out.polynomial = std::move(p);
    return out;
  }
  return out;
}

}  // namespace expi
