#include "expi/constants.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "expi/error.hpp"

namespace expi {

long guard_digits(long digits) { return 10 + digits / 20; }

Real pi(long digits) {
  Real r(digits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real exp_pi(long digits) {
  long w = digits + guard_digits(digits);
  return exp(pi(w)).rounded(digits);
}

namespace {

// Tangent numbers T_1..T_n (T_k = d^{2k-1}/dx^{2k-1} tan x at 0), integer
// recurrence of Brent and Harvey. B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1)).
std::vector<BigInt> tangent_numbers(long n) {
  std::vector<BigInt> t(static_cast<size_t>(n) + 1);
  if (n < 1) return t;
  t[1] = 1;
  for (long k = 2; k <= n; ++k) t[k] = (k - 1) * t[k - 1];
  for (long k = 2; k <= n; ++k) {
    for (long j = k; j <= n; ++j) {
      t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
    }
  }
  return t;
}

std::mutex bernoulli_mutex;
std::vector<Rational> bernoulli_cache;  // index k holds B_{2k}; [0] unused

BigInt product_range(const std::vector<BigInt>& f, size_t lo, size_t hi) {
  if (hi - lo == 1) return f[lo];
  size_t mid = lo + (hi - lo) / 2;
  return product_range(f, lo, mid) * product_range(f, mid, hi);
}

}  // namespace

Rational bernoulli_even(long k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "bernoulli_even needs k >= 1");
  std::lock_guard<std::mutex> lock(bernoulli_mutex);
  if (static_cast<long>(bernoulli_cache.size()) <= k) {
    long n = std::max<long>(k, 2 * static_cast<long>(bernoulli_cache.size()));
    n = std::max<long>(n, 64);
    auto t = tangent_numbers(n);
    bernoulli_cache.assign(static_cast<size_t>(n) + 1, Rational(0));
    for (long i = 1; i <= n; ++i) {
      BigInt four_i;
      mpz_ui_pow_ui(four_i.get_mpz_t(), 4, static_cast<unsigned long>(i));
      Rational b(BigInt(2 * i) * t[i], four_i * (four_i - 1));
      b.canonicalize();
      if (i % 2 == 0) b = -b;
      bernoulli_cache[i] = b;
    }
  }
  return bernoulli_cache[k];
}

Real log_gamma_rational(const Rational& r_in, long digits) {
  Rational r = r_in;
  r.canonicalize();
  if (r <= 0 || r >= 1) {
    throw Error(ErrorKind::InvalidArgument,
                "log_gamma_rational needs 0 < r < 1, got " + r.get_str());
  }
  if (digits < 1) throw Error(ErrorKind::InvalidArgument, "digits must be positive");

  const long w = digits + guard_digits(digits);
  const long shift = std::max<long>(10, static_cast<long>(std::ceil(0.7 * static_cast<double>(w))));

  // Rising product r (r+1) ... (r+shift-1) = prod(p + j q) / q^shift.
  const BigInt p = r.get_num();
  const BigInt q = r.get_den();
  std::vector<BigInt> factors;
  factors.reserve(static_cast<size_t>(shift));
  for (long j = 0; j < shift; ++j) factors.push_back(p + j * q);
  BigInt rising = product_range(factors, 0, factors.size());
  Real log_rising = log(Real(rising, w)) - shift * log(Real(q, w));

  Rational z_exact = r + shift;
  Real z(z_exact, w);
  Real sum = (z - Real(Rational(1, 2), w)) * log(z) - z + log(2 * pi(w)) / 2;

  const Real inv_z = Real(1, w) / z;
  const Real inv_z2 = inv_z * inv_z;
  Real zpow = inv_z;
  const double tol_log10 = -static_cast<double>(w) - 2;
  double previous = 0;
  for (long k = 1;; ++k) {
    Rational coeff = bernoulli_even(k) / Rational(2 * k * (2 * k - 1));
    Real term = zpow;
    mpfr_mul_q(term.get(), term.get(), coeff.get_mpq_t(), MPFR_RNDN);
    double mag = term.log10_abs();
    if (mag < tol_log10) break;
    if (k > 1 && mag > previous) {
      throw Error(ErrorKind::NonConvergence, "Stirling series diverged before reaching precision");
    }
    previous = mag;
    sum += term;
    zpow *= inv_z2;
  }
  return (sum - log_rising).rounded(digits);
}

std::string gamma_entry_name(const Rational& r) {
  return "log_gamma_" + r.get_num().get_str() + "_" + r.get_den().get_str();
}

Real catalog_value(ConstantKind kind, const Rational& parameter, long digits) {
  const long w = digits + guard_digits(digits);
  switch (kind) {
    case ConstantKind::Pi:
      return pi(digits);
    case ConstantKind::LogPi:
      return log(pi(w)).rounded(digits);
    case ConstantKind::LogSmallPrime:
      return log(Real(parameter.get_num(), w)).rounded(digits);
    case ConstantKind::LogGamma:
      return log_gamma_rational(parameter, digits);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown constant kind");
}

const CatalogEntry& ConstantCatalog::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::InvalidArgument, "no catalog entry named " + name);
}

bool ConstantCatalog::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const CatalogEntry& e) { return e.name == name; });
}

ConstantCatalog ConstantCatalog::at_digits(long digits) const {
  ConstantCatalog out;
  out.digits_ = digits;
  for (const auto& e : entries_) {
    out.entries_.push_back({e.name, e.kind, e.parameter, catalog_value(e.kind, e.parameter, digits)});
  }
  return out;
}

ConstantCatalog ConstantCatalog::build(long digits, CatalogMode mode,
                                       const std::vector<Rational>& extra_gamma_args) {
  if (digits < 1) throw Error(ErrorKind::InvalidArgument, "digits must be positive");
  struct Spec {
    std::string name;
    ConstantKind kind;
    Rational parameter;
  };
  std::vector<Spec> specs = {
      {"pi", ConstantKind::Pi, Rational(0)},
      {"log_pi", ConstantKind::LogPi, Rational(0)},
      {"log_2", ConstantKind::LogSmallPrime, Rational(2)},
      {"log_3", ConstantKind::LogSmallPrime, Rational(3)},
  };
  std::vector<Rational> gamma_args;
  if (mode == CatalogMode::Full17) {
    specs.push_back({"log_5", ConstantKind::LogSmallPrime, Rational(5)});
    gamma_args = {Rational(3, 4), Rational(1, 3), Rational(1, 4), Rational(1, 5),
                  Rational(2, 5), Rational(1, 6), Rational(1, 8), Rational(3, 8),
                  Rational(1, 10), Rational(3, 10), Rational(1, 12), Rational(5, 12)};
  } else {
    gamma_args = {Rational(3, 4)};
  }
  for (Rational a : extra_gamma_args) {
    a.canonicalize();
    if (std::find(gamma_args.begin(), gamma_args.end(), a) == gamma_args.end()) {
      gamma_args.push_back(a);
    }
  }
  for (const auto& a : gamma_args) {
    specs.push_back({gamma_entry_name(a), ConstantKind::LogGamma, a});
  }

  ConstantCatalog out;
  out.digits_ = digits;
  for (auto& s : specs) {
    Real v = catalog_value(s.kind, s.parameter, digits);
    out.entries_.push_back({std::move(s.name), s.kind, s.parameter, std::move(v)});
  }
  return out;
}

ConstantCatalog build_catalog(long digits) { return ConstantCatalog::build(digits); }

}  // namespace expi
