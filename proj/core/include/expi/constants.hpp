#pragma once

#include <string>
#include <vector>

#include "expi/real.hpp"

namespace expi {

/// Guard digits used when a catalog constant is computed and then rounded
/// back to the requested precision: 10 + 5% of the target.
long guard_digits(long digits);

Real pi(long digits);
Real exp_pi(long digits);

/// Natural log of Gamma(r) for rational 0 < r < 1.
///
/// The argument is raised by n so that r + n exceeds 0.7 times the working
/// precision, the Stirling series is summed there until a term drops below
/// the target (for real arguments the remainder is bounded by the first
/// omitted term), and log(r (r+1) ... (r+n-1)) is subtracted, the rising
/// product being formed exactly as a rational.
Real log_gamma_rational(const Rational& r, long digits);

// Bernoulli number B_{2k} (k >= 1) as an exact rational. Memoized, safe for
// concurrent callers.
Rational bernoulli_even(long k);

enum class ConstantKind { Pi, LogPi, LogSmallPrime, LogGamma };

struct CatalogEntry {
  std::string name;
  ConstantKind kind;
  // The prime for LogSmallPrime, the argument for LogGamma, unused otherwise.
  Rational parameter;
  Real value;
};

enum class CatalogMode {
  // The five-entry list: pi, log pi, log 2, log 3, log Gamma(3/4).
  Base5,
  // The 17-entry extended list.
  Full17,
};

/// Ordered, immutable list of named constants. Recognition coefficient
/// vectors are reported against this order.
class ConstantCatalog {
 public:
  ConstantCatalog() = default;

  long digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
  const CatalogEntry& operator[](std::size_t i) const { return entries_.at(i); }
  const CatalogEntry& find(const std::string& name) const;
  bool contains(const std::string& name) const;

  // Same names, kinds and order, values recomputed at `digits`.
  ConstantCatalog at_digits(long digits) const;

  static ConstantCatalog build(long digits, CatalogMode mode = CatalogMode::Full17,
                               const std::vector<Rational>& extra_gamma_args = {});

 private:
  long digits_ = 0;
  std::vector<CatalogEntry> entries_;
};

ConstantCatalog build_catalog(long digits);

// Canonical entry name for a Gamma argument, e.g. "log_gamma_3_4".
std::string gamma_entry_name(const Rational& r);

// Value of one catalog entry computed from scratch.
Real catalog_value(ConstantKind kind, const Rational& parameter, long digits);

}  // namespace expi
