#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "expi/real.hpp"

namespace expi {

/// x = integer_part + sum_{n>=1} digits[n-1] e^{-pi n}, digits in [0, 23].
struct BaseExpansion {
  BigInt integer_part{0};
  std::vector<int> digits;
  long precision_used = 0;
  // Positions (0 = integer part) where the remainder was within the error
  // band of a digit boundary and was snapped onto it; every later digit is 0.
  std::vector<std::size_t> snapped;
};

enum class BoundaryPolicy {
  // Take the boundary as exact: round the digit, zero the remainder.
  SnapToBoundary,
  // Refuse to guess: throw PrecisionExhausted.
  Strict,
};

// Decimal digits of precision one base-e^pi digit consumes (log10 e^pi).
inline constexpr double kDigitCost = 1.3643763538418412;

/// Greedy expansion in base e^pi. Needs working_digits >= n_digits *
/// log10(e^pi) + 20 (PrecisionTooLow otherwise); NegativeInput for x < 0.
/// The certified band at position n is 10^-(p - 1.37 n - 5), p being the
/// smaller of working_digits and the precision of x.
BaseExpansion expand(const Real& x, std::size_t n_digits, long working_digits,
                     BoundaryPolicy policy = BoundaryPolicy::SnapToBoundary);

Real compose(const BaseExpansion& expansion, long digits);

// "1; 2 0 0 2 0"
std::string to_string(const BaseExpansion& expansion);

}  // namespace expi
