#include "expi/baseexp.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "expi/constants.hpp"
#include "expi/error.hpp"

namespace expi {

namespace {

// True when the fractional remainder r in [0, 1) lies within 10^-band of 0 or 1.
// `up` reports which boundary.
bool near_boundary(const Real& r, double band, bool& up) {
  if (r.is_zero() || r.log10_abs() < -band) {
    up = false;
    return true;
  }
  Real gap = 1 - r;
  if (gap.is_zero() || gap.log10_abs() < -band) {
    up = true;
    return true;
  }
  return false;
}

}  // namespace

BaseExpansion expand(const Real& x, std::size_t n_digits, long working_digits, BoundaryPolicy policy) {
  if (x.sign() < 0) throw Error(ErrorKind::NegativeInput, "base e^pi expansion needs x >= 0");
  const double needed = static_cast<double>(n_digits) * kDigitCost + 20;
  if (static_cast<double>(working_digits) < needed) {
    throw Error(ErrorKind::PrecisionTooLow, "need at least " + std::to_string(static_cast<long>(std::ceil(needed))) +
                                                " working digits for " + std::to_string(n_digits) + " digits");
  }
  const long p = std::min(working_digits, x.digits());
  const long w = working_digits + 10;
  const Real beta = exp_pi(w);

  BaseExpansion out;
  out.precision_used = working_digits;
  out.digits.reserve(n_digits);

  Real r = x.rounded(w);
  out.integer_part = r.floor();
  r -= Real(out.integer_part, w);
  bool exact_tail = false;

  auto check = [&](std::size_t position, const std::function<void(bool)>& snap) {
    const double band = static_cast<double>(p) - 1.37 * static_cast<double>(position) - 5;
    if (band <= 0) throw Error(ErrorKind::PrecisionExhausted, "working precision consumed");
    bool up = false;
    if (!near_boundary(r, band, up)) return;
    if (policy == BoundaryPolicy::Strict) {
      throw Error(ErrorKind::PrecisionExhausted,
                  "remainder at position " + std::to_string(position) + " is within the error band of a boundary");
    }
    snap(up);
    r = Real(w);
    exact_tail = true;
    out.snapped.push_back(position);
  };

  check(0, [&](bool up) {
    if (up) out.integer_part += 1;
  });
  for (std::size_t n = 1; n <= n_digits; ++n) {
    if (exact_tail) {
      out.digits.push_back(0);
      continue;
    }
    r *= beta;
    BigInt a = r.floor();
    r -= Real(a, w);
    if (a < 0 || a > 23) throw std::logic_error("base e^pi digit out of range; precision bookkeeping is wrong");
    out.digits.push_back(static_cast<int>(a.get_si()));
    check(n, [&](bool up) {
      if (up) out.digits.back() += 1;
    });
  }
  return out;
}

Real compose(const BaseExpansion& expansion, long digits) {
  const long w = digits + guard_digits(digits);
  const Real q = 1 / exp_pi(w);
  Real acc(w);
  for (std::size_t i = expansion.digits.size(); i-- > 0;) {
    acc += expansion.digits[i];
    acc *= q;
  }
  acc += expansion.integer_part;
  return acc.rounded(digits);
}

std::string to_string(const BaseExpansion& expansion) {
  std::string out = expansion.integer_part.get_str() + ";";
  for (int d : expansion.digits) out += " " + std::to_string(d);
  return out;
}

}  // namespace expi
