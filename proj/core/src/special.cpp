#include "expi/special.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "expi/constants.hpp"
#include "expi/error.hpp"
#include "expi/series.hpp"

namespace expi {

namespace {

// True when |x| < 10^-e (zero counts as small).
bool below(const Real& x, double e) { return x.is_zero() || x.log10_abs() < -e; }

// Relative agreement to `digits` digits.
bool agree(const Real& a, const Real& b, long digits) {
  Real diff = abs(a - b);
  if (diff.is_zero()) return true;
  return diff.log10_abs() < -static_cast<double>(digits) + std::max(0.0, b.log10_abs());
}

long working(long digits) { return digits + guard_digits(digits) + 5; }

// prod_{n>=0} (1 - q^(5n+a)), stopped once q^(5n+a) < 10^-(digits+5).
Real pochhammer5(const Real& q, long a, long digits) {
  const long w = q.digits();
  Real q5 = pow(q, 5);
  Real t = pow(q, a);
  Real acc(1, w);
  while (!below(t, static_cast<double>(digits + 5))) {
    acc *= (1 - t);
    t *= q5;
  }
  return acc;
}

// sum q^(n^2 + c n)/(q;q)_n for c = 0 (G) or c = 1 (H).
Real rr_sum(const Real& q, long c, long digits) {
  const long w = q.digits();
  Real acc(1, w);
  Real term(1, w);
  Real qn(1, w);  // q^n
  for (long n = 1;; ++n) {
    qn *= q;
    // term_n / term_{n-1} = q^(2n-1+c) / (1 - q^n)
    Real ratio = pow(q, 2 * n - 1 + c) / (1 - qn);
    term *= ratio;
    acc += term;
    if (below(term / acc, static_cast<double>(digits + 5)) && ratio < Real::parse("0.5", 10)) break;
  }
  return acc;
}

Real nome_at(const Rational& k, long w) {
  if (k <= 0) throw Error(ErrorKind::InvalidArgument, "nome needs k > 0");
  return nome(k, w);
}

Real rr_checked(const Rational& k, long digits, long a, long b, long c) {
  const long w = working(digits);
  const Real q = nome_at(k, w);
  Real product = 1 / (pochhammer5(q, a, w) * pochhammer5(q, b, w));
  Real sum = rr_sum(q, c, w);
  if (!agree(sum, product, digits - 3)) {
    throw Error(ErrorKind::SelfCheckFailed, "sum and product forms disagree");
  }
  return product.rounded(digits);
}

std::vector<BigInt> rr_coefficients(std::size_t n, long r) {
  std::vector<BigInt> c(n + 1, 0);
  c[0] = 1;
  // Multiply by 1/(1 - x^j) for every j congruent to +-r mod 5.
  for (std::size_t j = 1; j <= n; ++j) {
    long m = static_cast<long>(j % 5);
    if (m != r && m != 5 - r) continue;
    for (std::size_t i = j; i <= n; ++i) c[i] += c[i - j];
  }
  return c;
}

template <class F>
std::vector<TableRow> table(long n_max, long digits, F f) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "table needs n_max >= 1");
  std::vector<std::future<Real>> jobs;
  for (long n = 1; n <= n_max; ++n) {
    jobs.push_back(std::async(std::launch::async, [=] {
      Real v = f(Rational(1, n), digits);
      mpfr_free_cache();
      return v;
    }));
  }
  std::vector<TableRow> rows;
  for (long n = 1; n <= n_max; ++n) rows.emplace_back(n, jobs[static_cast<std::size_t>(n - 1)].get());
  return rows;
}

// Newton with precision doubling. `eval(x)` returns (f(x), f'(x)) at the
// precision of x.
template <class Eval>
Real newton_core(Eval eval, const Real& x0, long target, NewtonLog* log) {
  if (target < 1) throw Error(ErrorKind::InvalidArgument, "target digits must be positive");
  const long full = target + 10;
  Real x = x0.rounded(std::min(full, std::max<long>(x0.digits(), 30)));
  std::vector<Real> iterates;
  std::vector<long> precisions;
  std::vector<double> residuals;

  auto [f0, fp0] = eval(x);
  double est = 1;
  if (!f0.is_zero()) {
    if (fp0.is_zero()) throw Error(ErrorKind::NonConvergence, "derivative vanished");
    est = std::clamp(-((f0 / fp0).log10_abs() - std::max(0.0, x.log10_abs())), 1.0, static_cast<double>(target));
  }

  for (int it = 0; it < 200; ++it) {
    long w = std::min<long>(full, std::max<long>(30, static_cast<long>(2 * est) + 20));
    Real xw = x.rounded(w);
    auto [f, fp] = eval(xw);
    double r = f.is_zero() ? -static_cast<double>(w) * 2 : f.log10_abs();
    residuals.push_back(r);
    if (residuals.size() >= 2 && residuals.size() <= 3 && !f.is_zero()) {
      if (r >= residuals[residuals.size() - 2]) {
        throw Error(ErrorKind::NonConvergence, "residual is not contracting");
      }
    }
    if (f.is_zero()) break;
    if (fp.is_zero()) throw Error(ErrorKind::NonConvergence, "derivative vanished");
    Real delta = f / fp;
    x = xw - delta;
    iterates.push_back(x);
    precisions.push_back(w);
    double corr = -(delta.log10_abs() - std::max(0.0, x.log10_abs()));
    if (corr >= static_cast<double>(target + 2)) break;
    if (w == full && 2 * corr - 2 >= static_cast<double>(target + 2)) break;
    est = std::min(static_cast<double>(target), 2 * corr - 1);
    if (it == 199) throw Error(ErrorKind::NonConvergence, "iteration limit reached");
  }

  Real root = x.rounded(target);
  if (log) {
    auto measure = [&](const Real& v) {
      Real d = abs(v.rounded(full) - x);
      if (d.is_zero()) return static_cast<double>(target);
      return std::min(static_cast<double>(target), -(d.log10_abs() - std::max(0.0, x.log10_abs())));
    };
    log->initial_digits = measure(x0);
    log->steps.clear();
    for (std::size_t i = 0; i < iterates.size(); ++i) {
      NewtonStep s;
      s.iteration = static_cast<int>(i + 1);
      s.working_digits = precisions[i];
      s.correct_digits = measure(iterates[i]);
      s.residual_log10 = i + 1 < residuals.size() ? residuals[i + 1] : residuals.back();
      log->steps.push_back(s);
    }
  }
  return root;
}

}  // namespace

// ---------------------------------------------------------------------------
// theta_3

ThetaSum theta3_series(const Real& q, long digits) {
  const long w = q.digits();
  ThetaSum out{Real(1, w), 0};
  Real term = q;                // q^(n^2)
  Real step = pow(q, 3);        // q^(2n+1)
  const Real q2 = q * q;
  while (!below(term, static_cast<double>(digits + 5))) {
    out.value += 2 * term;
    ++out.terms;
    term *= step;
    step *= q2;
  }
  return out;
}

Real theta3(const Rational& k, long digits) {
  const long w = working(digits);
  return theta3_series(nome_at(k, w), w).value.rounded(digits);
}

// ---------------------------------------------------------------------------
// Rogers-Ramanujan

Real rr_G(const Rational& k, long digits) { return rr_checked(k, digits, 1, 4, 0); }
Real rr_H(const Rational& k, long digits) { return rr_checked(k, digits, 2, 3, 1); }

std::vector<BigInt> rr_G_coefficients(std::size_t n) { return rr_coefficients(n, 1); }
std::vector<BigInt> rr_H_coefficients(std::size_t n) { return rr_coefficients(n, 2); }

Real rr_continued_fraction_tail(const Real& q, std::size_t depth) {
  const long w = q.digits();
  std::vector<Real> powers;
  powers.reserve(depth);
  Real p = q;
  for (std::size_t j = 1; j <= depth; ++j) {
    powers.push_back(p);
    p *= q;
  }
  Real t(1, w);
  for (std::size_t j = depth; j-- > 0;) t = 1 + powers[j] / t;
  return t;
}

Real rogers_ramanujan_R(const Rational& k, long digits) {
  const long w = working(digits);
  const Real q = nome_at(k, w);
  const Real fifth = nome_at(k / 5, w);

  Real product = fifth * (pochhammer5(q, 1, w) * pochhammer5(q, 4, w)) / (pochhammer5(q, 2, w) * pochhammer5(q, 3, w));

  std::size_t depth = 16;
  Real cf(w);
  for (;;) {
    Real a = rr_continued_fraction_tail(q, depth);
    Real b = rr_continued_fraction_tail(q, depth + 5);
    if (agree(a, b, digits + 5)) {
      cf = fifth / b;
      break;
    }
    if (depth > 10'000'000) throw Error(ErrorKind::NonConvergence, "continued fraction did not settle");
    depth *= 2;
  }
  if (!agree(cf, product, digits - 3)) {
    throw Error(ErrorKind::SelfCheckFailed, "product and continued fraction disagree");
  }
  return product.rounded(digits);
}

// ---------------------------------------------------------------------------
// Tables

std::vector<TableRow> rr_table(long n_max, long digits) {
  return table(n_max, digits, [](const Rational& k, long d) { return rogers_ramanujan_R(k, d + 5).rounded(d + 5); });
}

std::vector<TableRow> theta_table(long n_max, long digits) {
  return table(n_max, digits, [](const Rational& k, long d) { return theta3(k, d + 5); });
}

std::string format_table_value(const Real& x, long digits) {
  std::string s = to_significant(x, digits);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string format_table(const std::vector<TableRow>& rows, long digits) {
  std::string out;
  for (const auto& [n, v] : rows) {
    out += std::to_string(n) + "\t" + format_table_value(v, digits) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// A_m and Newton

Real compute_Am(long m, long digits) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be a positive integer");
  const long w = working(digits);
  Real th = theta3_series(nome_at(Rational(m), w), w).value;
  Real g = exp(log_gamma_rational(Rational(3, 4), w));
  Real p4 = nth_root(pi(w), 4);
  return (th * g / p4).rounded(digits);
}

AlgebraicValue detect_Am(long m, long digits, long max_degree, const BigInt& max_height) {
  AlgebraicValue out;
  out.m = m;
  out.value = compute_Am(m, digits);
  MinPolySearch search = find_min_poly(out.value, max_degree, digits, max_height);
  out.searched_degree = search.last_degree;
  if (search.polynomial) {
    out.degree = search.polynomial->degree();
    out.min_poly = std::move(search.polynomial);
  }
  return out;
}

Real newton_refine(const IntPolynomial& poly, const Real& x0, long target_digits, NewtonLog* log) {
  if (poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "polynomial must have positive degree");
  return newton_core([&](const Real& x) { return std::pair{poly(x), poly.derivative_at(x)}; }, x0, target_digits,
                     log);
}

Real sqrt_newton(const Real& c, double x0_estimate, long digits, NewtonLog* log) {
  Real x0(16);
  mpfr_set_d(x0.get(), x0_estimate, MPFR_RNDN);
  return newton_core(
      [&](const Real& x) { return std::pair{x * x - c.rounded(x.digits()), 2 * x}; }, x0, digits, log);
}

Real quartic_root_pi(long digits, NewtonLog* sqrt_log, NewtonLog* log) {
  const long w = digits + 10;
  Real root_pi = sqrt_newton(pi(w), std::sqrt(3.14159265358979323846), w, sqrt_log);
  return sqrt_newton(root_pi, std::sqrt(root_pi.to_double()), digits, log);
}

// ---------------------------------------------------------------------------
// Gamma(3/4)

Gamma34Result gamma34_pipeline(const AlgebraicValue& am, long digits) {
  if (!am.min_poly) throw Error(ErrorKind::InvalidArgument, "A_m has no minimal polynomial");
  const long w = digits + guard_digits(digits);
  Gamma34Result out;

  out.exp_pi = exp_pi(w);
  out.pi_quarter = quartic_root_pi(w, &out.pi_sqrt_log, &out.pi_quarter_log);
  out.a_m = newton_refine(*am.min_poly, am.value, w, &out.a_m_log);

  Real q = 1 / pow(out.exp_pi, am.m);
  ThetaSum th = theta3_series(q, w);
  out.theta = th.value;
  out.theta_terms = th.terms;

  Real g = out.a_m * out.pi_quarter / out.theta;
  Real reference = exp(log_gamma_rational(Rational(3, 4), w));
  Real diff = abs(g - reference);
  out.catalog_difference_log10 = diff.is_zero() ? -static_cast<double>(w) : diff.log10_abs();
  if (out.catalog_difference_log10 >= -static_cast<double>(digits - 5)) {
    throw Error(ErrorKind::MismatchAgainstCatalog,
                "pipeline value differs from log-gamma value at 10^" + std::to_string(out.catalog_difference_log10));
  }
  out.value = g.rounded(digits);
  return out;
}

Gamma34Result gamma34_pipeline(long m, long digits) {
  const long max_degree = 16;
  const long detect_digits = 10 * (max_degree + 1) + 30;
  AlgebraicValue am = detect_Am(m, detect_digits, max_degree, BigInt(1000000));
  if (!am.min_poly) {
    throw Error(ErrorKind::InvalidArgument,
                "no minimal polynomial of degree <= 16 found for A_" + std::to_string(m));
  }
  return gamma34_pipeline(am, digits);
}

}  // namespace expi
