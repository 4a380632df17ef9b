#include "expi/recognizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace expi {

// ---------------------------------------------------------------------------
// ClosedForm

bool ClosedForm::is_empty() const {
  return exp_pi == 0 && pi_exp == 0 && two_exp == 0 && three_exp == 0 && five_exp == 0 && gamma.empty();
}

void ClosedForm::normalize() {
  for (Rational* r : {&exp_pi, &pi_exp, &two_exp, &three_exp, &five_exp}) r->canonicalize();
  std::map<Rational, Rational> merged;
  for (auto g : gamma) {
    g.argument.canonicalize();
    g.exponent.canonicalize();
    merged[g.argument] += g.exponent;
  }
  gamma.clear();
  for (auto& [arg, e] : merged) {
    if (e != 0) gamma.push_back({arg, e});
  }
}

std::vector<std::string> ClosedForm::signature() const {
  std::vector<std::string> out;
  if (exp_pi != 0) out.push_back("pi");
  if (pi_exp != 0) out.push_back("log_pi");
  if (two_exp != 0) out.push_back("log_2");
  if (three_exp != 0) out.push_back("log_3");
  if (five_exp != 0) out.push_back("log_5");
  for (const auto& g : gamma) out.push_back(gamma_entry_name(g.argument));
  return out;
}

// ---------------------------------------------------------------------------
// Search basis

namespace {

std::string layout_key(const ConstantCatalog& catalog) {
  std::string key;
  for (const auto& e : catalog.entries()) key += e.name + ";";
  return key;
}

std::mutex basis_mutex;
std::map<std::string, std::vector<std::size_t>> basis_cache;

}  // namespace

std::vector<std::size_t> independent_basis(const ConstantCatalog& catalog) {
  const std::string key = layout_key(catalog);
  {
    std::lock_guard<std::mutex> lock(basis_mutex);
    auto it = basis_cache.find(key);
    if (it != basis_cache.end()) return it->second;
  }
  const long d = std::max<long>(200, 10 * static_cast<long>(catalog.size() + 1) + 20);
  const ConstantCatalog precise = catalog.at_digits(d);
  const BigInt dependency_height = 10000;

  std::vector<std::size_t> keep;
  std::vector<Real> values;
  for (std::size_t i = 0; i < precise.size(); ++i) {
    const Real& v = precise[i].value;
    if (!keep.empty()) {
      std::vector<Real> xs = values;
      xs.push_back(v);
      RelationSearch r = find_integer_relation(xs, d, dependency_height);
      if (r.relation && r.relation->coeffs.back() != 0) continue;
    } else if (v.is_zero()) {
      continue;
    }
    keep.push_back(i);
    values.push_back(v);
  }

  std::lock_guard<std::mutex> lock(basis_mutex);
  basis_cache.emplace(key, keep);
  return keep;
}

// ---------------------------------------------------------------------------
// Recognition

Recognition recognize(const Real& value, const ConstantCatalog& catalog, long digits, const BigInt& max_height) {
  if (value.sign() <= 0) {
    throw Error(ErrorKind::NonPositiveValue, "value is not positive; log is undefined");
  }
  if (catalog.digits() < digits || value.digits() < digits) {
    throw Error(ErrorKind::PrecisionTooLow, "inputs carry fewer digits than the recognition precision");
  }
  const auto basis = independent_basis(catalog);

  Recognition out;
  std::vector<Real> xs;
  xs.push_back(log(value.rounded(digits + 10)).rounded(digits));
  for (std::size_t i : basis) {
    xs.push_back(catalog[i].value.rounded(digits));
    out.basis_names.push_back(catalog[i].name);
  }

  RelationSearch search = find_integer_relation(xs, digits, max_height);
  out.norm_bound_log10 = search.norm_bound_log10;
  out.precision_exhausted = search.precision_exhausted;
  if (!search.relation || search.relation->coeffs[0] == 0) return out;

  const auto& c = search.relation->coeffs;
  ClosedForm form;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const BigInt& cj = c[j + 1];
    if (cj == 0) continue;
    Rational e(-cj, c[0]);
    e.canonicalize();
    const CatalogEntry& entry = catalog[basis[j]];
    switch (entry.kind) {
      case ConstantKind::Pi:
        form.exp_pi += e;
        break;
      case ConstantKind::LogPi:
        form.pi_exp += e;
        break;
      case ConstantKind::LogSmallPrime: {
        long p = entry.parameter.get_num().get_si();
        if (p == 2) form.two_exp += e;
        if (p == 3) form.three_exp += e;
        if (p == 5) form.five_exp += e;
        break;
      }
      case ConstantKind::LogGamma:
        form.gamma.push_back({entry.parameter, e});
        break;
    }
  }
  form.normalize();

  // Round trip through the constants module before accepting.
  Real back = evaluate_closed_form(form, digits);
  Real diff = abs(back - value.rounded(digits));
  double scale = std::max(0.0, value.log10_abs());
  if (!diff.is_zero() && diff.log10_abs() >= -0.8 * static_cast<double>(digits) + scale) return out;

  out.form = std::move(form);
  out.relation = std::move(search.relation);
  return out;
}

Real evaluate_closed_form(const ClosedForm& form, long digits) {
  const long w = digits + guard_digits(digits);
  Real l(w);
  auto add = [&](const Rational& e, const Real& x) {
    if (e == 0) return;
    Real t = x;
    mpfr_mul_q(t.get(), t.get(), e.get_mpq_t(), MPFR_RNDN);
    l += t;
  };
  const Real p = pi(w);
  add(form.exp_pi, p);
  add(form.pi_exp, log(p));
  add(form.two_exp, log(Real(2, w)));
  add(form.three_exp, log(Real(3, w)));
  add(form.five_exp, log(Real(5, w)));
  for (const auto& g : form.gamma) add(g.exponent, log_gamma_rational(g.argument, w));
  return exp(l).rounded(digits);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string rational_text(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// "X", "X^3", "X^(1/4)" for a positive exponent.
std::string power(const std::string& base, const Rational& e) {
  if (e == 1) return base;
  if (e.get_den() == 1) return base + "^" + e.get_num().get_str();
  return base + "^(" + rational_text(e) + ")";
}

std::string exp_pi_factor(const Rational& e) {
  Rational a = abs(e);
  std::string sign = e < 0 ? "-" : "";
  std::string body;
  const BigInt& num = a.get_num();
  const BigInt& den = a.get_den();
  body = (num == 1 ? std::string("Pi") : num.get_str() + "*Pi");
  if (den != 1) body += "/" + den.get_str();
  if (e == 1) return "e^Pi";
  return "e^(" + sign + body + ")";
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " * ";
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string render(const ClosedForm& form_in) {
  ClosedForm form = form_in;
  form.normalize();
  if (form.is_empty()) return "1";

  std::vector<std::string> num;
  std::vector<std::string> den;
  if (form.exp_pi != 0) num.push_back(exp_pi_factor(form.exp_pi));

  const bool fold = form.two_exp.get_den() == 1 && form.three_exp.get_den() == 1 && form.five_exp.get_den() == 1;
  std::vector<std::string> prime_num;
  std::vector<std::string> prime_den;
  if (fold) {
    BigInt top = 1, bottom = 1;
    const std::pair<long, const Rational*> primes[] = {{2, &form.two_exp}, {3, &form.three_exp}, {5, &form.five_exp}};
    for (auto [p, e] : primes) {
      BigInt pe;
      mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), BigInt(abs(e->get_num())).get_ui());
      if (*e > 0) top *= pe;
      if (*e < 0) bottom *= pe;
    }
    if (top != 1) num.push_back(top.get_str());
    if (bottom != 1) den.push_back(bottom.get_str());
  } else {
    const std::pair<const char*, const Rational*> primes[] = {{"2", &form.two_exp}, {"3", &form.three_exp}, {"5", &form.five_exp}};
    for (auto [p, e] : primes) {
      if (*e > 0) prime_num.push_back(power(p, *e));
      if (*e < 0) prime_den.push_back(power(p, -*e));
    }
  }
  if (form.pi_exp > 0) num.push_back(power("Pi", form.pi_exp));
  if (form.pi_exp < 0) den.push_back(power("Pi", -form.pi_exp));
  num.insert(num.end(), prime_num.begin(), prime_num.end());
  den.insert(den.end(), prime_den.begin(), prime_den.end());
  for (const auto& g : form.gamma) {
    std::string base = "Gamma(" + rational_text(g.argument) + ")";
    if (g.exponent > 0) num.push_back(power(base, g.exponent));
    if (g.exponent < 0) den.push_back(power(base, -g.exponent));
  }

  std::string out = num.empty() ? "1" : join(num);
  if (!den.empty()) {
    out += " / ";
    out += den.size() == 1 ? den[0] : "(" + join(den) + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scan

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Recognized: return "recognized";
    case Outcome::None: return "none";
    case Outcome::Error: return "error";
  }
  return "error";
}

namespace {

struct ScanContext {
  long digits;
  long confirm_digits;
  ConstantCatalog catalog;
  ConstantCatalog confirm_catalog;
  BigInt max_height;
  ScanOptions options;
};

long confirm_digits_for(long digits, const ScanOptions& options) {
  return static_cast<long>(std::ceil(options.confirm_factor * static_cast<double>(digits)));
}

ScanContext make_context(long digits, const BigInt& max_height, const ScanOptions& options) {
  const long cd = confirm_digits_for(digits, options);
  ConstantCatalog catalog = ConstantCatalog::build(digits, options.catalog_mode, options.extra_gamma_args);
  ConstantCatalog confirm = catalog.at_digits(cd);
  return ScanContext{digits, cd, std::move(catalog), std::move(confirm), max_height, options};
}

double floored_log10(const Real& r, long floor_digits) {
  double v = r.is_zero() ? -static_cast<double>(floor_digits) : r.log10_abs();
  v = std::max(v, -static_cast<double>(floor_digits));
  return std::round(v * 10.0) / 10.0;
}

// Fill recognition fields of `report` from a recognition at `digits`, then
// confirm with `confirm_value` (when present) against the confirm catalog.
void fill_recognition(RecognitionReport& report, const Recognition& rec, const ScanContext& ctx, long digits,
                      const std::optional<Real>& confirm_value, long confirm_digits) {
  report.exclusion_log10 = std::round(rec.norm_bound_log10 * 10.0) / 10.0;
  report.basis.clear();
  report.basis.push_back("log_value");
  report.basis.insert(report.basis.end(), rec.basis_names.begin(), rec.basis_names.end());
  if (!rec.form) {
    report.outcome = Outcome::None;
    return;
  }
  report.residual_log10 = floored_log10(rec.relation->residual, digits);
  report.confirm_residual_log10 = report.residual_log10;
  if (confirm_value) {
    std::vector<Real> xs;
    xs.push_back(log(confirm_value->rounded(confirm_digits + 10)).rounded(confirm_digits));
    for (const auto& name : rec.basis_names) {
      xs.push_back(ctx.confirm_catalog.find(name).value.rounded(confirm_digits));
    }
    Real r = verify_relation(*rec.relation, xs, confirm_digits);
    if (!r.is_zero() && r.log10_abs() >= -0.8 * static_cast<double>(confirm_digits)) {
      report.outcome = Outcome::None;
      report.error_message = "relation failed confirmation at " + std::to_string(confirm_digits) + " digits";
      return;
    }
    report.confirm_residual_log10 = floored_log10(r, confirm_digits);
  }
  report.outcome = Outcome::Recognized;
  report.form = rec.form;
  report.formula = render(*rec.form);
  report.relation = rec.relation->coeffs;
  report.low_confidence = rec.relation->height > kLowConfidenceHeight;
}

RecognitionReport recognize_with(const IntegerSequence& seq, const EvalPoint& point, const ScanContext& ctx) {
  RecognitionReport report;
  report.id = seq.id.value_or("");
  report.k = point.k;
  report.s = point.s;
  report.digits = ctx.digits;
  try {
    seq.validate();
    EvalPoint p = point;
    if (ctx.options.offset_mode == OffsetMode::FirstTermAtZero) p.s -= seq.offset;
    EvalOptions eo{ctx.options.strict};
    Evaluation ev = evaluate(seq, p, ctx.digits, eo);
    report.value = to_significant(ev.value, ctx.digits);
    if (ev.value.sign() <= 0) {
      throw Error(ErrorKind::NonPositiveValue, "series value is not positive at this point");
    }
    long d = ctx.digits;
    if (ev.degraded) d = std::min<long>(d, static_cast<long>(ev.achieved_digits));
    Recognition rec = recognize(ev.value.rounded(ctx.digits), ctx.catalog, d, ctx.max_height);
    std::optional<Real> confirm;
    long cd = ctx.confirm_digits;
    if (rec.form) {
      Evaluation ev2 = evaluate(seq, p, ctx.confirm_digits, eo);
      if (ev2.degraded) cd = std::min<long>(cd, static_cast<long>(ev2.achieved_digits));
      confirm = ev2.value;
    }
    fill_recognition(report, rec, ctx, d, confirm, cd);
  } catch (const Error& e) {
    report.outcome = Outcome::Error;
    report.error = e.kind();
    report.error_message = e.what();
  }
  return report;
}

}  // namespace

RecognitionReport recognize_sequence(const IntegerSequence& seq, const EvalPoint& point, long digits,
                                     const BigInt& max_height, const ScanOptions& options) {
  ScanContext ctx = make_context(digits, max_height, options);
  return recognize_with(seq, point, ctx);
}

std::vector<RecognitionReport> scan(const std::vector<IntegerSequence>& seqs, const EvalPoint& point, long digits,
                                    const BigInt& max_height, const ScanOptions& options) {
  std::vector<RecognitionReport> reports(seqs.size());
  if (seqs.empty()) return reports;
  point.validate();
  ScanContext ctx = make_context(digits, max_height, options);
  independent_basis(ctx.catalog);  // warm the cache before fanning out

  unsigned jobs = std::max(1u, options.jobs);
  if (!mpfr_buildopt_tls_p()) jobs = 1;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(seqs.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < seqs.size(); ++i) reports[i] = recognize_with(seqs[i], point, ctx);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < seqs.size(); i = next++) {
        reports[i] = recognize_with(seqs[i], point, ctx);
      }
      mpfr_free_cache();
    });
  }
  for (auto& w : workers) w.join();
  return reports;
}

RecognitionReport recognize_literal(const std::string& label, const Real& value, long digits,
                                    const BigInt& max_height, const ScanOptions& options) {
  RecognitionReport report;
  report.id = label;
  report.digits = digits;
  try {
    if (value.digits() < digits) {
      throw Error(ErrorKind::PrecisionTooLow, "literal carries fewer digits than requested");
    }
    report.value = to_significant(value, digits);
    ScanContext ctx{digits, digits,
                    ConstantCatalog::build(digits, options.catalog_mode, options.extra_gamma_args),
                    ConstantCatalog(), max_height, options};
    Recognition rec = recognize(value, ctx.catalog, digits, max_height);
    fill_recognition(report, rec, ctx, digits, std::nullopt, digits);
  } catch (const Error& e) {
    report.outcome = Outcome::Error;
    report.error = e.kind();
    report.error_message = e.what();
  }
  return report;
}

}  // namespace expi
