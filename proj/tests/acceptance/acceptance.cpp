// Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion.
//
//   expi_acceptance            run all
//   expi_acceptance --only N   run criterion N (repeatable)

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "expi/baseexp.hpp"
#include "expi/constants.hpp"
#include "expi/recognizer.hpp"
#include "expi/relations.hpp"
#include "expi/series.hpp"
#include "expi/special.hpp"
#include "fixtures.hpp"
#include "golden.hpp"

using namespace expi;
using expi::testing::diff_log10;
using expi::testing::load_fixture;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  std::function<Verdict()> run;
};

const BigInt kHeight = 1000000;

std::string fmt(double x, int precision = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

Verdict partition_identity() {
  const long d = 160;
  auto seq = load_fixture("A000041", 2000);
  if (seq.terms.size() != 2000) return {false, "fixture has " + std::to_string(seq.terms.size()) + " terms"};
  Real lhs = evaluate(seq, {}, d).value;
  const long w = d + 20;
  Real p = pi(w);
  Real rhs = pow(Real(2, w), Rational(3, 8)) * exp(log_gamma_rational(Rational(3, 4), w)) /
             (pow(p, Rational(1, 4)) * exp(p / 24));
  double diff = diff_log10(lhs, rhs);
  return {diff < -150, "log10 |difference| = " + fmt(diff) + " (need < -150)"};
}

Verdict golden_recognition() {
  auto start = std::chrono::steady_clock::now();
  std::vector<IntegerSequence> seqs;
  for (const auto& g : expi::testing::golden_entries()) seqs.push_back(load_fixture(g.id));
  auto reports = scan(seqs, {}, 160, kHeight);
  double elapsed = seconds_since(start);
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& g = expi::testing::golden_entries()[i];
    const auto& r = reports[i];
    bool ok = r.outcome == expi::Outcome::Recognized && r.form && *r.form == g.form &&
              expi::testing::matches_printed(Real::parse(r.value, 160), g.printed);
    if (!ok) bad.push_back(g.id + (r.formula.empty() ? "" : " [" + r.formula + "]"));
  }
  std::string detail = std::to_string(reports.size() - bad.size()) + "/" + std::to_string(reports.size()) +
                       " matched in " + fmt(elapsed, 1) + " s (need < 60 s)";
  for (const auto& b : bad) detail += "; mismatch " + b;
  return {bad.empty() && elapsed < 60, detail};
}

Verdict compare_table(const std::vector<TableRow>& rows, const std::vector<std::string>& printed) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < printed.size(); ++i) {
    std::string ours = i < rows.size() ? format_table_value(rows[i].second, 32) : "<missing>";
    if (ours != printed[i]) bad.push_back("row " + std::to_string(i + 1) + ": " + ours + " vs " + printed[i]);
  }
  std::string detail = std::to_string(printed.size() - bad.size()) + "/" + std::to_string(printed.size()) +
                       " rows byte-identical";
  for (std::size_t i = 0; i < bad.size() && i < 3; ++i) detail += "; " + bad[i];
  if (bad.size() > 3) detail += "; ...";
  return {bad.empty() && rows.size() == printed.size(), detail};
}

Verdict rr_table_rows() {
  const std::vector<std::string> printed = {
      ".51142845540370351929463301354268", ".60900295189734706892868001337065", ".61729972602946859110062866515646",
      ".61797449361217335219105975903425", ".61802916937167616162641498260454", ".61803359836699331081163334071515",
      ".61803395712786281601119176526411", ".61803398618842825100587467815680", ".61803398854240941388707852692804",
      ".61803398873308799018841882292394", ".61803398874853344913923731603680", ".61803398874978457135133206066600",
      ".61803398874988591549361817618333", ".61803398874989412463184337535911", ".61803398874989478959331899935178",
      ".61803398874989484345692221006610", ".61803398874989484782001369310102", ".61803398874989484817343541304887",
      ".61803398874989484820206348848960", ".61803398874989484820438243680879", ".61803398874989484820457027763369",
      ".61803398874989484820458549322731", ".61803398874989484820458672573031", ".61803398874989484820458682556626"};
  return compare_table(rr_table(24, 32), printed);
}

Verdict theta_table_rows() {
  const std::vector<std::string> printed = {
      "1.0864348112133080145753161215102", "1.4194954880837661233621867313517", "1.7323303588980335702122178570957",
      "2.0000139493694248359825587149114", "2.2360686514584039041502469921208", "2.4494897746873515544060910297978",
      "2.6457513125537614827176405810164", "2.8284271248149862513554420625741", "3.0000000000031532911056038691332",
      "3.1622776601685229690423404608741", "3.3166247903554063591967389627611", "3.4641016151377548808904659455994",
      "3.6055512754639893063354964239870", "3.7416573867739413861764352658466", "3.8729833462074168852057766566470",
      "4.00000000000000000000011832276929", "4.1231056256176605498214625615352"};
  return compare_table(theta_table(17, 32), printed);
}

Verdict modular_check() {
  const long d = 160;
  double worst = -1e9;
  for (long n = 1; n <= 17; ++n) {
    Real lhs = theta3(Rational(1, n), d);
    Real rhs = sqrt(Real(n, d + 10)) * theta3(Rational(n), d + 10);
    worst = std::max(worst, diff_log10(lhs, rhs));
  }
  return {worst < -150, "worst log10 |difference| over n = 1..17: " + fmt(worst) + " (need < -150)"};
}

Verdict rr_algebraic() {
  const long d = 160;
  Real x = rogers_ramanujan_R(Rational(1), d);
  // The largest degree the precision floor allows at 160 digits.
  auto found = find_min_poly(x, 15, d, kHeight);
  if (!found.polynomial) return {false, "no polynomial up to degree 15"};
  const auto& poly = *found.polynomial;
  const long w = 200;
  Real s5 = sqrt(Real(5, w));
  Real r = sqrt(s5 + 2);
  Real radical = (s5 + 1) * (s5 - r) * (r + nth_root(Real(5, w), 4)) / 4;
  double residual = poly(radical).log10_abs();
  bool ok = poly.degree() <= 16 && poly.height() <= kHeight && residual < -140;
  return {ok, poly.to_string() + ", radical residual log10 = " + fmt(residual) + " (need < -140)"};
}

Verdict golden_limit() {
  const long d = 60;
  auto rows = rr_table(24, d);
  bool increasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) increasing = increasing && rows[i].second > rows[i - 1].second;
  Real phi1 = (sqrt(Real(5, d + 10)) - 1) / 2;
  double diff = diff_log10(rows.back().second, phi1);
  return {increasing && diff < -25 && rows.size() == 24,
          std::string(increasing ? "strictly increasing" : "NOT increasing") +
              ", log10 |R(e^{-Pi/24}) - (phi-1)| = " + fmt(diff) + " (need < -25)"};
}

// Measured digits at least double per step until within 2 digits of target.
bool doubles(const NewtonLog& log, double target, std::string& note, const std::string& label) {
  double prev = log.initial_digits;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    double now = log.steps[i].correct_digits;
    if (now < target - 2 && now < 2 * prev) {
      note += "; " + label + " step " + std::to_string(i + 1) + ": " + fmt(prev) + " -> " + fmt(now);
      return false;
    }
    prev = now;
  }
  return true;
}

Verdict gamma34() {
  auto start = std::chrono::steady_clock::now();
  const long d = 500;
  const long w = d + guard_digits(d);
  auto r1 = gamma34_pipeline(1, d);
  auto r4 = gamma34_pipeline(4, d);
  double elapsed = seconds_since(start);
  Real reference = exp(log_gamma_rational(Rational(3, 4), d + 10));
  double d14 = diff_log10(r1.value, r4.value);
  double d1 = diff_log10(r1.value, reference);
  double d4 = diff_log10(r4.value, reference);
  bool agree = d14 < -495 && d1 < -495 && d4 < -495;
  std::string note;
  bool doubling = true;
  for (const auto* r : {&r1, &r4}) {
    std::string m = r == &r1 ? "m=1" : "m=4";
    doubling &= doubles(r->pi_sqrt_log, w + 10, note, m + " sqrt(pi)");
    doubling &= doubles(r->pi_quarter_log, w, note, m + " pi^(1/4)");
    doubling &= doubles(r->a_m_log, w, note, m + " A_m");
  }
  std::string detail = "log10 diffs m1-m4 " + fmt(d14) + ", m1-catalog " + fmt(d1) + ", m4-catalog " + fmt(d4) +
                       " (need < -495); doubling " + (doubling ? "holds" : "violated") + note + "; " +
                       fmt(elapsed, 1) + " s (need < 60 s)";
  return {agree && doubling && elapsed < 60, detail};
}

Verdict base_round_trip() {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(20240601);
  const long w = 200;
  const std::size_t n = 50;
  const Real bound = 24 * exp(-pi(w + 10) * static_cast<long>(n));
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(w));
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    Real x(Rational(rng.get_z_range(BigInt(100) * scale), scale), w);
    auto e = expand(x, n, w);
    bool in_range = std::all_of(e.digits.begin(), e.digits.end(), [](int a) { return a >= 0 && a <= 23; });
    if (!in_range || abs(compose(e, w) - x) > bound) ++failures;
  }
  Real theta = pow(pi(w), Rational(1, 4)) / exp(log_gamma_rational(Rational(3, 4), w));
  auto e = expand(theta, 36, w);
  bool pattern = e.integer_part == 1 && e.digits.size() == 36;
  for (std::size_t k = 1; k <= e.digits.size(); ++k) {
    std::size_t root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(k))));
    pattern = pattern && e.digits[k - 1] == (root * root == k ? 2 : 0);
  }
  return {failures == 0 && pattern, std::to_string(1000 - failures) + "/1000 round trips within 24 e^{-50 Pi}; " +
                                        "theta_3 digits " + to_string(e) + (pattern ? " match" : " DO NOT match")};
}

Verdict detector_calibration() {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(777);
  std::mt19937_64 small(4242);
  std::uniform_int_distribution<long> coeff(-1000, 1000);
  const long d = 200;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(d));
  auto random_real = [&] { return Real(Rational(rng.get_z_range(scale), scale), d + 10); };

  int recovered = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 7;
    std::vector<BigInt> c(n);
    for (auto& ci : c) ci = coeff(small);
    while (c.back() == 0) c.back() = coeff(small);
    std::vector<Real> xs;
    Real acc(0, d + 10);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      xs.push_back(random_real());
      acc += xs.back() * c[i];
    }
    xs.push_back(-acc / Real(c.back(), d + 10));
    auto r = find_integer_relation(xs, d, kHeight);
    if (r.relation && r.relation->coeffs == canonicalize(c)) ++recovered;
  }
  int false_positives = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 7;
    std::vector<Real> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(random_real());
    if (find_integer_relation(xs, d, kHeight).relation) ++false_positives;
  }
  return {recovered >= 99 && false_positives == 0,
          std::to_string(recovered) + "/100 planted relations recovered (need >= 99), " +
              std::to_string(false_positives) + "/100 false positives (need 0)"};
}

Verdict negative_control() {
  auto r = recognize_sequence(load_fixture("A000040"), {}, 160, kHeight);
  std::string detail = "primes: outcome " + std::string(to_string(r.outcome));
  if (r.outcome == expi::Outcome::None) detail += ", exclusion bound 10^" + fmt(r.exclusion_log10);
  if (r.outcome == expi::Outcome::Recognized) detail += " [" + r.formula + "]";
  return {r.outcome == expi::Outcome::None, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "partition identity at e^-Pi", partition_identity},
      {2, "golden recognition set", golden_recognition},
      {3, "Rogers-Ramanujan table", rr_table_rows},
      {4, "theta_3 table", theta_table_rows},
      {5, "theta_3 modular cross-check", modular_check},
      {6, "R(e^-Pi) algebraic", rr_algebraic},
      {7, "phi-1 limit", golden_limit},
      {8, "Gamma(3/4) pipeline", gamma34},
      {9, "base e^Pi round trip", base_round_trip},
      {10, "relation detector calibration", detector_calibration},
      {11, "negative control", negative_control},
  };

  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: " << argv[0] << " [--only N]...\n";
      return 2;
    }
  }

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.number)) continue;
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c.number << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
              << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
