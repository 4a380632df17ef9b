#include <gtest/gtest.h>

#include <set>

#include "expi/constants.hpp"
#include "expi/error.hpp"
#include "expi/recognizer.hpp"
#include "fixtures.hpp"
#include "golden.hpp"

using namespace expi;
using expi::testing::diff_log10;
using expi::testing::golden_entries;
using expi::testing::load_fixture;
using expi::testing::matches_printed;
using expi::testing::monomial;

namespace {

const BigInt kHeight = 1000000;
constexpr long kDigits = 160;

// e^(a pi) pi^b 2^c Gamma(3/4)^g straight from MPFR primitives.
Real oracle_value(const ClosedForm& f, long digits) {
  Real p(digits), t(digits), e(digits), out(1, digits);
  mpfr_const_pi(p.get(), MPFR_RNDN);
  auto power = [&](const Real& base, const Rational& r) {
    Real q(r, digits);
    mpfr_pow(t.get(), base.get(), q.get(), MPFR_RNDN);
    out *= t;
  };
  Real a(f.exp_pi, digits);
  mpfr_mul(e.get(), a.get(), p.get(), MPFR_RNDN);
  mpfr_exp(t.get(), e.get(), MPFR_RNDN);
  out *= t;
  power(p, f.pi_exp);
  power(Real(2, digits), f.two_exp);
  power(Real(3, digits), f.three_exp);
  power(Real(5, digits), f.five_exp);
  for (const auto& g : f.gamma) {
    Real x(g.argument, digits), gx(digits);
    mpfr_gamma(gx.get(), x.get(), MPFR_RNDN);
    power(gx, g.exponent);
  }
  return out;
}

const ConstantCatalog& catalog160() {
  static const ConstantCatalog c = build_catalog(kDigits);
  return c;
}

std::vector<IntegerSequence> golden_sequences() {
  std::vector<IntegerSequence> out;
  for (const auto& g : golden_entries()) out.push_back(load_fixture(g.id));
  return out;
}

const std::vector<RecognitionReport>& golden_reports() {
  static const auto reports = [] {
    ScanOptions opts;
    opts.jobs = 4;
    return scan(golden_sequences(), {}, kDigits, kHeight, opts);
  }();
  return reports;
}

}  // namespace

TEST(IndependentBasis, ThirteenOfSeventeen) {
  auto idx = independent_basis(catalog160());
  std::vector<std::string> names;
  for (auto i : idx) names.push_back(catalog160()[i].name);
  const std::vector<std::string> expected = {
      "pi",           "log_pi",        "log_2",         "log_3",         "log_5",
      "log_gamma_3_4", "log_gamma_1_3", "log_gamma_1_5", "log_gamma_2_5", "log_gamma_1_8",
      "log_gamma_3_8", "log_gamma_1_10", "log_gamma_1_12"};
  EXPECT_EQ(names, expected);
  auto base5 = ConstantCatalog::build(kDigits, CatalogMode::Base5);
  EXPECT_EQ(independent_basis(base5).size(), 5u);
}

TEST(Recognize, PartitionGeneratingFunction) {
  Real v = evaluate(load_fixture("A000041"), {}, kDigits).value;
  auto rec = recognize(v, catalog160(), kDigits, kHeight);
  ASSERT_TRUE(rec.form);
  ClosedForm expected = monomial(Rational(-1, 24), Rational(-1, 4), Rational(3, 8), Rational(1));
  EXPECT_EQ(*rec.form, expected);
  EXPECT_EQ(render(*rec.form), "e^(-Pi/24) * 2^(3/8) * Gamma(3/4) / Pi^(1/4)");
}

TEST(Recognize, ThetaThree) {
  Real v = evaluate(load_fixture("A000122"), {}, kDigits).value;
  auto rec = recognize(v, catalog160(), kDigits, kHeight);
  ASSERT_TRUE(rec.form);
  EXPECT_EQ(*rec.form, monomial(Rational(0), Rational(1, 4), Rational(0), Rational(-1)));
}

TEST(Recognize, OneIsTheEmptyMonomial) {
  auto rec = recognize(Real(1, kDigits), catalog160(), kDigits, kHeight);
  ASSERT_TRUE(rec.form);
  EXPECT_TRUE(rec.form->is_empty());
  EXPECT_EQ(render(*rec.form), "1");
}

TEST(Recognize, TauFunction) {
  auto seq = load_fixture("A000594");
  // First term at q^0.
  Real v = evaluate(seq, {Rational(1), Rational(-1)}, kDigits).value;
  auto rec = recognize(v, catalog160(), kDigits, kHeight);
  ASSERT_TRUE(rec.form);
  EXPECT_EQ(*rec.form, monomial(Rational(1), Rational(6), Rational(-9), Rational(-24)));
  EXPECT_TRUE(matches_printed(evaluate_closed_form(*rec.form, 40), "0.33051755959632854743859758293250"));
}

TEST(Recognize, NonPositiveValueRejected) {
  for (long x : {0L, -3L}) {
    try {
      recognize(Real(x, kDigits), catalog160(), kDigits, kHeight);
      FAIL() << x;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NonPositiveValue);
    }
  }
}

TEST(Recognize, TranscendentalNoise) {
  // e itself is not a monomial in the catalog constants.
  auto rec = recognize(exp(Real(1, kDigits)), catalog160(), kDigits, kHeight);
  EXPECT_FALSE(rec.form);
  EXPECT_GT(rec.norm_bound_log10, 0);
}

TEST(Render, PrintedStyles) {
  EXPECT_EQ(render(monomial(Rational(-1, 24), Rational(0), Rational(1, 4), Rational(0))), "e^(-Pi/24) * 2^(1/4)");
  EXPECT_EQ(render(monomial(Rational(0), Rational(2), Rational(0), Rational(-8))), "Pi^2 / Gamma(3/4)^8");
  EXPECT_EQ(render(monomial(Rational(1), Rational(6), Rational(-9), Rational(-24))),
            "e^Pi * Pi^6 / (512 * Gamma(3/4)^24)");
  EXPECT_EQ(render(ClosedForm{}), "1");
  ClosedForm f;
  f.exp_pi = Rational(5, 8);
  f.two_exp = Rational(-5, 2);
  f.normalize();
  // Only all-integer powers fold into a leading rational.
  EXPECT_EQ(render(f), "e^(5*Pi/8) / 2^(5/2)");
}

TEST(Render, InjectiveOnGolden) {
  std::set<std::string> seen;
  for (const auto& g : golden_entries()) {
    EXPECT_EQ(render(g.form), g.formula) << g.id;
    EXPECT_TRUE(seen.insert(render(g.form)).second) << g.id;
  }
}

TEST(EvaluateClosedForm, TruncatedValues) {
  auto a000141 = monomial(Rational(0), Rational(3, 2), Rational(0), Rational(-6));
  EXPECT_EQ(to_significant(evaluate_closed_form(a000141, 40), 32), "1.6444551609167710310694456429142");
  auto a001935 = monomial(Rational(1, 8), Rational(0), Rational(-1, 2), Rational(0));
  EXPECT_EQ(to_significant(evaluate_closed_form(a001935, 40), 32), "1.0472058180553657181251543939072");
  EXPECT_TRUE(evaluate_closed_form(ClosedForm{}, 40) == 1);
}

TEST(ClosedForm, NormalizeSortsAndDropsZeros) {
  ClosedForm f;
  f.gamma = {{Rational(3, 4), Rational(2)}, {Rational(1, 3), Rational(0)}, {Rational(1, 5), Rational(-1)}};
  f.normalize();
  ASSERT_EQ(f.gamma.size(), 2u);
  EXPECT_EQ(f.gamma[0].argument, Rational(1, 5));
  EXPECT_EQ(f.gamma[1].argument, Rational(3, 4));
}

TEST(Scan, GoldenFormsAndValues) {
  const auto& reports = golden_reports();
  ASSERT_EQ(reports.size(), golden_entries().size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& g = golden_entries()[i];
    const auto& r = reports[i];
    EXPECT_EQ(r.id, g.id);
    ASSERT_EQ(r.outcome, Outcome::Recognized) << g.id << " " << r.error_message;
    EXPECT_EQ(*r.form, g.form) << g.id;
    EXPECT_EQ(r.formula, g.formula) << g.id;
    EXPECT_LT(diff_log10(Real::parse(r.value, kDigits), oracle_value(g.form, kDigits + 20)), -150) << g.id;
    EXPECT_EQ(static_cast<long>(r.value.size()) - (r.value[0] == '0' ? 2 : 1), kDigits) << g.id;
    EXPECT_FALSE(r.low_confidence) << g.id;
  }
}

TEST(Scan, RoundTripThreshold) {
  for (const auto& r : golden_reports()) {
    ASSERT_TRUE(r.form) << r.id;
    Real back = evaluate_closed_form(*r.form, kDigits);
    EXPECT_LT(diff_log10(back, Real::parse(r.value, kDigits)), 1 - 0.8 * kDigits) << r.id;
    EXPECT_LT(r.confirm_residual_log10, -0.8 * 240) << r.id;
  }
}

TEST(Scan, ExponentDenominatorsOnGolden) {
  for (const auto& g : golden_entries()) {
    EXPECT_EQ(BigInt(24 % g.form.exp_pi.get_den()), 0) << g.id;
    EXPECT_EQ(BigInt(8 % g.form.two_exp.get_den()), 0) << g.id;
  }
}

TEST(Scan, Deterministic) {
  auto seqs = golden_sequences();
  seqs.resize(4);
  auto a = scan(seqs, {}, kDigits, kHeight);
  ScanOptions opts;
  opts.jobs = 3;
  auto b = scan(seqs, {}, kDigits, kHeight, opts);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(to_json_line(a[i]), to_json_line(b[i]));
}

TEST(Scan, EmptyList) { EXPECT_TRUE(scan({}, {}, kDigits, kHeight).empty()); }

TEST(Scan, FailuresAreIsolated) {
  std::vector<IntegerSequence> seqs{load_fixture("A000122"), IntegerSequence{}, load_fixture("A000143")};
  seqs[1].id = "A999999";
  auto reports = scan(seqs, {}, kDigits, kHeight);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].outcome, Outcome::Recognized);
  EXPECT_EQ(reports[1].outcome, Outcome::Error);
  EXPECT_EQ(reports[1].error, ErrorKind::InvalidArgument);
  EXPECT_EQ(reports[2].outcome, Outcome::Recognized);
}

TEST(Scan, NonPositiveSumIsAnError) {
  IntegerSequence s;
  s.id = "A000001";
  s.terms = {BigInt(-1), BigInt(1)};
  auto r = recognize_sequence(s, {}, kDigits, kHeight);
  EXPECT_EQ(r.outcome, Outcome::Error);
  EXPECT_EQ(r.error, ErrorKind::NonPositiveValue);
}

TEST(Scan, PrimesGiveNone) {
  auto r = recognize_sequence(load_fixture("A000040"), {}, kDigits, kHeight);
  EXPECT_EQ(r.outcome, Outcome::None);
  EXPECT_GT(r.exclusion_log10, 0);
}

TEST(Scan, AbsoluteOffsetMode) {
  ScanOptions opts;
  opts.offset_mode = OffsetMode::Absolute;
  auto r = recognize_sequence(load_fixture("A000594"), {}, kDigits, kHeight, opts);
  ASSERT_EQ(r.outcome, Outcome::Recognized);
  EXPECT_EQ(*r.form, monomial(Rational(0), Rational(6), Rational(-9), Rational(-24)));
}

TEST(Scan, Base5Catalog) {
  ScanOptions opts;
  opts.catalog_mode = CatalogMode::Base5;
  auto r = recognize_sequence(load_fixture("A000712"), {}, kDigits, kHeight, opts);
  ASSERT_EQ(r.outcome, Outcome::Recognized);
  EXPECT_EQ(r.basis.size(), 6u);
  EXPECT_EQ(r.formula, "e^(-Pi/12) * 2^(3/4) * Gamma(3/4)^2 / Pi^(1/2)");
}

TEST(Literal, LargeHeightIsLowConfidence) {
  // 2^(1/20011): relation height 20011 > 10^4.
  Real v = pow(Real(2, kDigits + 10), Rational(1, 20011)).rounded(kDigits);
  auto r = recognize_literal("x", v, kDigits, kHeight);
  ASSERT_EQ(r.outcome, Outcome::Recognized);
  EXPECT_TRUE(r.low_confidence);
  EXPECT_EQ(r.form->two_exp, Rational(1, 20011));
}

TEST(Report, JsonRoundTrip) {
  for (const auto& r : golden_reports()) {
    std::string line = to_json_line(r);
    EXPECT_EQ(line.rfind("{\"id\":", 0), 0u);
    auto parsed = parse_json_line(line);
    EXPECT_EQ(to_json_line(parsed), line);
    ASSERT_TRUE(parsed.form);
    EXPECT_EQ(*parsed.form, *r.form);
  }
  auto bad = recognize_sequence(IntegerSequence{}, {}, kDigits, kHeight);
  EXPECT_EQ(to_json_line(parse_json_line(to_json_line(bad))), to_json_line(bad));
  EXPECT_THROW(parse_json_line("{not json"), Error);
  EXPECT_THROW(parse_json_line("{\"id\": 1}"), Error);
}
