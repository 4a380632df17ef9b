#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expi/constants.hpp"
#include "expi/error.hpp"
#include "expi/real.hpp"
#include "expi/relations.hpp"
#include "expi/series.hpp"

namespace expi {

struct GammaFactor {
  Rational argument;
  Rational exponent;
  friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

/// e^{exp_pi * pi} * pi^pi_exp * 2^two_exp * 3^three_exp * 5^five_exp
///   * prod Gamma(argument)^exponent
///
/// Rationals are canonical, gamma factors sorted by argument, and factors with
/// a zero exponent omitted.
struct ClosedForm {
  Rational exp_pi{0};
  Rational pi_exp{0};
  Rational two_exp{0};
  Rational three_exp{0};
  Rational five_exp{0};
  std::vector<GammaFactor> gamma;

  bool is_empty() const;
  // Names of the constants with nonzero exponent, in catalog vocabulary.
  std::vector<std::string> signature() const;
  void normalize();
  friend bool operator==(const ClosedForm&, const ClosedForm&) = default;
};

/// Catalog indices forming a linearly independent search basis. Entries that
/// satisfy a small integer relation with earlier entries (Gamma(1/4) against
/// Gamma(3/4) by reflection, for instance) are dropped: keeping them would
/// make every search return that relation instead of one involving the
/// target. Determined once per distinct catalog layout at 200+ digits.
std::vector<std::size_t> independent_basis(const ConstantCatalog& catalog);

struct Recognition {
  std::optional<ClosedForm> form;
  std::optional<Relation> relation;     // against (log value, basis...)
  std::vector<std::string> basis_names;  // names matching relation->coeffs[1..]
  double norm_bound_log10 = 0;
  bool precision_exhausted = false;
};

/// Look for log(value) as an integer combination of the independent catalog
/// basis. Throws NonPositiveValue for value <= 0.
Recognition recognize(const Real& value, const ConstantCatalog& catalog, long digits, const BigInt& max_height);

std::string render(const ClosedForm& form);
Real evaluate_closed_form(const ClosedForm& form, long digits);

// ---------------------------------------------------------------------------
// Scan

enum class OffsetMode {
  // First supplied term multiplies q^0 whatever the OEIS offset.
  FirstTermAtZero,
  // Term a(n) multiplies q^n.
  Absolute,
};

struct ScanOptions {
  CatalogMode catalog_mode = CatalogMode::Full17;
  std::vector<Rational> extra_gamma_args;
  OffsetMode offset_mode = OffsetMode::FirstTermAtZero;
  bool strict = false;
  unsigned jobs = 1;
  // Re-verify relations at this multiple of the working precision.
  double confirm_factor = 1.5;
};

enum class Outcome { Recognized, None, Error };

std::string_view to_string(Outcome outcome);

struct RecognitionReport {
  std::string id;
  Rational k{1};
  Rational s{0};
  long digits = 0;
  std::string value;  // `digits` significant digits, truncated
  Outcome outcome = Outcome::None;
  std::optional<ClosedForm> form;
  std::string formula;
  std::vector<BigInt> relation;
  std::vector<std::string> basis;
  double residual_log10 = 0;
  double confirm_residual_log10 = 0;
  bool low_confidence = false;
  double exclusion_log10 = 0;
  std::optional<ErrorKind> error;
  std::string error_message;
};

// Heights above this make a recognition "low confidence".
inline constexpr long kLowConfidenceHeight = 10000;

/// Recognize one sequence: evaluate at the point, recognize, and re-check
/// the relation at confirm_factor * digits.
RecognitionReport recognize_sequence(const IntegerSequence& seq, const EvalPoint& point, long digits,
                                     const BigInt& max_height, const ScanOptions& options = {});

/// One report per input, in input order. A failing sequence yields an Error
/// report and does not affect the others.
std::vector<RecognitionReport> scan(const std::vector<IntegerSequence>& seqs, const EvalPoint& point,
                                    long digits, const BigInt& max_height, const ScanOptions& options = {});

/// Report for a bare decimal (no series to re-evaluate, so no confirmation).
RecognitionReport recognize_literal(const std::string& label, const Real& value, long digits,
                                    const BigInt& max_height, const ScanOptions& options = {});

/// One JSON object per line. Keys, in order:
///   id, k, s, digits, value, outcome, formula, relation, residual_log10,
///   confidence, basis, exclusion_log10, error
/// k and s are rational strings ("1", "1/2"); relation is an array of
/// decimal integer strings aligned with basis (first entry is the target
/// log); formula, relation and residual_log10 are null unless recognized;
/// confidence is "high", "low" or null; error is null or
/// {"kind": ..., "message": ...}.
std::string to_json_line(const RecognitionReport& report);
RecognitionReport parse_json_line(const std::string& line);

}  // namespace expi
