#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "expi/baseexp.hpp"
#include "expi/constants.hpp"
#include "expi/error.hpp"
#include "expi/oeis.hpp"
#include "expi/recognizer.hpp"
#include "expi/series.hpp"
#include "expi/special.hpp"

namespace expi::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
  long digits = 160;
  std::size_t max_terms = 2000;
  std::string max_height = "1000000";
  std::string catalog = "full17";
  std::string cache_dir;
  bool strict = false;
  unsigned jobs = 1;
  std::string k = "1";
  std::string s = "0";
  std::string offset_mode = "first-term";
  bool offline = false;
};

class OfflineTransport final : public Transport {
 public:
  HttpResponse get(const std::string& url) override {
    throw Error(ErrorKind::NetworkError, "offline: " + url + " is not in the cache");
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NetworkError:
      return kNetworkError;
    case ErrorKind::PrecisionTooLow:
    case ErrorKind::DivergenceRisk:
    case ErrorKind::InsufficientTerms:
    case ErrorKind::SelfCheckFailed:
    case ErrorKind::NonConvergence:
    case ErrorKind::MismatchAgainstCatalog:
    case ErrorKind::PrecisionExhausted:
      return kPrecisionError;
    default:
      return kInputError;
  }
}

Rational parse_rational_flag(const std::string& text, const char* flag) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0) {
    throw Error(ErrorKind::InvalidArgument, std::string("--") + flag + " expects a rational, got '" + text + "'");
  }
  r.canonicalize();
  return r;
}

BigInt parse_height(const std::string& text) {
  BigInt h;
  if (h.set_str(text, 10) != 0) {
    // Accept 1e6 style.
    auto e = text.find_first_of("eE");
    if (e == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--max-height expects an integer");
    BigInt base;
    if (base.set_str(text.substr(0, e), 10) != 0) {
      throw Error(ErrorKind::InvalidArgument, "--max-height expects an integer");
    }
    unsigned long exponent = std::stoul(text.substr(e + 1));
    BigInt ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, exponent);
    h = base * ten;
  }
  if (h <= 0) throw Error(ErrorKind::InvalidArgument, "--max-height must be positive");
  return h;
}

// "extended=PATH" reads one Gamma argument p/q per line ('#' comments) and
// adds them to the 17-entry list.
void apply_catalog(const std::string& spec, ScanOptions& opts) {
  if (spec == "full17") {
    opts.catalog_mode = CatalogMode::Full17;
  } else if (spec == "base5") {
    opts.catalog_mode = CatalogMode::Base5;
  } else if (spec.rfind("extended=", 0) == 0) {
    opts.catalog_mode = CatalogMode::Full17;
    std::istringstream in(read_file(spec.substr(9)));
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      std::string tok;
      if (!(fields >> tok)) continue;
      Rational r = parse_rational_flag(tok, "catalog");
      if (r <= 0 || r >= 1) throw Error(ErrorKind::InvalidArgument, "catalog Gamma arguments must lie in (0, 1)");
      opts.extra_gamma_args.push_back(r);
    }
  } else {
    throw Error(ErrorKind::InvalidArgument, "--catalog expects base5, full17 or extended=PATH");
  }
}

struct Context {
  Config cfg;
  EvalPoint point;
  BigInt max_height;
  ScanOptions options;
  fs::path cache_dir;
};

Context make_context(const Config& cfg) {
  Context ctx;
  ctx.cfg = cfg;
  if (cfg.digits < 1) throw Error(ErrorKind::InvalidArgument, "--digits must be positive");
  ctx.point.k = parse_rational_flag(cfg.k, "k");
  ctx.point.s = parse_rational_flag(cfg.s, "s");
  ctx.point.validate();
  ctx.max_height = parse_height(cfg.max_height);
  apply_catalog(cfg.catalog, ctx.options);
  ctx.options.strict = cfg.strict;
  ctx.options.jobs = std::max(1u, cfg.jobs);
  if (cfg.offset_mode == "first-term") {
    ctx.options.offset_mode = OffsetMode::FirstTermAtZero;
  } else if (cfg.offset_mode == "absolute") {
    ctx.options.offset_mode = OffsetMode::Absolute;
  } else {
    throw Error(ErrorKind::InvalidArgument, "--offset-mode expects first-term or absolute");
  }
  ctx.cache_dir = cfg.cache_dir.empty() ? cache_dir_from_env() : fs::path(cfg.cache_dir);
  return ctx;
}

void require_recognition_digits(const Config& cfg) {
  if (cfg.digits < 30) throw Error(ErrorKind::InvalidArgument, "recognition needs --digits >= 30");
}

bool looks_like_decimal(const std::string& s) {
  static const std::string chars = "0123456789.-+eE";
  return !s.empty() && s.find_first_not_of(chars) == std::string::npos &&
         s.find_first_of("0123456789") != std::string::npos;
}

// A source is an OEIS id (cache/fetch), a b-file path, or a decimal literal.
using Source = std::variant<IntegerSequence, Real>;

Source load_source(const std::string& token, const Context& ctx, long literal_digits) {
  if (is_valid_oeis_id(token)) {
    OfflineTransport offline;
    FetchOptions fo;
    fo.max_terms = ctx.cfg.max_terms;
    if (ctx.cfg.offline) fo.transport = &offline;
    return fetch_sequence(token, ctx.cache_dir, fo);
  }
  if (fs::is_regular_file(token)) {
    std::string stem = fs::path(token).stem().string();
    std::string id;
    if (stem.size() >= 7 && stem[0] == 'b' && is_valid_oeis_id("A" + stem.substr(1))) id = "A" + stem.substr(1);
    return to_sequence(parse_bfile(read_file(token), ctx.cfg.strict, id), ctx.cfg.max_terms);
  }
  if (looks_like_decimal(token)) {
    try {
      return Real::parse(token, literal_digits);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorKind::InvalidArgument, "'" + token + "' is not an OEIS id, a b-file, or a decimal number");
}

std::string label_for(const std::string& token, const Source& src) {
  if (const auto* seq = std::get_if<IntegerSequence>(&src)) return seq->id.value_or(token);
  return token;
}

RecognitionReport error_report(const std::string& id, const Context& ctx, const Error& e) {
  RecognitionReport r;
  r.id = id;
  r.k = ctx.point.k;
  r.s = ctx.point.s;
  r.digits = ctx.cfg.digits;
  r.outcome = Outcome::Error;
  r.error = e.kind();
  r.error_message = e.what();
  return r;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_constants(const Context& ctx, std::ostream& out) {
  ConstantCatalog cat = ConstantCatalog::build(ctx.cfg.digits, ctx.options.catalog_mode, ctx.options.extra_gamma_args);
  for (const auto& e : cat.entries()) out << e.name << "\t" << to_significant(e.value, ctx.cfg.digits) << "\n";
  return kOk;
}

int cmd_recognize(const Context& ctx, const std::string& token, std::ostream& out) {
  require_recognition_digits(ctx.cfg);
  RecognitionReport report;
  try {
    Source src = load_source(token, ctx, ctx.cfg.digits);
    if (auto* seq = std::get_if<IntegerSequence>(&src)) {
      report = recognize_sequence(*seq, ctx.point, ctx.cfg.digits, ctx.max_height, ctx.options);
    } else {
      report = recognize_literal(token, std::get<Real>(src), ctx.cfg.digits, ctx.max_height, ctx.options);
    }
  } catch (const Error& e) {
    report = error_report(token, ctx, e);
  }
  out << to_json_line(report) << "\n";
  out << "formula: " << (report.outcome == Outcome::Recognized ? report.formula : std::string("none")) << "\n";
  out << "value: " << (report.value.empty() ? std::string("none") : report.value) << "\n";
  if (report.outcome == Outcome::Error) return exit_code_for(*report.error);
  return kOk;
}

std::vector<std::string> read_list(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> items;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string tok;
    if (fields >> tok) items.push_back(tok);
  }
  return items;
}

int cmd_scan(const Context& ctx, const std::string& list, std::ostream& out) {
  require_recognition_digits(ctx.cfg);
  const auto items = read_list(list);

  std::vector<std::optional<RecognitionReport>> reports(items.size());
  std::vector<IntegerSequence> seqs;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      Source src = load_source(items[i], ctx, ctx.cfg.digits);
      if (auto* seq = std::get_if<IntegerSequence>(&src)) {
        seqs.push_back(std::move(*seq));
        where.push_back(i);
      } else {
        reports[i] = recognize_literal(items[i], std::get<Real>(src), ctx.cfg.digits, ctx.max_height, ctx.options);
      }
    } catch (const Error& e) {
      reports[i] = error_report(items[i], ctx, e);
    }
  }
  auto scanned = scan(seqs, ctx.point, ctx.cfg.digits, ctx.max_height, ctx.options);
  for (std::size_t j = 0; j < scanned.size(); ++j) reports[where[j]] = std::move(scanned[j]);

  std::size_t recognized = 0, none = 0, errors = 0;
  std::map<std::string, std::size_t> by_signature;
  for (const auto& r : reports) {
    out << to_json_line(*r) << "\n";
    switch (r->outcome) {
      case Outcome::Recognized: {
        ++recognized;
        std::string sig;
        for (const auto& name : r->form->signature()) sig += (sig.empty() ? "" : ",") + name;
        ++by_signature[sig.empty() ? std::string("rational") : sig];
        break;
      }
      case Outcome::None:
        ++none;
        break;
      case Outcome::Error:
        ++errors;
        break;
    }
  }
  out << "# summary: " << reports.size() << " sequences, " << recognized << " recognized, " << none << " none, "
      << errors << " error\n";
  std::vector<std::pair<std::string, std::size_t>> groups(by_signature.begin(), by_signature.end());
  std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [sig, n] : groups) out << "# " << n << " sequences refer to " << sig << "\n";
  return kOk;
}

int cmd_expand(const Context& ctx, const std::string& token, std::size_t n_digits, std::ostream& out) {
  Source src = load_source(token, ctx, ctx.cfg.digits);
  Real x(ctx.cfg.digits);
  if (auto* seq = std::get_if<IntegerSequence>(&src)) {
    EvalPoint p = ctx.point;
    if (ctx.options.offset_mode == OffsetMode::FirstTermAtZero) p.s -= seq->offset;
    x = evaluate(*seq, p, ctx.cfg.digits, EvalOptions{ctx.cfg.strict}).value;
  } else {
    x = std::get<Real>(src);
  }
  BaseExpansion e = expand(x, n_digits, ctx.cfg.digits,
                           ctx.cfg.strict ? BoundaryPolicy::Strict : BoundaryPolicy::SnapToBoundary);
  out << to_string(e) << "\n";
  return kOk;
}

int cmd_tables(const Context& ctx, const std::string& which, long n_max, long digits, std::ostream& out) {
  std::vector<TableRow> rows;
  if (which == "rr") {
    rows = rr_table(n_max, digits);
  } else if (which == "theta") {
    rows = theta_table(n_max, digits);
  } else {
    throw Error(ErrorKind::InvalidArgument, "tables expects rr or theta");
  }
  (void)ctx;
  out << "n\tvalue at e^(-Pi/n)\n" << format_table(rows, digits);
  return kOk;
}

std::string log_line(const NewtonLog& log) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << log.initial_digits;
  for (const auto& step : log.steps) s << " " << step.correct_digits;
  return s.str();
}

int cmd_gamma34(const Context& ctx, long m, std::ostream& out) {
  Gamma34Result r = gamma34_pipeline(m, ctx.cfg.digits);
  out << "m = " << m << "\n";
  out << "theta terms: " << r.theta_terms << "\n";
  out << "newton sqrt(pi) digits: " << log_line(r.pi_sqrt_log) << "\n";
  out << "newton pi^(1/4) digits: " << log_line(r.pi_quarter_log) << "\n";
  out << "newton A_m digits: " << log_line(r.a_m_log) << "\n";
  out << "Gamma(3/4) = " << to_significant(r.value, ctx.cfg.digits) << "\n";
  return kOk;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--digits", cfg.digits, "Working precision in decimal digits");
  sub->add_option("--max-terms", cfg.max_terms, "Terms read per sequence");
  sub->add_option("--max-height", cfg.max_height, "Largest relation coefficient searched");
  sub->add_option("--catalog", cfg.catalog, "base5, full17 or extended=PATH");
  sub->add_option("--cache-dir", cfg.cache_dir, "b-file cache (default $EXPI_CACHE_DIR)");
  sub->add_flag("--strict", cfg.strict, "Fail instead of degrading or guessing");
  sub->add_option("--jobs", cfg.jobs, "Parallel scan workers");
  sub->add_option("--k", cfg.k, "Evaluation point q = exp(-k Pi), k rational");
  sub->add_option("--s", cfg.s, "Prefactor exponent: the sum is multiplied by q^s");
  sub->add_option("--offset-mode", cfg.offset_mode, "first-term (first term at q^0) or absolute (a(n) at q^n)");
  sub->add_flag("--offline", cfg.offline, "Never touch the network");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate integer sequences at exp(-k Pi) and recognize the values"};
  app.require_subcommand(1);
  Config cfg;

  auto* constants = app.add_subcommand("constants", "Print the constant catalog");
  add_common(constants, cfg);

  std::string source;
  auto* recognize = app.add_subcommand("recognize", "Recognize one sequence id, b-file or decimal");
  recognize->add_option("source", source)->required();
  add_common(recognize, cfg);

  std::string list;
  auto* scan_cmd = app.add_subcommand("scan", "Recognize every entry of a list file");
  scan_cmd->add_option("list", list)->required();
  add_common(scan_cmd, cfg);

  std::string expand_source;
  std::size_t n_digits = 36;
  auto* expand_cmd = app.add_subcommand("expand", "Digits of a number in base e^Pi");
  expand_cmd->add_option("source", expand_source)->required();
  expand_cmd->add_option("n", n_digits, "Number of digits after the integer part");
  add_common(expand_cmd, cfg);

  std::string which;
  long n_max = 0;
  long table_digits = 32;
  auto* tables = app.add_subcommand("tables", "Tables of R or theta_3 at exp(-Pi/n)");
  tables->add_option("which", which, "rr or theta")->required();
  tables->add_option("n_max", n_max, "Rows (default 24 for rr, 17 for theta)");
  tables->add_option("--digits", table_digits, "Significant digits printed");

  long m = 1;
  auto* gamma = app.add_subcommand("gamma34", "Gamma(3/4) through theta_3(exp(-m Pi))");
  gamma->add_option("m", m)->required();
  add_common(gamma, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    Context ctx = make_context(cfg);
    if (*constants) return cmd_constants(ctx, out);
    if (*recognize) return cmd_recognize(ctx, source, out);
    if (*scan_cmd) return cmd_scan(ctx, list, out);
    if (*expand_cmd) return cmd_expand(ctx, expand_source, n_digits, out);
    if (*tables) {
      if (n_max == 0) n_max = which == "rr" ? 24 : 17;
      return cmd_tables(ctx, which, n_max, table_digits, out);
    }
    if (*gamma) return cmd_gamma34(ctx, m, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kInputError;
}

}  // namespace expi::cli
