#include "expi/oeis.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <json.hpp>

#include "expi/error.hpp"

namespace expi {

namespace {

bool is_integer_token(const std::string& s) {
  std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt to_bigint(const std::string& s) { return BigInt(s[0] == '+' ? s.substr(1) : s); }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool looks_like_html(const std::string& body) {
  std::string head = trim(body.substr(0, 512));
  for (auto& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return head.rfind("<!doctype", 0) == 0 || head.rfind("<html", 0) == 0 || head.find("<head") != std::string::npos;
}

}  // namespace

// ---------------------------------------------------------------------------
// b-files

BFile parse_bfile(const std::string& text, bool strict, const std::string& id) {
  BFile out;
  out.id = id;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    std::string index, term, extra;
    fields >> index >> term;
    if (fields >> extra || !is_integer_token(index) || !is_integer_token(term)) {
      throw LineError(ErrorKind::MalformedLine, number, "malformed b-file line " + std::to_string(number) + ": " + t);
    }
    BigInt idx = to_bigint(index);
    if (!idx.fits_slong_p()) {
      throw LineError(ErrorKind::MalformedLine, number, "index out of range on line " + std::to_string(number));
    }
    long n = idx.get_si();
    if (!out.rows.empty()) {
      long prev = out.rows.back().first;
      if (n <= prev) {
        throw LineError(ErrorKind::NonContiguousIndex, number,
                        "index " + std::to_string(n) + " does not increase on line " + std::to_string(number));
      }
      if (strict && n != prev + 1) {
        throw LineError(ErrorKind::NonContiguousIndex, number,
                        "index jumps from " + std::to_string(prev) + " to " + std::to_string(n) + " on line " +
                            std::to_string(number));
      }
    }
    out.rows.emplace_back(n, to_bigint(term));
  }
  return out;
}

std::string serialize(const BFile& bfile) {
  std::string out;
  for (const auto& [n, a] : bfile.rows) out += std::to_string(n) + " " + a.get_str() + "\n";
  return out;
}

IntegerSequence to_sequence(const BFile& bfile, std::size_t max_terms) {
  IntegerSequence seq;
  if (!bfile.id.empty()) seq.id = bfile.id;
  if (bfile.rows.empty()) return seq;
  seq.offset = bfile.rows.front().first;
  for (std::size_t i = 0; i < bfile.rows.size() && seq.terms.size() < max_terms; ++i) {
    if (bfile.rows[i].first != seq.offset + static_cast<long>(i)) break;
    seq.terms.push_back(bfile.rows[i].second);
  }
  return seq;
}

BFile to_bfile(const IntegerSequence& seq) {
  BFile out;
  out.id = seq.id.value_or("");
  for (std::size_t i = 0; i < seq.terms.size(); ++i) {
    out.rows.emplace_back(seq.offset + static_cast<long>(i), seq.terms[i]);
  }
  return out;
}

StrippedLine parse_stripped_line(const std::string& line) {
  std::string t = trim(line);
  auto bad = [&] { return LineError(ErrorKind::MalformedLine, 1, "malformed stripped line: " + t); };
  auto space = t.find(' ');
  if (space == std::string::npos) throw bad();
  std::string id = t.substr(0, space);
  if (!is_valid_oeis_id(id)) throw bad();
  std::string rest = trim(t.substr(space));
  if (rest.size() < 2 || rest.front() != ',' || rest.back() != ',') throw bad();
  StrippedLine out;
  out.sequence.id = id;
  std::string body = rest.substr(1, rest.size() - 2);
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    std::string tok = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!is_integer_token(tok)) throw bad();
    out.sequence.terms.push_back(to_bigint(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  out.warning = id + ": stripped data has no offset; assuming offset 0";
  return out;
}

// ---------------------------------------------------------------------------
// Rate limiting

RateLimiter::RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}

void RateLimiter::wait() {
  std::unique_lock<std::mutex> lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  if (!first_ && now < next_) {
    auto until = next_;
    next_ = until + interval_;
    lock.unlock();
    std::this_thread::sleep_until(until);
    return;
  }
  first_ = false;
  next_ = now + interval_;
}

RateLimiter& default_rate_limiter() {
  static RateLimiter limiter;
  return limiter;
}

// ---------------------------------------------------------------------------
// Cache and fetch

std::string bfile_name(const std::string& id) { return "b" + id.substr(1) + ".txt"; }

std::string bfile_url(const std::string& id) { return "https://oeis.org/" + id + "/" + bfile_name(id); }

std::filesystem::path cache_dir_from_env() {
  const char* v = std::getenv("EXPI_CACHE_DIR");
  return v ? std::filesystem::path(v) : std::filesystem::path();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  static std::atomic<unsigned long> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot rename into " + path.string());
  }
}

IntegerSequence fetch_sequence(const std::string& id, const std::filesystem::path& cache_dir,
                               const FetchOptions& options) {
  if (!is_valid_oeis_id(id)) throw Error(ErrorKind::InvalidArgument, "malformed OEIS id: " + id);
  const auto file = cache_dir / bfile_name(id);

  auto parse = [&](const std::string& bytes) {
    try {
      return to_sequence(parse_bfile(bytes, true, id), options.max_terms);
    } catch (const LineError& e) {
      throw Error(ErrorKind::ParseError, id + ": " + e.what());
    }
  };

  if (!cache_dir.empty() && std::filesystem::exists(file)) return parse(read_file(file));

  std::unique_ptr<Transport> owned;
  Transport* transport = options.transport;
  if (!transport) {
    owned = make_https_transport();
    transport = owned.get();
  }
  RateLimiter& limiter = options.limiter ? *options.limiter : default_rate_limiter();
  limiter.wait();

  const std::string url = bfile_url(id);
  HttpResponse resp = transport->get(url);
  if (resp.status == 404) throw Error(ErrorKind::NotFound, id + ": no b-file at " + url);
  if (resp.status != 200) {
    throw Error(ErrorKind::NetworkError, id + ": HTTP status " + std::to_string(resp.status));
  }
  if (looks_like_html(resp.body)) throw Error(ErrorKind::NotFound, id + ": server returned a page, not a b-file");

  IntegerSequence seq = parse(resp.body);
  if (seq.terms.empty()) throw Error(ErrorKind::ParseError, id + ": b-file has no terms");
  if (!cache_dir.empty()) {
    write_file_atomic(file, resp.body);
    nlohmann::ordered_json meta{{"id", id}, {"url", url}, {"fetched", utc_now()}, {"bytes", resp.body.size()}};
    auto meta_path = cache_dir / ("b" + id.substr(1) + ".meta.json");
    write_file_atomic(meta_path, meta.dump(2) + "\n");
  }
  return seq;
}

}  // namespace expi
