#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "expi/real.hpp"
#include "expi/series.hpp"

namespace expi {

struct BFile {
  std::string id;
  std::vector<std::pair<long, BigInt>> rows;
  friend bool operator==(const BFile&, const BFile&) = default;
};

/// Parse "index term" lines; blank lines and '#' lines are skipped.
/// Throws LineError(MalformedLine) for a bad line, and LineError
/// (NonContiguousIndex) for a gap when strict.
BFile parse_bfile(const std::string& text, bool strict = true, const std::string& id = "");
std::string serialize(const BFile& bfile);

/// Offset = first index. Stops at the first gap (only possible for files
/// parsed non-strict) or after max_terms.
IntegerSequence to_sequence(const BFile& bfile, std::size_t max_terms = SIZE_MAX);
BFile to_bfile(const IntegerSequence& seq);

struct StrippedLine {
  IntegerSequence sequence;
  std::string warning;
};

/// "A000122 ,1,2,0,0,2," from the OEIS stripped dump. The format carries no
/// offset, so the offset is 0 and `warning` says so.
StrippedLine parse_stripped_line(const std::string& line);

// ---------------------------------------------------------------------------
// Fetching

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws Error(NetworkError) when no response could be obtained.
  virtual HttpResponse get(const std::string& url) = 0;
};

// HTTPS GET via cpp-httplib.
std::unique_ptr<Transport> make_https_transport(std::chrono::seconds timeout = std::chrono::seconds(30));

/// Spaces out calls to wait() by at least `interval`. Thread safe.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval = std::chrono::milliseconds(1000));
  void wait();
  std::chrono::milliseconds interval() const noexcept { return interval_; }

 private:
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_;
  bool first_ = true;
};

RateLimiter& default_rate_limiter();

std::string bfile_url(const std::string& id);
// "b000122.txt"
std::string bfile_name(const std::string& id);

// $EXPI_CACHE_DIR, or empty.
std::filesystem::path cache_dir_from_env();

struct FetchOptions {
  std::size_t max_terms = 2000;
  // Defaults to an HTTPS transport created on first use.
  Transport* transport = nullptr;
  // Defaults to default_rate_limiter().
  RateLimiter* limiter = nullptr;
};

/// Read the b-file for `id` from the cache, downloading it first on a miss.
/// The cache holds the raw upstream bytes as <dir>/bNNNNNN.txt and a
/// bNNNNNN.meta.json with the URL and fetch time, both written atomically.
/// Throws NetworkError, NotFound (404 or an HTML page) or ParseError.
IntegerSequence fetch_sequence(const std::string& id, const std::filesystem::path& cache_dir,
                               const FetchOptions& options = {});

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace expi
