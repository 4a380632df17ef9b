#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <random>

#include "expi/error.hpp"
#include "expi/oeis.hpp"
#include "fixtures.hpp"

using namespace expi;
namespace fs = std::filesystem;

namespace {

class FakeTransport : public Transport {
 public:
  std::map<std::string, HttpResponse> responses;
  std::vector<std::string> requested;

  HttpResponse get(const std::string& url) override {
    requested.push_back(url);
    auto it = responses.find(url);
    if (it == responses.end()) return {404, "not here"};
    return it->second;
  }
};

class FailingTransport : public Transport {
 public:
  HttpResponse get(const std::string&) override { throw Error(ErrorKind::NetworkError, "offline"); }
};

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("expi_test_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

std::vector<BigInt> ints(std::initializer_list<long> v) {
  std::vector<BigInt> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

RateLimiter& no_wait() {
  static RateLimiter limiter(std::chrono::milliseconds(0));
  return limiter;
}

}  // namespace

TEST(ParseBFile, Rows) {
  auto b = parse_bfile("0 1\n1 2\n2 0\n");
  ASSERT_EQ(b.rows.size(), 3u);
  EXPECT_EQ(b.rows[0], std::make_pair(0L, BigInt(1)));
  EXPECT_EQ(b.rows[1], std::make_pair(1L, BigInt(2)));
  EXPECT_EQ(b.rows[2], std::make_pair(2L, BigInt(0)));
}

TEST(ParseBFile, CommentsAndNegativeTerms) {
  auto seq = to_sequence(parse_bfile("# comment\n1 5\n\n2 -7\n"));
  EXPECT_EQ(seq.offset, 1);
  EXPECT_EQ(seq.terms, ints({5, -7}));
}

TEST(ParseBFile, ToleratesCrlfAndTabs) {
  auto b = parse_bfile("0\t1\r\n1   2\r\n");
  EXPECT_EQ(b.rows.size(), 2u);
}

TEST(ParseBFile, BigTerms) {
  auto b = parse_bfile("5 123456789012345678901234567890\n");
  EXPECT_EQ(b.rows[0].second, BigInt("123456789012345678901234567890"));
}

TEST(ParseBFile, MalformedLineReportsLineNumber) {
  try {
    parse_bfile("0 1\n# fine\n1 x\n");
    FAIL();
  } catch (const LineError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedLine);
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_EQ(kind_of([] { parse_bfile("0 1 2\n"); }), ErrorKind::MalformedLine);
  EXPECT_EQ(kind_of([] { parse_bfile("7\n"); }), ErrorKind::MalformedLine);
}

TEST(ParseBFile, GapsStrictAndLenient) {
  EXPECT_EQ(kind_of([] { parse_bfile("0 1\n2 3\n"); }), ErrorKind::NonContiguousIndex);
  auto b = parse_bfile("0 1\n1 4\n3 3\n", false);
  EXPECT_EQ(b.rows.size(), 3u);
  EXPECT_EQ(to_sequence(b).terms, ints({1, 4}));
}

TEST(ParseBFile, FixtureThetaThree) {
  auto seq = expi::testing::load_fixture("A000122");
  EXPECT_EQ(seq.offset, 0);
  std::vector<BigInt> head(seq.terms.begin(), seq.terms.begin() + 10);
  EXPECT_EQ(head, ints({1, 2, 0, 0, 2, 0, 0, 0, 0, 2}));
}

TEST(ParseBFile, RoundTripOnFixtures) {
  for (const auto& entry : fs::directory_iterator(expi::testing::bfile_dir())) {
    auto b = parse_bfile(read_file(entry.path()));
    EXPECT_EQ(parse_bfile(serialize(b)), b) << entry.path();
    EXPECT_EQ(to_bfile(to_sequence(b)).rows, b.rows) << entry.path();
  }
}

TEST(ToSequence, MaxTerms) {
  auto b = parse_bfile("3 1\n4 1\n5 2\n");
  auto s = to_sequence(b, 2);
  EXPECT_EQ(s.offset, 3);
  EXPECT_EQ(s.terms.size(), 2u);
}

TEST(StrippedLine, Examples) {
  auto a = parse_stripped_line("A000012 ,1,1,1,1,");
  EXPECT_EQ(a.sequence.id, "A000012");
  EXPECT_EQ(a.sequence.terms, ints({1, 1, 1, 1}));
  EXPECT_EQ(a.sequence.offset, 0);
  EXPECT_FALSE(a.warning.empty());
  auto b = parse_stripped_line("A000122 ,1,2,0,0,2,");
  EXPECT_EQ(b.sequence.terms, ints({1, 2, 0, 0, 2}));
  EXPECT_EQ(parse_stripped_line("A000594 ,1,-24,252,").sequence.terms, ints({1, -24, 252}));
  for (const char* bad : {"garbage", "A000012 1,1,1", "A12 ,1,2,", "A000012 ,1,x,", ""}) {
    EXPECT_EQ(kind_of([&] { parse_stripped_line(bad); }), ErrorKind::MalformedLine) << bad;
  }
}

TEST(Urls, Layout) {
  EXPECT_EQ(bfile_name("A000122"), "b000122.txt");
  EXPECT_EQ(bfile_url("A000122"), "https://oeis.org/A000122/b000122.txt");
}

TEST(Fetch, DownloadsOnceThenServesFromCache) {
  TempDir dir;
  FakeTransport t;
  t.responses[bfile_url("A000122")] = {200, "# theta\n0 1\n1 2\n2 0\n3 0\n4 2\n"};
  FetchOptions opts;
  opts.transport = &t;
  opts.limiter = &no_wait();
  auto first = fetch_sequence("A000122", dir.path(), opts);
  EXPECT_EQ(first.terms, ints({1, 2, 0, 0, 2}));
  EXPECT_EQ(t.requested.size(), 1u);
  EXPECT_TRUE(fs::exists(dir.path() / "b000122.txt"));
  EXPECT_TRUE(fs::exists(dir.path() / "b000122.meta.json"));
  const std::string bytes = read_file(dir.path() / "b000122.txt");
  auto second = fetch_sequence("A000122", dir.path(), opts);
  EXPECT_EQ(t.requested.size(), 1u);
  EXPECT_EQ(second.terms, first.terms);
  EXPECT_EQ(read_file(dir.path() / "b000122.txt"), bytes);
  // Nothing left behind from the atomic writes.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 2u);
}

TEST(Fetch, Truncation) {
  TempDir dir;
  FakeTransport t;
  t.responses[bfile_url("A000027")] = {200, "1 1\n2 2\n3 3\n4 4\n5 5\n"};
  FetchOptions opts;
  opts.transport = &t;
  opts.limiter = &no_wait();
  opts.max_terms = 3;
  EXPECT_EQ(fetch_sequence("A000027", dir.path(), opts).terms.size(), 3u);
  opts.max_terms = 50;
  EXPECT_EQ(fetch_sequence("A000027", dir.path(), opts).terms.size(), 5u);
}

TEST(Fetch, ErrorKinds) {
  TempDir dir;
  FakeTransport t;
  t.responses[bfile_url("A000001")] = {200, "<!DOCTYPE html><html><head></head></html>"};
  t.responses[bfile_url("A000002")] = {500, "oops"};
  t.responses[bfile_url("A000003")] = {200, "0 1\n1 banana\n"};
  FetchOptions opts;
  opts.transport = &t;
  opts.limiter = &no_wait();
  EXPECT_EQ(kind_of([&] { fetch_sequence("A000000", dir.path(), opts); }), ErrorKind::NotFound);
  EXPECT_EQ(kind_of([&] { fetch_sequence("A000001", dir.path(), opts); }), ErrorKind::NotFound);
  EXPECT_EQ(kind_of([&] { fetch_sequence("A000002", dir.path(), opts); }), ErrorKind::NetworkError);
  EXPECT_EQ(kind_of([&] { fetch_sequence("A000003", dir.path(), opts); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { fetch_sequence("A00014X", dir.path(), opts); }), ErrorKind::InvalidArgument);
  FailingTransport down;
  opts.transport = &down;
  EXPECT_EQ(kind_of([&] { fetch_sequence("A000004", dir.path(), opts); }), ErrorKind::NetworkError);
  // Failures never populate the cache.
  EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Fetch, FixtureCacheNeedsNoTransport) {
  FailingTransport down;
  FetchOptions opts;
  opts.transport = &down;
  auto seq = fetch_sequence("A000594", expi::testing::bfile_dir(), opts);
  EXPECT_EQ(seq.offset, 1);
  EXPECT_EQ(seq.terms[1], -24);
}

TEST(RateLimiter, SpacesCalls) {
  RateLimiter limiter(std::chrono::milliseconds(40));
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) limiter.wait();
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GE(elapsed, std::chrono::milliseconds(120));
  EXPECT_EQ(default_rate_limiter().interval(), std::chrono::milliseconds(1000));
}

TEST(AtomicWrite, ReplacesContent) {
  TempDir dir;
  auto p = dir.path() / "x.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  EXPECT_THROW(read_file(dir.path() / "missing"), Error);
}
