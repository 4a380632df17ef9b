#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "expi/error.hpp"
#include "expi/oeis.hpp"

namespace expi {

namespace {

class HttpsTransport final : public Transport {
 public:
  explicit HttpsTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    const std::string scheme = "https://";
    if (url.rfind(scheme, 0) != 0) throw Error(ErrorKind::InvalidArgument, "only https URLs are supported: " + url);
    auto slash = url.find('/', scheme.size());
    std::string host = url.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : url.substr(slash);

    httplib::Client client(host);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    client.set_default_headers({{"User-Agent", "expi/0.1 (b-file fetcher)"}});
    auto res = client.Get(path);
    if (!res) {
      throw Error(ErrorKind::NetworkError, "GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<Transport> make_https_transport(std::chrono::seconds timeout) {
  return std::make_unique<HttpsTransport>(timeout);
}

}  // namespace expi
