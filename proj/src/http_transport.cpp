#include <httplib.h>

#include "convbrowse/fetch.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

TransportResponse HttpTransport::get(const std::string& url, const FetchConfig& config) {
  Url u = parse_url(url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (u.scheme == "https") throw FetchError(FetchErrorKind::Unsupported, url, "built without TLS support");
#endif
  httplib::Client client(u.origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  httplib::Headers headers = {{"User-Agent", config.user_agent}, {"Accept", "text/html,*/*;q=0.5"}};
  std::string target = u.path + (u.has_query ? "?" + u.query : "");
  std::string body;
  bool oversize = false;
  auto res = client.Get(
      target, headers, [](const httplib::Response&) { return true; },
      [&](const char* data, std::size_t len) {
        if (body.size() + len > config.max_body_bytes) {
          oversize = true;
          return false;
        }
        body.append(data, len);
        return true;
      });
  if (!res) {
    if (oversize) throw FetchError(FetchErrorKind::Oversize, url, "body exceeds " + std::to_string(config.max_body_bytes) + " bytes");
    auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw FetchError(FetchErrorKind::Timeout, url, httplib::to_string(err));
    }
    throw FetchError(FetchErrorKind::Network, url, httplib::to_string(err));
  }
  TransportResponse out;
  out.status = res->status;
  out.body = std::move(body);
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

}  // namespace convbrowse
