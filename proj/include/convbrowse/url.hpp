#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace convbrowse {

class UrlError : public std::runtime_error {
 public:
  UrlError(std::string input, const std::string& reason)
      : std::runtime_error("malformed URL '" + input + "': " + reason), input_(std::move(input)) {}
  const std::string& input() const noexcept { return input_; }

 private:
  std::string input_;
};

// Components of an absolute http(s) URL after normalization.
struct Url {
  std::string scheme;    // "http" or "https"
  std::string userinfo;  // without the trailing '@'
  std::string host;      // lowercased
  int port = -1;         // -1 when default or absent
  std::string path;      // always starts with '/'
  std::string query;     // without the leading '?'
  bool has_query = false;

  std::string authority() const;
  std::string origin() const;  // scheme://authority
  std::string str() const;
};

// Parses and normalizes an absolute URL. Throws UrlError.
Url parse_url(std::string_view absolute);

// Resolves `raw` against the absolute `base` and normalizes the result:
// lowercase scheme/host, no fragment, no default port, "/" for an empty
// path, dot segments removed, query kept verbatim. Throws UrlError.
std::string normalize_url(std::string_view raw, std::string_view base);
std::string normalize_url(std::string_view absolute);

// True when `raw` is nothing but a fragment reference ("#top", "#").
bool is_fragment_only(std::string_view raw);

// Host reduced to its registrable part ("www.news.site.test" -> "site.test").
// A short list of two-level public suffixes (co.uk, com.au, ...) is honored;
// IP literals and single-label hosts are returned unchanged.
std::string registrable_host(std::string_view host);

bool same_site(std::string_view url_a, std::string_view url_b);

// Last non-empty path segment of a URL, or the host for root paths.
std::string last_path_segment(std::string_view url);

}  // namespace convbrowse
