#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "convbrowse/fetch.hpp"
#include "convbrowse/landmarks.hpp"

namespace convbrowse {

struct CrawlConfig {
  std::string seed;
  int max_depth = 3;
  int max_pages = 100;
  std::int64_t ttl_seconds = kDefaultTtlSeconds;
  int worker_count = 4;

  // Throws std::invalid_argument when a bound is out of range.
  void validate() const;
  bool operator==(const CrawlConfig&) const = default;
};

struct LinkOccurrence {
  std::string source_url;
  std::string target_url;  // normalized
  std::string anchor_text;
  int dom_index = 0;  // position among the page's links, document order
  Region region = Region::Other;

  bool operator==(const LinkOccurrence&) const = default;
};

struct CrawlRecord {
  std::string url;
  int depth = 0;
  std::vector<LinkOccurrence> outlinks;
  std::string title;
  int fetch_status = 0;  // HTTP status, or 0 when the request never completed
  std::string error;     // empty on success

  bool ok() const { return error.empty(); }
  bool operator==(const CrawlRecord&) const = default;
};

class CrawlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One occurrence per <a href> that resolves to an http(s) URL other than a
// bare fragment. Anchor text is the visible text, or the alt text of the
// anchor's only image when it has no text.
std::vector<LinkOccurrence> extract_outlinks(const PageSource& source);

// <title>, falling back to the first <h1>; empty when neither exists.
std::string extract_title(const PageSource& source);

// Breadth-first site traversal. The frontier is ordered by depth, then by
// discovery (parent visit order, then link position); pages are fetched in
// parallel batches but committed in frontier order, so the result does not
// depend on worker_count. Links leaving the seed's registrable host are
// recorded but never followed.
class Crawler {
 public:
  using FetchFn = std::function<PageSource(const std::string& url)>;

  explicit Crawler(FetchFn fetch);

  // Throws CrawlError when the seed cannot be fetched.
  std::vector<CrawlRecord> crawl(const CrawlConfig& config) const;

 private:
  FetchFn fetch_;
};

}  // namespace convbrowse
