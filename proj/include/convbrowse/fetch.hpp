#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace convbrowse {

// Seconds since the Unix epoch (UTC).
using Clock = std::function<std::int64_t()>;
std::int64_t system_now();

inline constexpr std::int64_t kDefaultTtlSeconds = 24 * 60 * 60;

struct PageSource {
  std::string url;  // normalized
  std::string body;
  std::int64_t fetched_at = 0;
  int status = 0;
  std::string content_type;

  bool ok() const { return status >= 200 && status < 300; }
  bool operator==(const PageSource&) const = default;
};

enum class FetchErrorKind { InvalidUrl, Timeout, HttpStatus, Oversize, DisallowedOrigin, EmptyBody, Network, Unsupported };

const char* to_string(FetchErrorKind kind);

class FetchError : public std::runtime_error {
 public:
  FetchError(FetchErrorKind kind, std::string url, const std::string& detail, int status = 0);

  FetchErrorKind kind() const noexcept { return kind_; }
  const std::string& url() const noexcept { return url_; }
  int status() const noexcept { return status_; }

 private:
  FetchErrorKind kind_;
  std::string url_;
  int status_;
};

struct FetchConfig {
  std::chrono::milliseconds timeout{10000};
  std::string user_agent = "convbrowse/1.0 (+conversational browsing crawler)";
  std::size_t max_body_bytes = 8 * 1024 * 1024;
  // Registrable hosts that may be contacted; empty means unrestricted.
  std::set<std::string> allowed_sites;
  // Minimum gap between requests to one host (network transports only).
  std::chrono::milliseconds politeness_delay{200};
};

struct TransportResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

// Moves bytes. Policy (origins, size, status) lives in StaticFetcher.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportResponse get(const std::string& url, const FetchConfig& config) = 0;
  // Network transports are subject to the per-host politeness delay.
  virtual bool is_network() const { return true; }
};

// HTTP(S) via cpp-httplib. HTTPS requires a build with OpenSSL.
class HttpTransport final : public Transport {
 public:
  TransportResponse get(const std::string& url, const FetchConfig& config) override;
};

// Serves fixture sites from directories: "http://gazette.test/a/b.html" maps
// to <root>/a/b.html; directory paths map to index.html; a query string is
// appended to the file name verbatim ("covid.html?page=2").
class DirectoryTransport final : public Transport {
 public:
  explicit DirectoryTransport(std::shared_ptr<Transport> fallback = nullptr);

  void add_site(const std::string& origin, std::filesystem::path root);
  bool serves(const std::string& url) const;
  std::set<std::string> sites() const;  // registrable hosts of all roots

  TransportResponse get(const std::string& url, const FetchConfig& config) override;
  bool is_network() const override { return false; }

 private:
  std::map<std::string, std::filesystem::path> roots_;
  std::shared_ptr<Transport> fallback_;
};

// In-memory pages keyed by normalized URL; missing pages answer 404.
class MemoryTransport final : public Transport {
 public:
  void add(const std::string& url, std::string body, int status = 200, std::string content_type = "text/html");
  TransportResponse get(const std::string& url, const FetchConfig& config) override;
  bool is_network() const override { return false; }

 private:
  std::map<std::string, TransportResponse> pages_;
};

// Decorator counting and recording every request that reaches the wire.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}

  TransportResponse get(const std::string& url, const FetchConfig& config) override;
  bool is_network() const override { return inner_->is_network(); }

  std::size_t request_count() const { return count_.load(); }
  std::vector<std::string> requested_urls() const;
  void reset();

 private:
  std::shared_ptr<Transport> inner_;
  std::atomic<std::size_t> count_{0};
  mutable std::mutex mutex_;
  std::vector<std::string> urls_;
};

// Enforces a minimum delay between requests to the same host across threads.
class HostThrottle {
 public:
  void wait(const std::string& host, std::chrono::milliseconds delay);

 private:
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

enum class FetcherKind { Static, Rendered };

class PageFetcher {
 public:
  virtual ~PageFetcher() = default;
  virtual PageSource fetch(const std::string& url) = 0;
  virtual FetcherKind kind() const = 0;
};

// Retrieves documents as delivered by the server.
class StaticFetcher final : public PageFetcher {
 public:
  StaticFetcher(std::shared_ptr<Transport> transport, FetchConfig config, Clock clock = system_now);

  // Throws FetchError; never returns a partial document.
  PageSource fetch(const std::string& url) override;
  FetcherKind kind() const override { return FetcherKind::Static; }

  const FetchConfig& config() const { return config_; }
  void set_allowed_sites(std::set<std::string> sites);

 private:
  std::shared_ptr<Transport> transport_;
  FetchConfig config_;
  Clock clock_;
  std::shared_ptr<HostThrottle> throttle_;
  std::mutex config_mutex_;
};

// Adapter slot for an external renderer returning post-script HTML. No
// renderer ships with this library; without one, fetch throws Unsupported.
class RenderedFetcher final : public PageFetcher {
 public:
  using Renderer = std::function<TransportResponse(const std::string& url, const FetchConfig& config)>;

  RenderedFetcher(Renderer renderer, FetchConfig config, Clock clock = system_now);

  PageSource fetch(const std::string& url) override;
  FetcherKind kind() const override { return FetcherKind::Rendered; }

 private:
  Renderer renderer_;
  FetchConfig config_;
  Clock clock_;
};

// On-disk document store. Each entry is <hash>.body plus a <hash>.meta
// sidecar of "key: value" lines (url, fetched_at, status, content_type, kind).
class DocumentCache {
 public:
  explicit DocumentCache(std::filesystem::path root);

  // $CONVBROWSE_CACHE_DIR, else $XDG_CACHE_HOME/convbrowse, else ~/.cache/convbrowse.
  static std::filesystem::path default_root();
  static std::string key_for(const std::string& url, FetcherKind kind);

  const std::filesystem::path& root() const { return root_; }

  // Throws std::runtime_error on I/O or format problems.
  std::optional<PageSource> load(const std::string& url, FetcherKind kind) const;
  void store(const PageSource& source, FetcherKind kind) const;

 private:
  std::filesystem::path root_;
};

// Cache-first fetching with expiry. Cache trouble degrades to a plain fetch
// with a logged warning.
class CachedFetcher {
 public:
  CachedFetcher(std::shared_ptr<PageFetcher> fetcher, std::optional<DocumentCache> cache,
                std::int64_t ttl_seconds = kDefaultTtlSeconds, Clock clock = system_now);

  PageSource cached_fetch(const std::string& url);

  std::int64_t ttl_seconds() const { return ttl_seconds_; }
  PageFetcher& fetcher() { return *fetcher_; }
  const Clock& clock() const { return clock_; }

 private:
  std::shared_ptr<PageFetcher> fetcher_;
  std::optional<DocumentCache> cache_;
  std::int64_t ttl_seconds_;
  Clock clock_;
};

}  // namespace convbrowse
