#include "convbrowse/fetch.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "convbrowse/log.hpp"
#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

namespace fs = std::filesystem;

std::int64_t system_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

const char* to_string(FetchErrorKind kind) {
  switch (kind) {
    case FetchErrorKind::InvalidUrl: return "invalid-url";
    case FetchErrorKind::Timeout: return "timeout";
    case FetchErrorKind::HttpStatus: return "http-status";
    case FetchErrorKind::Oversize: return "oversize";
    case FetchErrorKind::DisallowedOrigin: return "disallowed-origin";
    case FetchErrorKind::EmptyBody: return "empty-body";
    case FetchErrorKind::Network: return "network";
    case FetchErrorKind::Unsupported: return "unsupported";
  }
  return "unknown";
}

FetchError::FetchError(FetchErrorKind kind, std::string url, const std::string& detail, int status)
    : std::runtime_error(std::string(to_string(kind)) + " fetching '" + url + "': " + detail),
      kind_(kind),
      url_(std::move(url)),
      status_(status) {}

// ---------------------------------------------------------------------------

DirectoryTransport::DirectoryTransport(std::shared_ptr<Transport> fallback) : fallback_(std::move(fallback)) {}

void DirectoryTransport::add_site(const std::string& origin, fs::path root) {
  roots_[parse_url(origin).origin()] = std::move(root);
}

bool DirectoryTransport::serves(const std::string& url) const {
  try {
    return roots_.count(parse_url(url).origin()) > 0;
  } catch (const UrlError&) {
    return false;
  }
}

std::set<std::string> DirectoryTransport::sites() const {
  std::set<std::string> out;
  for (const auto& [origin, root] : roots_) out.insert(registrable_host(parse_url(origin).host));
  return out;
}

TransportResponse DirectoryTransport::get(const std::string& url, const FetchConfig& config) {
  Url u = parse_url(url);
  auto it = roots_.find(u.origin());
  if (it == roots_.end()) {
    if (fallback_) return fallback_->get(url, config);
    throw FetchError(FetchErrorKind::Network, url, "no fixture site registered for " + u.origin());
  }
  std::string rel = u.path.substr(1);
  if (rel.empty() || rel.back() == '/') rel += "index.html";
  if (u.has_query) rel += "?" + u.query;
  fs::path file = it->second / rel;
  TransportResponse resp;
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) {
    resp.status = 404;
    resp.content_type = "text/plain";
    return resp;
  }
  auto size = fs::file_size(file, ec);
  if (!ec && size > config.max_body_bytes) {
    throw FetchError(FetchErrorKind::Oversize, url, std::to_string(size) + " bytes exceeds limit");
  }
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  resp.status = 200;
  resp.body = ss.str();
  auto ext = to_lower(file.extension().string());
  resp.content_type = (ext == ".html" || ext == ".htm" || ext.empty()) ? "text/html"
                      : ext == ".txt"                                 ? "text/plain"
                                                                      : "application/octet-stream";
  return resp;
}

// ---------------------------------------------------------------------------

void MemoryTransport::add(const std::string& url, std::string body, int status, std::string content_type) {
  pages_[normalize_url(url)] = TransportResponse{status, std::move(body), std::move(content_type)};
}

TransportResponse MemoryTransport::get(const std::string& url, const FetchConfig&) {
  auto it = pages_.find(url);
  if (it == pages_.end()) return TransportResponse{404, "", "text/plain"};
  return it->second;
}

// ---------------------------------------------------------------------------

TransportResponse RecordingTransport::get(const std::string& url, const FetchConfig& config) {
  {
    std::lock_guard lock(mutex_);
    urls_.push_back(url);
  }
  ++count_;
  return inner_->get(url, config);
}

std::vector<std::string> RecordingTransport::requested_urls() const {
  std::lock_guard lock(mutex_);
  return urls_;
}

void RecordingTransport::reset() {
  std::lock_guard lock(mutex_);
  urls_.clear();
  count_ = 0;
}

// ---------------------------------------------------------------------------

void HostThrottle::wait(const std::string& host, std::chrono::milliseconds delay) {
  if (delay.count() <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    auto& next = next_slot_[host];
    slot = std::max(now, next);
    next = slot + delay;
  }
  std::this_thread::sleep_until(slot);
}

// ---------------------------------------------------------------------------

namespace {

void check_origin(const FetchConfig& config, const Url& u, const std::string& url) {
  if (config.allowed_sites.empty()) return;
  if (!config.allowed_sites.count(registrable_host(u.host))) {
    throw FetchError(FetchErrorKind::DisallowedOrigin, url, "host '" + u.host + "' is outside the allowed sites");
  }
}

PageSource to_page_source(const std::string& url, TransportResponse resp, const FetchConfig& config,
                          std::int64_t now) {
  if (resp.status < 200 || resp.status >= 300) {
    throw FetchError(FetchErrorKind::HttpStatus, url, "status " + std::to_string(resp.status), resp.status);
  }
  if (resp.body.size() > config.max_body_bytes) {
    throw FetchError(FetchErrorKind::Oversize, url, std::to_string(resp.body.size()) + " bytes exceeds limit");
  }
  if (resp.body.empty()) throw FetchError(FetchErrorKind::EmptyBody, url, "server returned no content");
  return PageSource{url, std::move(resp.body), now, resp.status, std::move(resp.content_type)};
}

Url parse_or_throw(const std::string& raw, std::string& normalized) {
  try {
    Url u = parse_url(raw);
    normalized = u.str();
    return u;
  } catch (const UrlError& e) {
    throw FetchError(FetchErrorKind::InvalidUrl, raw, e.what());
  }
}

}  // namespace

StaticFetcher::StaticFetcher(std::shared_ptr<Transport> transport, FetchConfig config, Clock clock)
    : transport_(std::move(transport)),
      config_(std::move(config)),
      clock_(std::move(clock)),
      throttle_(std::make_shared<HostThrottle>()) {}

void StaticFetcher::set_allowed_sites(std::set<std::string> sites) {
  std::lock_guard lock(config_mutex_);
  config_.allowed_sites = std::move(sites);
}

PageSource StaticFetcher::fetch(const std::string& raw) {
  FetchConfig config;
  {
    std::lock_guard lock(config_mutex_);
    config = config_;
  }
  std::string url;
  Url u = parse_or_throw(raw, url);
  check_origin(config, u, url);
  if (transport_->is_network()) throttle_->wait(u.host, config.politeness_delay);
  return to_page_source(url, transport_->get(url, config), config, clock_());
}

RenderedFetcher::RenderedFetcher(Renderer renderer, FetchConfig config, Clock clock)
    : renderer_(std::move(renderer)), config_(std::move(config)), clock_(std::move(clock)) {}

PageSource RenderedFetcher::fetch(const std::string& raw) {
  std::string url;
  Url u = parse_or_throw(raw, url);
  if (!renderer_) throw FetchError(FetchErrorKind::Unsupported, url, "no page renderer is configured");
  check_origin(config_, u, url);
  return to_page_source(url, renderer_(url, config_), config_, clock_());
}

// ---------------------------------------------------------------------------

DocumentCache::DocumentCache(fs::path root) : root_(std::move(root)) {}

fs::path DocumentCache::default_root() {
  if (const char* env = std::getenv("CONVBROWSE_CACHE_DIR"); env && *env) return fs::path(env);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "convbrowse";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "convbrowse";
  return fs::temp_directory_path() / "convbrowse-cache";
}

std::string DocumentCache::key_for(const std::string& url, FetcherKind kind) {
  std::string material = (kind == FetcherKind::Rendered ? "rendered " : "static ") + url;
  return hex64(fnv1a64(material));
}

std::optional<PageSource> DocumentCache::load(const std::string& url, FetcherKind kind) const {
  const std::string key = key_for(url, kind);
  fs::path meta_path = root_ / (key + ".meta");
  if (!fs::exists(meta_path)) return std::nullopt;
  std::ifstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open " + meta_path.string());
  std::map<std::string, std::string> fields;
  for (std::string line; std::getline(meta, line);) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    fields[line.substr(0, colon)] = unescape_field(line.substr(colon + 2));
  }
  // A hash collision shows up as a different URL; treat it as a miss.
  if (fields["url"] != url) return std::nullopt;
  std::ifstream body(root_ / (key + ".body"), std::ios::binary);
  if (!body) throw std::runtime_error("cache entry " + key + " has no body");
  std::ostringstream ss;
  ss << body.rdbuf();
  PageSource src;
  src.url = url;
  src.body = ss.str();
  src.fetched_at = std::stoll(fields.at("fetched_at"));
  src.status = std::stoi(fields.at("status"));
  src.content_type = fields["content_type"];
  return src;
}

namespace {

void write_atomic(const fs::path& target, const std::string& data) {
  static std::atomic<unsigned> counter{0};
  std::ostringstream tmp_name;
  tmp_name << target.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << "." << counter++;
  fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
    if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

void DocumentCache::store(const PageSource& source, FetcherKind kind) const {
  fs::create_directories(root_);
  const std::string key = key_for(source.url, kind);
  std::ostringstream meta;
  meta << "url: " << escape_field(source.url) << '\n'
       << "fetched_at: " << source.fetched_at << '\n'
       << "status: " << source.status << '\n'
       << "content_type: " << escape_field(source.content_type) << '\n'
       << "kind: " << (kind == FetcherKind::Rendered ? "rendered" : "static") << '\n';
  // Body first: a reader that finds the sidecar always finds a complete body.
  write_atomic(root_ / (key + ".body"), source.body);
  write_atomic(root_ / (key + ".meta"), meta.str());
}

// ---------------------------------------------------------------------------

CachedFetcher::CachedFetcher(std::shared_ptr<PageFetcher> fetcher, std::optional<DocumentCache> cache,
                             std::int64_t ttl_seconds, Clock clock)
    : fetcher_(std::move(fetcher)), cache_(std::move(cache)), ttl_seconds_(ttl_seconds), clock_(std::move(clock)) {
  if (ttl_seconds_ <= 0) throw std::invalid_argument("ttl_seconds must be positive");
}

PageSource CachedFetcher::cached_fetch(const std::string& raw) {
  std::string url;
  try {
    url = normalize_url(raw);
  } catch (const UrlError& e) {
    throw FetchError(FetchErrorKind::InvalidUrl, raw, e.what());
  }
  const FetcherKind kind = fetcher_->kind();
  if (cache_) {
    try {
      if (auto hit = cache_->load(url, kind)) {
        if (clock_() - hit->fetched_at < ttl_seconds_) return *hit;
      }
    } catch (const std::exception& e) {
      log_warning(std::string("document cache read failed, fetching directly: ") + e.what());
    }
  }
  PageSource fresh = fetcher_->fetch(url);
  if (cache_) {
    try {
      cache_->store(fresh, kind);
    } catch (const std::exception& e) {
      log_warning(std::string("document cache write failed: ") + e.what());
    }
  }
  return fresh;
}

}  // namespace convbrowse
