#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "convbrowse/crawler.hpp"
#include "convbrowse/fetch.hpp"
#include "convbrowse/heuristics.hpp"
#include "convbrowse/nlu.hpp"
#include "convbrowse/page_model.hpp"
#include "convbrowse/site_model.hpp"

namespace convbrowse {

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Verbosity { Short, Normal };
const char* to_string(Verbosity v);

struct Preferences {
  Verbosity verbosity = Verbosity::Normal;
  int speech_rate = 3;  // 1..5, stored for a speech front end

  bool operator==(const Preferences&) const = default;
};

inline constexpr std::size_t kShortTextLimit = 240;
inline constexpr std::size_t kShortListLimit = 5;
inline constexpr std::size_t kNormalListLimit = 10;

struct ResponseItem {
  int n = 0;  // ordinal the user can say back
  std::string label;
  std::string reference;  // usually a URL

  bool operator==(const ResponseItem&) const = default;
};

struct Response {
  std::string text;
  std::vector<ResponseItem> items;
  IntentKind kind = IntentKind::Unrecognized;

  bool operator==(const Response&) const = default;
};

// Everything derived from one crawl. Immutable once built and shared by the
// sessions browsing that site.
struct SiteModel {
  NavigationGraph graph;
  LinkStatsMap stats;
  std::vector<Offering> offerings;
  std::string title;
};

SiteModel build_site_model(NavigationGraph graph, const OfferingsConfig& config);

// Services shared by all sessions: page fetching, crawling, and a memo of
// site models and segmented pages.
class Browser {
 public:
  Browser(std::shared_ptr<CachedFetcher> fetcher, CrawlConfig crawl_defaults, OfferingsConfig offerings);

  // Crawls on first use; later calls for the same seed reuse the model.
  // Throws SessionError on an invalid or unreachable seed.
  std::shared_ptr<const SiteModel> open_site(const std::string& seed);

  // Fetches and segments a page. Throws FetchError or UrlError.
  std::shared_ptr<const SegmentTree> page(const std::string& url);

  // Names that "open <name>" understands, mapped to seed URLs.
  void add_site_name(const std::string& name, const std::string& seed);
  std::optional<std::string> resolve_site_name(std::string_view name) const;

  const CrawlConfig& crawl_defaults() const { return crawl_defaults_; }
  const OfferingsConfig& offerings_config() const { return offerings_; }

 private:
  std::shared_ptr<CachedFetcher> fetcher_;
  CrawlConfig crawl_defaults_;
  OfferingsConfig offerings_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const SiteModel>> sites_;
  std::map<std::string, std::shared_ptr<const SegmentTree>> pages_;
  std::map<std::string, std::string> names_;  // lowercase name -> seed
};

struct ReadingCursor {
  std::string segment_id;
  std::size_t sentence = 0;  // next sentence to read

  bool operator==(const ReadingCursor&) const = default;
};

struct Bookmark {
  std::string label;
  std::string url;

  bool operator==(const Bookmark&) const = default;
};

struct Turn {
  std::string utterance;
  Intent intent;
  std::string synopsis;
};

// One user's conversation with one site. Not thread-safe: callers serialize
// handle() per session.
class Session {
 public:
  Session(std::string id, std::shared_ptr<Browser> browser, std::shared_ptr<const SiteModel> site);

  Response handle(std::string_view utterance);

  const std::string& id() const { return id_; }
  const std::string& current_url() const { return history_.back(); }
  const std::vector<std::string>& nav_history() const { return history_; }
  const std::vector<Turn>& conversation() const { return turns_; }
  const std::optional<ReadingCursor>& reading_cursor() const { return cursor_; }
  const std::vector<Bookmark>& bookmarks() const { return bookmarks_; }
  const Preferences& prefs() const { return prefs_; }
  const SiteModel& site() const { return *site_; }
  std::string current_title() const;
  std::string title_of(const std::string& url) const;

  // Swaps in a fresh crawl of the same site without touching history.
  void refresh_site(std::shared_ptr<const SiteModel> site);

  // Throws std::logic_error when a session invariant is broken.
  void check_invariants() const;

 private:
  Response dispatch(const Intent& intent);
  Response do_outline();
  Response do_orientation();
  Response do_navigate(const std::string& target);
  Response do_read_start();
  Response do_read_next();
  Response do_read_stop();
  Response do_lookup(const std::string& query);
  Response do_overview();
  Response do_about();
  Response do_summary();
  Response do_yes_no(const Intent& intent);
  Response do_open(const Intent& intent);
  Response do_bookmark(const Intent& intent);
  Response do_speech(const std::string& direction);
  Response do_verbosity(const std::string& mode);
  Response do_help(bool unrecognized);
  Response do_more();

  Response go_to(const std::string& url, const std::string& intro = "");
  Response go_back();
  Response go_next_article();
  Response show_list(std::string text, std::vector<ResponseItem> items, std::string follow_up);
  std::shared_ptr<const SegmentTree> current_page();
  std::string page_outline(const SegmentTree& tree) const;
  void finalize(Response& r) const;

  std::string id_;
  std::shared_ptr<Browser> browser_;
  std::shared_ptr<const SiteModel> site_;
  std::vector<std::string> history_;
  std::vector<Turn> turns_;
  std::optional<ReadingCursor> cursor_;
  std::vector<Bookmark> bookmarks_;
  Preferences prefs_;

  std::vector<ResponseItem> last_list_;
  std::size_t list_shown_ = 0;
  std::string list_follow_up_;
  std::vector<std::string> lookup_trail_;  // navigation targets of the last lookup
};

// Crawls (or reuses) the seed's site and starts a session at the seed.
// Throws SessionError naming the input when the seed is invalid or unreachable.
std::unique_ptr<Session> open_session(std::shared_ptr<Browser> browser, const std::string& seed,
                                      std::string session_id = "");

// Renders one exchange the way the golden transcripts store it:
// "U: <utterance>", "A: <text>", then "A:   <n>. <label>" per item.
std::string transcript_lines(std::string_view utterance, const Response& response);

}  // namespace convbrowse
