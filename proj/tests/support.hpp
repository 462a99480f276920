#pragma once

#include <stdlib.h>

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <set>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convbrowse/dialog.hpp"
#include "convbrowse/eval.hpp"
#include "convbrowse/fetch.hpp"
#include "convbrowse/heuristics.hpp"
#include "convbrowse/nlu.hpp"
#include "convbrowse/site_model.hpp"
#include "convbrowse/url.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(CONVBROWSE_SOURCE_DIR); }
inline fs::path corpus_manifest() { return source_dir() / "fixtures" / "corpus" / "manifest.json"; }
inline fs::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "convbrowse-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Serves every corpus site from disk.
inline std::shared_ptr<convbrowse::DirectoryTransport> corpus_transport() {
  auto manifest = convbrowse::load_manifest(corpus_manifest());
  auto t = std::make_shared<convbrowse::DirectoryTransport>();
  for (const auto& s : manifest.sites) t->add_site(convbrowse::parse_url(s.seed).origin(), s.root);
  return t;
}

inline convbrowse::CrawlConfig corpus_crawl() {
  return convbrowse::corpus_crawl_config(convbrowse::load_manifest(corpus_manifest()));
}

inline std::shared_ptr<convbrowse::Browser> make_browser(std::shared_ptr<convbrowse::Transport> transport,
                                                         convbrowse::CrawlConfig crawl = {},
                                                         convbrowse::OfferingsConfig offerings = {}) {
  auto fetcher = std::make_shared<convbrowse::StaticFetcher>(std::move(transport), convbrowse::FetchConfig{});
  auto cached = std::make_shared<convbrowse::CachedFetcher>(fetcher, std::nullopt);
  return std::make_shared<convbrowse::Browser>(cached, crawl, offerings);
}

inline std::shared_ptr<convbrowse::Browser> corpus_browser(convbrowse::OfferingsConfig offerings = {}) {
  auto browser = make_browser(corpus_transport(), corpus_crawl(), offerings);
  browser->add_site_name("The Tambury Gazette", "http://gazette.test/");
  browser->add_site_name("Tambury Sport", "http://sports.test/");
  return browser;
}

// Random HTML built from a small tag vocabulary, with links, images,
// fragment-only anchors, nested anchors, hidden content and stray markup.
inline std::string random_fragment(std::mt19937& rng, int depth = 0) {
  static const char* words[] = {"alpha", "beta", "gamma", "delta", "news", "sport", "COVID", "weather",
                                "Tambury", "fair", "menu", "&amp;", "caf&eacute;", "x&lt;y"};
  static const char* blocks[] = {"p", "div", "section", "article", "nav", "header", "footer", "aside",
                                 "main", "ul", "li", "h2", "td", "blockquote"};
  static const char* inlines[] = {"span", "b", "em", "strong", "i", "code"};
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  std::string out;
  const int parts = 1 + pick(5);
  for (int i = 0; i < parts; ++i) {
    switch (pick(depth > 3 ? 4 : 12)) {
      case 0:
      case 1:
        out += std::string(words[pick(14)]) + " ";
        break;
      case 2:
        out += "<a href=\"/page/" + std::to_string(pick(20)) + ".html\">" + words[pick(14)] + "</a> ";
        break;
      case 3:
        out += "<a href=\"https://other.example/" + std::to_string(pick(5)) + "\"><img alt=\"" + words[pick(14)] +
               "\" src=\"x.png\"></a>";
        break;
      case 4:
        out += "<" + std::string(blocks[pick(14)]) + ">" + random_fragment(rng, depth + 1);
        if (pick(4) != 0) out += "</" + std::string(blocks[pick(14)]) + ">";
        break;
      case 5: {
        std::string tag = inlines[pick(6)];
        out += "<" + tag + ">" + random_fragment(rng, depth + 1) + "</" + tag + ">";
        break;
      }
      case 6:
        out += "<a href=\"#top\">top</a>";
        break;
      case 7:
        out += "<a href=\"/outer\">outer <a href=\"/inner\">inner</a> tail</a>";
        break;
      case 8:
        out += "<script>var s = '<a href=\"/js\">js</a>';</script><!-- <a href=\"/c\">c</a> -->";
        break;
      case 9:
        out += "<a>no href</a><br><a href=\"\">empty</a>";
        break;
      case 10:
        out += "<a href=\"/b\"><b>" + random_fragment(rng, depth + 1) + "</b></a>";
        break;
      default:
        out += "<template><a href=\"/t\">t</a></template></p></div><a href=\"http://[bad\">bad</a>";
        break;
    }
  }
  return out;
}

// A random site of up to 50 pages at http://rand.test/. Page i links to the
// pages in links[i], in order, spread over header/nav/main/footer; some pages
// answer 404, some links leave the site or are fragment-only.
struct RandomSite {
  int pages = 0;
  std::vector<std::vector<int>> links;
  std::set<int> missing;

  static std::string url(int i) { return i == 0 ? "http://rand.test/" : "http://rand.test/p" + std::to_string(i) + ".html"; }
};

inline RandomSite random_site(std::mt19937& rng, int max_pages = 50) {
  RandomSite site;
  site.pages = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_pages));
  site.links.resize(static_cast<std::size_t>(site.pages));
  for (int i = 0; i < site.pages; ++i) {
    const int n = static_cast<int>(rng() % 7);
    for (int k = 0; k < n; ++k) site.links[static_cast<std::size_t>(i)].push_back(static_cast<int>(rng() % static_cast<unsigned>(site.pages)));
    if (i > 0 && rng() % 10 == 0) site.missing.insert(i);
  }
  return site;
}

inline std::shared_ptr<convbrowse::MemoryTransport> site_transport(const RandomSite& site) {
  static const char* regions[] = {"header", "nav", "main", "footer"};
  auto t = std::make_shared<convbrowse::MemoryTransport>();
  for (int i = 0; i < site.pages; ++i) {
    if (site.missing.count(i)) continue;
    std::string body = "<html><head><title>Page " + std::to_string(i) + "</title></head><body>";
    const auto& out = site.links[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < out.size(); ++k) {
      const int target = out[k];
      const std::string href = (k % 3 == 1) ? RandomSite::url(target) + "#frag" : RandomSite::url(target);
      body += std::string("<") + regions[(i + k) % 4] + "><a href=\"" + href + "\">to " + std::to_string(target) +
              "</a><a href=\"#top\">top</a><a href=\"http://elsewhere.test/" + std::to_string(k) + "\">x</a></" +
              regions[(i + k) % 4] + ">";
    }
    t->add(RandomSite::url(i), body + "</body></html>");
  }
  return t;
}

// Plain queue simulation of breadth-first crawling.
inline std::vector<std::pair<std::string, int>> oracle_bfs(const RandomSite& site, int max_depth, int max_pages) {
  std::vector<std::pair<std::string, int>> out;
  std::deque<std::pair<int, int>> queue{{0, 0}};
  std::set<int> seen{0};
  while (!queue.empty() && static_cast<int>(out.size()) < max_pages) {
    auto [page, depth] = queue.front();
    queue.pop_front();
    out.emplace_back(RandomSite::url(page), depth);
    if (site.missing.count(page) || depth >= max_depth) continue;
    for (int target : site.links[static_cast<std::size_t>(page)]) {
      if (seen.insert(target).second) queue.emplace_back(target, depth + 1);
    }
  }
  return out;
}

// Brute-force scorer: recounts every edge, scores in integer tenths of a
// weight so ties are exact.
struct OracleOffering {
  std::string url;
  long score_tenths = 0;
};

inline std::vector<OracleOffering> oracle_offerings(const convbrowse::NavigationGraph& graph, int threshold,
                                                    const std::map<convbrowse::Region, long>& tenths) {
  using convbrowse::Region;
  const std::string site = convbrowse::registrable_host(convbrowse::parse_url(graph.seed()).host);
  std::map<std::string, std::map<Region, int>> counts;
  std::map<std::string, int> first_index;
  for (const auto& e : graph.edges()) {
    if (convbrowse::registrable_host(convbrowse::parse_url(e.target_url).host) != site) continue;
    counts[e.target_url][e.region] += 1;
    auto it = first_index.find(e.target_url);
    if (it == first_index.end() || e.dom_index < it->second) first_index[e.target_url] = e.dom_index;
  }
  std::vector<std::pair<OracleOffering, int>> all;
  for (const auto& [url, by_region] : counts) {
    int total = 0, best = -1;
    long best_weight = 0;
    for (const auto& [region, c] : by_region) {
      total += c;
      const long w = tenths.at(region);
      if (c > best || (c == best && w > best_weight)) best = c, best_weight = w;
    }
    all.push_back({OracleOffering{url, total * best_weight}, first_index[url]});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first.score_tenths != b.first.score_tenths) return a.first.score_tenths > b.first.score_tenths;
    if (a.second != b.second) return a.second < b.second;
    return a.first.url < b.first.url;
  });
  std::vector<OracleOffering> out;
  for (const auto& [o, idx] : all) {
    if (static_cast<int>(out.size()) == threshold) break;
    out.push_back(o);
  }
  return out;
}

inline std::map<convbrowse::Region, long> default_weight_tenths() {
  using convbrowse::Region;
  return {{Region::Nav, 15},  {Region::Header, 12}, {Region::Main, 10},
          {Region::Other, 10}, {Region::Aside, 8},  {Region::Footer, 5}};
}

// Stack simulation of navigate/back over the history.
class HistoryOracle {
 public:
  explicit HistoryOracle(std::string start) : stack_{std::move(start)} {}
  void navigate(const std::string& url) { stack_.push_back(url); }
  void back() {
    if (stack_.size() > 1) stack_.pop_back();
  }
  const std::string& current() const { return stack_.back(); }

 private:
  std::vector<std::string> stack_;
};

struct GoldenUtterance {
  const char* utterance;
  convbrowse::IntentKind kind;
  convbrowse::Slots slots;
};

// In-scope example utterances of the paper's categories table, plus the
// variants quoted in its running text.
inline const std::vector<GoldenUtterance>& table_examples() {
  using convbrowse::IntentKind;
  static const std::vector<GoldenUtterance> g = {
      {"What is this website about?", IntentKind::Overview, {}},
      {"Summarise the article?", IntentKind::Summary, {}},
      {"Summarise the article", IntentKind::Summary, {}},
      {"Who are the authors of this article?", IntentKind::About, {}},
      {"Is the article written in English?", IntentKind::YesNoMeta, {{"attribute", "language"}, {"value", "English"}}},
      {"Is the document written in English?", IntentKind::YesNoMeta, {{"attribute", "language"}, {"value", "English"}}},
      {"What can I do in this website?", IntentKind::Outline, {}},
      {"What can I do in this website", IntentKind::Outline, {}},
      {"Where am I?", IntentKind::Orientation, {}},
      {"Go to the main page", IntentKind::Navigate, {{"target", "main page"}}},
      {"Next article", IntentKind::Navigate, {{"target", "next"}}},
      {"Lookup COVID", IntentKind::Lookup, {{"query", "COVID"}}},
      {"Read article", IntentKind::ReadStart, {}},
      {"Stop reading", IntentKind::ReadStop, {}},
      {"Open The Tambury Gazette", IntentKind::Open, {{"target", "The Tambury Gazette"}}},
      {"Bookmark page The Tambury Gazette", IntentKind::Bookmark, {{"action", "add"}, {"label", "The Tambury Gazette"}}},
      {"Increase speech rate", IntentKind::SetSpeech, {{"direction", "increase"}}},
      {"Turn on short interactions", IntentKind::SetVerbosity, {{"mode", "short"}}},
  };
  return g;
}

}  // namespace testsupport
