#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "convbrowse/crawler.hpp"

namespace convbrowse {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PageNode {
  std::string url;
  std::string title;
  int depth = 0;
  int fetch_status = 0;
  bool operator==(const PageNode&) const = default;
};

// Site-level directed graph: visited pages plus every link occurrence seen on
// them. Immutable once built; share it freely across threads.
class NavigationGraph {
 public:
  NavigationGraph() = default;
  NavigationGraph(std::string seed, CrawlConfig config, std::int64_t crawl_timestamp, std::vector<PageNode> nodes,
                  std::vector<LinkOccurrence> edges);

  const std::string& seed() const { return seed_; }
  const CrawlConfig& crawl_config() const { return config_; }
  std::int64_t crawl_timestamp() const { return timestamp_; }
  const std::vector<PageNode>& nodes() const { return nodes_; }
  const std::vector<LinkOccurrence>& edges() const { return edges_; }

  const PageNode* node(const std::string& url) const;
  // Edge indices grouped by target, in edge order.
  const std::vector<std::size_t>& edges_to(const std::string& target) const;
  std::vector<std::string> targets() const;

  bool operator==(const NavigationGraph& other) const;

 private:
  std::string seed_;
  CrawlConfig config_;
  std::int64_t timestamp_ = 0;
  std::vector<PageNode> nodes_;
  std::vector<LinkOccurrence> edges_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::map<std::string, std::vector<std::size_t>> by_target_;
};

// Throws GraphError on an empty record list or a repeated page URL.
NavigationGraph build_graph(const std::vector<CrawlRecord>& records, const CrawlConfig& config,
                            std::int64_t crawl_timestamp = 0);

struct LinkStats {
  std::string target_url;
  int popularity = 0;          // occurrences across all pages
  int referencing_pages = 0;   // distinct source pages
  std::array<int, 6> region_histogram{};  // indexed by Region
  int min_dom_index = 0;
  std::map<std::string, int> anchor_texts;  // text -> occurrences

  int region_count(Region r) const { return region_histogram[static_cast<std::size_t>(r)]; }
  bool operator==(const LinkStats&) const = default;
};

using LinkStatsMap = std::map<std::string, LinkStats>;

struct PopularityOptions {
  bool count_self_links = true;
};

LinkStatsMap compute_popularity(const NavigationGraph& graph, PopularityOptions options = {});

// Most frequent anchor text; ties go to the shortest, then lexicographically
// smallest. Falls back to the humanized last path segment of the target.
std::string canonical_anchor(const LinkStats& stats);

// Line-oriented, tab-separated persistence ("#convbrowse-graph v1").
void save_graph(const NavigationGraph& graph, std::ostream& out);
NavigationGraph load_graph(std::istream& in);  // throws GraphError

}  // namespace convbrowse
