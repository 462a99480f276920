#include "convbrowse/site_model.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

NavigationGraph::NavigationGraph(std::string seed, CrawlConfig config, std::int64_t crawl_timestamp,
                                 std::vector<PageNode> nodes, std::vector<LinkOccurrence> edges)
    : seed_(std::move(seed)),
      config_(std::move(config)),
      timestamp_(crawl_timestamp),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!node_index_.emplace(nodes_[i].url, i).second) {
      throw GraphError("duplicate page in graph: " + nodes_[i].url);
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!node_index_.count(edges_[i].source_url)) {
      throw GraphError("edge source is not a visited page: " + edges_[i].source_url);
    }
    by_target_[edges_[i].target_url].push_back(i);
  }
}

const PageNode* NavigationGraph::node(const std::string& url) const {
  auto it = node_index_.find(url);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const std::vector<std::size_t>& NavigationGraph::edges_to(const std::string& target) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_target_.find(target);
  return it == by_target_.end() ? kNone : it->second;
}

std::vector<std::string> NavigationGraph::targets() const {
  std::vector<std::string> out;
  out.reserve(by_target_.size());
  for (const auto& [t, _] : by_target_) out.push_back(t);
  return out;
}

bool NavigationGraph::operator==(const NavigationGraph& o) const {
  return seed_ == o.seed_ && config_ == o.config_ && timestamp_ == o.timestamp_ && nodes_ == o.nodes_ &&
         edges_ == o.edges_;
}

NavigationGraph build_graph(const std::vector<CrawlRecord>& records, const CrawlConfig& config,
                            std::int64_t crawl_timestamp) {
  if (records.empty()) throw GraphError("cannot build a graph without at least the seed page");
  std::vector<PageNode> nodes;
  std::vector<LinkOccurrence> edges;
  nodes.reserve(records.size());
  for (const auto& r : records) {
    nodes.push_back(PageNode{r.url, r.title, r.depth, r.fetch_status});
    edges.insert(edges.end(), r.outlinks.begin(), r.outlinks.end());
  }
  CrawlConfig snapshot = config;
  snapshot.seed = records.front().url;
  return NavigationGraph(records.front().url, std::move(snapshot), crawl_timestamp, std::move(nodes),
                         std::move(edges));
}

LinkStatsMap compute_popularity(const NavigationGraph& graph, PopularityOptions options) {
  LinkStatsMap stats;
  std::map<std::string, std::set<std::string>> sources;
  for (const auto& e : graph.edges()) {
    if (!options.count_self_links && e.source_url == e.target_url) continue;
    auto [it, inserted] = stats.try_emplace(e.target_url);
    LinkStats& s = it->second;
    if (inserted) {
      s.target_url = e.target_url;
      s.min_dom_index = std::numeric_limits<int>::max();
    }
    ++s.popularity;
    ++s.region_histogram[static_cast<std::size_t>(e.region)];
    s.min_dom_index = std::min(s.min_dom_index, e.dom_index);
    ++s.anchor_texts[e.anchor_text];
    sources[e.target_url].insert(e.source_url);
  }
  for (auto& [target, s] : stats) s.referencing_pages = static_cast<int>(sources[target].size());
  return stats;
}

std::string canonical_anchor(const LinkStats& stats) {
  const std::string* best = nullptr;
  int best_count = 0;
  for (const auto& [text, count] : stats.anchor_texts) {
    if (text.empty()) continue;
    // std::map iterates lexicographically, so strict comparisons keep the
    // smallest text among equals.
    if (!best || count > best_count || (count == best_count && text.size() < best->size())) {
      best = &text;
      best_count = count;
    }
  }
  if (best) return *best;
  try {
    return humanize_slug(last_path_segment(stats.target_url));
  } catch (const UrlError&) {
    return stats.target_url;
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kHeader = "#convbrowse-graph v1";

int to_int(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw GraphError("graph file line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
  }
}

}  // namespace

void save_graph(const NavigationGraph& graph, std::ostream& out) {
  const auto& c = graph.crawl_config();
  out << kHeader << '\n';
  out << "SEED\t" << escape_field(graph.seed()) << '\n';
  out << "CONFIG\t" << c.max_depth << '\t' << c.max_pages << '\t' << c.ttl_seconds << '\t' << c.worker_count << '\n';
  out << "TIMESTAMP\t" << graph.crawl_timestamp() << '\n';
  for (const auto& n : graph.nodes()) {
    out << "NODE\t" << escape_field(n.url) << '\t' << n.depth << '\t' << n.fetch_status << '\t'
        << escape_field(n.title) << '\n';
  }
  for (const auto& e : graph.edges()) {
    out << "EDGE\t" << escape_field(e.source_url) << '\t' << escape_field(e.target_url) << '\t' << e.dom_index
        << '\t' << to_string(e.region) << '\t' << escape_field(e.anchor_text) << '\n';
  }
}

NavigationGraph load_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw GraphError("not a convbrowse graph file (bad header)");
  std::string seed;
  CrawlConfig config;
  std::int64_t timestamp = 0;
  std::vector<PageNode> nodes;
  std::vector<LinkOccurrence> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split(line, '\t');
    const std::string& kind = f[0];
    auto need = [&](std::size_t n) {
      if (f.size() != n) {
        throw GraphError("graph file line " + std::to_string(line_no) + ": " + kind + " needs " +
                         std::to_string(n - 1) + " fields");
      }
    };
    if (kind == "SEED") {
      need(2);
      seed = unescape_field(f[1]);
    } else if (kind == "CONFIG") {
      need(5);
      config.max_depth = to_int(f[1], line_no);
      config.max_pages = to_int(f[2], line_no);
      config.ttl_seconds = std::stoll(f[3]);
      config.worker_count = to_int(f[4], line_no);
    } else if (kind == "TIMESTAMP") {
      need(2);
      timestamp = std::stoll(f[1]);
    } else if (kind == "NODE") {
      need(5);
      nodes.push_back(PageNode{unescape_field(f[1]), unescape_field(f[4]), to_int(f[2], line_no),
                               to_int(f[3], line_no)});
    } else if (kind == "EDGE") {
      need(6);
      auto region = region_from_string(f[4]);
      if (!region) throw GraphError("graph file line " + std::to_string(line_no) + ": unknown region " + f[4]);
      edges.push_back(LinkOccurrence{unescape_field(f[1]), unescape_field(f[2]), unescape_field(f[5]),
                                     to_int(f[3], line_no), *region});
    } else {
      throw GraphError("graph file line " + std::to_string(line_no) + ": unknown record '" + kind + "'");
    }
  }
  if (seed.empty()) throw GraphError("graph file has no SEED record");
  if (nodes.empty()) throw GraphError("graph file has no NODE records");
  config.seed = seed;
  return NavigationGraph(std::move(seed), std::move(config), timestamp, std::move(nodes), std::move(edges));
}

}  // namespace convbrowse
