#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "convbrowse/crawler.hpp"
#include "convbrowse/heuristics.hpp"
#include "convbrowse/site_model.hpp"

namespace convbrowse {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact fraction, always reduced, denominator > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;  // "2/3", or "1" for whole numbers
  Rational operator+(const Rational& o) const;
  Rational operator/(std::int64_t k) const;
  bool operator==(const Rational&) const = default;
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
};

struct CorpusSite {
  std::string id;
  std::filesystem::path root;   // directory served as the site
  std::string seed;             // absolute seed URL
  std::filesystem::path truth;  // ground-truth JSON
};

struct CorpusManifest {
  std::vector<CorpusSite> sites;
  std::optional<int> max_depth;  // optional "crawl" limits stored with the corpus
  std::optional<int> max_pages;
};

// Reads {sites:[{id, root, seed, truth}], crawl?:{max_depth, max_pages}}.
// Relative paths resolve against the manifest's directory. Throws EvalError
// on duplicate ids, a missing site root, or malformed JSON.
CorpusManifest load_manifest(const std::filesystem::path& file);

// Ground truth {site, menu_links:[url,...]}; links resolve against the seed
// and are normalized. Throws EvalError.
std::set<std::string> load_truth(const std::filesystem::path& file, const std::string& seed);

// Crawl settings with the manifest's stored limits applied over `base`.
CrawlConfig corpus_crawl_config(const CorpusManifest& manifest, CrawlConfig base = {});

struct SiteResult {
  std::string site_id;
  bool skipped = false;
  std::string note;  // why a site was skipped
  int hits = 0;
  int predicted = 0;
  int truth = 0;
  int threshold = 0;
  Rational precision;
  Rational recall;
  bool empty_prediction = false;
};

struct EvalReport {
  std::vector<SiteResult> sites;  // manifest order
  Rational macro_precision;
  Rational macro_recall;
  int evaluated = 0;
  OfferingsConfig config;
  CrawlConfig crawl;
  bool oracle_threshold = false;
};

// A corpus site after crawling; reused across thresholds.
struct CrawledSite {
  CorpusSite site;
  std::optional<NavigationGraph> graph;
  LinkStatsMap stats;
  std::set<std::string> truth;
  std::string note;  // non-empty when the site cannot be evaluated
};

// Crawls every site from its root directory; no network, no disk cache.
std::vector<CrawledSite> crawl_corpus(const CorpusManifest& manifest, const CrawlConfig& crawl);

// Ranks and scores each crawled site. With oracle_threshold, each site's
// threshold is its truth size. Throws EvalError when every site is skipped.
EvalReport evaluate_corpus(const std::vector<CrawledSite>& sites, const OfferingsConfig& config,
                           const CrawlConfig& crawl, bool oracle_threshold = false);

EvalReport run_eval(const CorpusManifest& manifest, const OfferingsConfig& config, const CrawlConfig& crawl);

struct SweepRow {
  int threshold = 0;
  EvalReport report;
};

// One evaluation per threshold over a single crawl. Throws EvalError on an
// empty threshold list.
std::vector<SweepRow> sweep_threshold(const CorpusManifest& manifest, const std::vector<int>& thresholds,
                                      const OfferingsConfig& config, const CrawlConfig& crawl);

std::string render_table(const EvalReport& report);
std::string render_sweep_table(const std::vector<SweepRow>& rows);
std::string report_json(const EvalReport& report);  // deterministic, two-space indent
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace convbrowse
