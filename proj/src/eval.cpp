#include "convbrowse/eval.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "convbrowse/fetch.hpp"
#include "convbrowse/serialize.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

namespace fs = std::filesystem;

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) num = -num, den = -den;
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return Rational{num / g, den / g};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::operator+(const Rational& o) const { return of(num * o.den + o.num * den, den * o.den); }

Rational Rational::operator/(std::int64_t k) const { return of(num, den * k); }

bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

namespace {

Json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw EvalError("cannot read " + file.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw EvalError("malformed JSON in " + file.string() + ": " + e.what());
  }
}

std::string required_string(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
    throw EvalError(where + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

CorpusManifest load_manifest(const fs::path& file) {
  const Json j = read_json(file);
  const fs::path base = file.parent_path();
  if (!j.is_object() || !j.contains("sites") || !j["sites"].is_array()) {
    throw EvalError(file.string() + ": expected an object with a 'sites' array");
  }
  CorpusManifest m;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j["sites"].size(); ++i) {
    const Json& s = j["sites"][i];
    const std::string where = file.string() + " site #" + std::to_string(i + 1);
    if (!s.is_object()) throw EvalError(where + ": expected an object");
    CorpusSite site;
    site.id = required_string(s, "id", where);
    site.root = base / required_string(s, "root", where);
    site.truth = base / required_string(s, "truth", where);
    try {
      site.seed = normalize_url(required_string(s, "seed", where));
    } catch (const UrlError& e) {
      throw EvalError(where + ": " + e.what());
    }
    if (!ids.insert(site.id).second) throw EvalError(where + ": duplicate site id '" + site.id + "'");
    if (!fs::is_directory(site.root)) throw EvalError(where + ": site root not found: " + site.root.string());
    m.sites.push_back(std::move(site));
  }
  if (j.contains("crawl")) {
    const Json& c = j["crawl"];
    if (c.contains("max_depth")) m.max_depth = c["max_depth"].get<int>();
    if (c.contains("max_pages")) m.max_pages = c["max_pages"].get<int>();
  }
  return m;
}

std::set<std::string> load_truth(const fs::path& file, const std::string& seed) {
  const Json j = read_json(file);
  if (!j.is_object() || !j.contains("menu_links") || !j["menu_links"].is_array()) {
    throw EvalError(file.string() + ": expected an object with a 'menu_links' array");
  }
  std::set<std::string> out;
  for (const auto& link : j["menu_links"]) {
    if (!link.is_string()) throw EvalError(file.string() + ": menu_links must be strings");
    try {
      out.insert(normalize_url(link.get<std::string>(), seed));
    } catch (const UrlError& e) {
      throw EvalError(file.string() + ": " + e.what());
    }
  }
  if (out.empty()) throw EvalError(file.string() + ": menu_links is empty");
  return out;
}

CrawlConfig corpus_crawl_config(const CorpusManifest& manifest, CrawlConfig base) {
  if (manifest.max_depth) base.max_depth = *manifest.max_depth;
  if (manifest.max_pages) base.max_pages = *manifest.max_pages;
  return base;
}

std::vector<CrawledSite> crawl_corpus(const CorpusManifest& manifest, const CrawlConfig& crawl_in) {
  std::vector<CrawledSite> out;
  for (const auto& site : manifest.sites) {
    CrawledSite cs;
    cs.site = site;
    if (!fs::exists(site.truth)) {
      cs.note = "ground truth missing: " + site.truth.string();
      out.push_back(std::move(cs));
      continue;
    }
    try {
      cs.truth = load_truth(site.truth, site.seed);
      auto transport = std::make_shared<DirectoryTransport>();
      transport->add_site(parse_url(site.seed).origin(), site.root);
      auto fetcher = std::make_shared<StaticFetcher>(transport, FetchConfig{});
      CrawlConfig crawl = crawl_in;
      crawl.seed = site.seed;
      Crawler crawler([fetcher](const std::string& url) { return fetcher->fetch(url); });
      cs.graph = build_graph(crawler.crawl(crawl), crawl, 0);
      cs.stats = compute_popularity(*cs.graph);
    } catch (const std::exception& e) {
      cs.graph.reset();
      cs.note = e.what();
    }
    out.push_back(std::move(cs));
  }
  return out;
}

EvalReport evaluate_corpus(const std::vector<CrawledSite>& sites, const OfferingsConfig& config,
                           const CrawlConfig& crawl, bool oracle_threshold) {
  EvalReport report;
  report.config = config;
  report.crawl = crawl;
  report.oracle_threshold = oracle_threshold;
  Rational sum_p, sum_r;
  for (const auto& cs : sites) {
    SiteResult r;
    r.site_id = cs.site.id;
    if (!cs.graph) {
      r.skipped = true;
      r.note = cs.note;
      report.sites.push_back(std::move(r));
      continue;
    }
    OfferingsConfig site_config = config;
    if (oracle_threshold) site_config.threshold = static_cast<int>(cs.truth.size());
    auto offerings = rank_offerings(*cs.graph, cs.stats, site_config);
    auto pr = evaluate_offerings(offerings, cs.truth);
    r.threshold = site_config.threshold;
    r.hits = pr.hits;
    r.predicted = pr.predicted;
    r.truth = pr.truth;
    r.empty_prediction = pr.empty_prediction;
    r.precision = pr.predicted == 0 ? Rational{} : Rational::of(pr.hits, pr.predicted);
    r.recall = Rational::of(pr.hits, pr.truth);
    sum_p = sum_p + r.precision;
    sum_r = sum_r + r.recall;
    ++report.evaluated;
    report.sites.push_back(std::move(r));
  }
  if (report.evaluated == 0) throw EvalError("every corpus site was skipped; nothing to evaluate");
  report.macro_precision = sum_p / report.evaluated;
  report.macro_recall = sum_r / report.evaluated;
  return report;
}

EvalReport run_eval(const CorpusManifest& manifest, const OfferingsConfig& config, const CrawlConfig& crawl) {
  config.validate();
  return evaluate_corpus(crawl_corpus(manifest, crawl), config, crawl);
}

std::vector<SweepRow> sweep_threshold(const CorpusManifest& manifest, const std::vector<int>& thresholds,
                                      const OfferingsConfig& config, const CrawlConfig& crawl) {
  if (thresholds.empty()) throw EvalError("threshold sweep needs at least one threshold");
  for (int t : thresholds) {
    if (t < 1) throw EvalError("thresholds must be >= 1, got " + std::to_string(t));
  }
  auto crawled = crawl_corpus(manifest, crawl);
  std::vector<SweepRow> rows;
  for (int t : thresholds) {
    OfferingsConfig c = config;
    c.threshold = t;
    rows.push_back(SweepRow{t, evaluate_corpus(crawled, c, crawl)});
  }
  return rows;
}

std::string render_table(const EvalReport& report) {
  std::ostringstream out;
  out << "averaging: macro   threshold: "
      << (report.oracle_threshold ? std::string("truth size") : std::to_string(report.config.threshold))
      << "   popularity: " << to_string(report.config.popularity_mode)
      << "   cutoff: " << to_string(report.config.cutoff) << '\n';
  out << std::left << std::setw(14) << "site" << std::right << std::setw(10) << "precision" << std::setw(10)
      << "recall" << std::setw(7) << "hits" << std::setw(11) << "predicted" << std::setw(7) << "truth" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& s : report.sites) {
    out << std::left << std::setw(14) << s.site_id << std::right;
    if (s.skipped) {
      out << "  skipped: " << s.note << '\n';
      continue;
    }
    out << std::setw(10) << s.precision.value() << std::setw(10) << s.recall.value() << std::setw(7) << s.hits
        << std::setw(11) << s.predicted << std::setw(7) << s.truth;
    if (s.empty_prediction) out << "  (no predictions)";
    out << '\n';
  }
  out << std::left << std::setw(14) << "macro" << std::right << std::setw(10) << report.macro_precision.value()
      << std::setw(10) << report.macro_recall.value() << "   (" << report.evaluated << " sites)\n";
  return out.str();
}

std::string render_sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::right << std::setw(10) << "threshold" << std::setw(11) << "precision" << std::setw(10) << "recall"
      << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << std::setw(10) << r.threshold << std::setw(11) << r.report.macro_precision.value() << std::setw(10)
        << r.report.macro_recall.value() << '\n';
  }
  return out.str();
}

std::string report_json(const EvalReport& report) { return to_json(report).dump(2); }

std::string sweep_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"threshold", r.threshold},
                   {"precision", r.report.macro_precision.value()},
                   {"precision_exact", r.report.macro_precision.str()},
                   {"recall", r.report.macro_recall.value()},
                   {"recall_exact", r.report.macro_recall.str()}});
  }
  return arr.dump(2);
}

}  // namespace convbrowse
