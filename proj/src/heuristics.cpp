#include "convbrowse/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

const char* to_string(PopularityMode m) {
  return m == PopularityMode::Occurrences ? "occurrences" : "distinct_pages";
}

const char* to_string(CutoffMode m) { return m == CutoffMode::Static ? "static" : "score_gap"; }

RegionWeights::RegionWeights() {
  set(Region::Nav, 1.5);
  set(Region::Header, 1.2);
  set(Region::Main, 1.0);
  set(Region::Other, 1.0);
  set(Region::Aside, 0.8);
  set(Region::Footer, 0.5);
}

void RegionWeights::set(Region r, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument(std::string("region weight for ") + to_string(r) + " must be > 0");
  }
  w_[static_cast<std::size_t>(r)] = weight;
}

RegionWeights RegionWeights::scaled(double factor) const {
  RegionWeights out = *this;
  for (Region r : kAllRegions) out.set(r, (*this)[r] * factor);
  return out;
}

void OfferingsConfig::validate() const {
  if (threshold < 1) throw std::invalid_argument("threshold must be >= 1");
}

void apply_config_entry(OfferingsConfig& config, std::string_view key_in, std::string_view value_in) {
  const std::string key = to_lower(trim(key_in));
  const std::string value = trim(value_in);
  auto number = [&] {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("'" + key + "' expects a number, got '" + value + "'");
    }
  };
  if (auto region = region_from_string(key)) {
    config.region_weights.set(*region, number());
  } else if (key == "threshold") {
    double v = number();
    if (v < 1 || v != std::floor(v)) throw std::invalid_argument("threshold must be a positive integer");
    config.threshold = static_cast<int>(v);
  } else if (key == "popularity_mode") {
    if (value == "occurrences") config.popularity_mode = PopularityMode::Occurrences;
    else if (value == "distinct_pages") config.popularity_mode = PopularityMode::DistinctPages;
    else throw std::invalid_argument("popularity_mode must be occurrences or distinct_pages");
  } else if (key == "cutoff") {
    if (value == "static") config.cutoff = CutoffMode::Static;
    else if (value == "score_gap") config.cutoff = CutoffMode::ScoreGap;
    else throw std::invalid_argument("cutoff must be static or score_gap");
  } else {
    throw std::invalid_argument("unknown offerings setting '" + key + "'");
  }
}

void apply_config_lines(OfferingsConfig& config, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

Region modal_region(const LinkStats& stats, const RegionWeights& weights) {
  Region best = Region::Other;
  int best_count = -1;
  for (Region r : kAllRegions) {
    int c = stats.region_count(r);
    if (c > best_count || (c == best_count && weights[r] > weights[best])) {
      best = r;
      best_count = c;
    }
  }
  return best;
}

namespace {

constexpr double kTieTolerance = 1e-9;

bool near_equal(double a, double b) {
  return std::fabs(a - b) <= kTieTolerance * std::max(std::fabs(a), std::fabs(b));
}

std::size_t largest_gap_cut(const std::vector<Offering>& ranked) {
  std::size_t cut = ranked.size();
  double best_drop = 0.0;
  for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
    if (ranked[i].score <= 0.0) break;
    double drop = (ranked[i].score - ranked[i + 1].score) / ranked[i].score;
    if (drop > best_drop + kTieTolerance) {
      best_drop = drop;
      cut = i + 1;
    }
  }
  return cut;
}

}  // namespace

std::vector<Offering> rank_offerings(const NavigationGraph& graph, const LinkStatsMap& stats,
                                     const OfferingsConfig& config) {
  config.validate();
  const std::string site = registrable_host(parse_url(graph.seed()).host);

  struct Candidate {
    Offering offering;
    int min_dom_index;
  };
  std::vector<Candidate> candidates;
  for (const auto& [target, s] : stats) {
    std::string host;
    try {
      host = parse_url(target).host;
    } catch (const UrlError&) {
      continue;
    }
    if (registrable_host(host) != site) continue;
    const int pop = config.popularity_mode == PopularityMode::Occurrences ? s.popularity : s.referencing_pages;
    const double weight = config.region_weights[modal_region(s, config.region_weights)];
    candidates.push_back({Offering{target, canonical_anchor(s), pop * weight, 0}, s.min_dom_index});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.offering.score > b.offering.score; });
  // Scores within tolerance of a group's leader are ties.
  for (std::size_t start = 0; start < candidates.size();) {
    std::size_t end = start + 1;
    while (end < candidates.size() && near_equal(candidates[start].offering.score, candidates[end].offering.score))
      ++end;
    std::sort(candidates.begin() + static_cast<std::ptrdiff_t>(start),
              candidates.begin() + static_cast<std::ptrdiff_t>(end), [](const Candidate& a, const Candidate& b) {
                return std::tie(a.min_dom_index, a.offering.target_url) <
                       std::tie(b.min_dom_index, b.offering.target_url);
              });
    start = end;
  }

  std::vector<Offering> out;
  const auto limit = std::min(candidates.size(), static_cast<std::size_t>(config.threshold));
  out.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) out.push_back(std::move(candidates[i].offering));
  if (config.cutoff == CutoffMode::ScoreGap) out.resize(largest_gap_cut(out));
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

PrecisionRecall evaluate_offerings(const std::vector<Offering>& predicted, const std::set<std::string>& truth_in) {
  if (truth_in.empty()) throw std::invalid_argument("ground truth must not be empty");
  std::set<std::string> truth;
  for (const auto& t : truth_in) truth.insert(normalize_url(t));
  std::set<std::string> seen;
  PrecisionRecall pr;
  for (const auto& o : predicted) {
    auto u = normalize_url(o.target_url);
    if (!seen.insert(u).second) continue;
    if (truth.count(u)) ++pr.hits;
  }
  pr.predicted = static_cast<int>(seen.size());
  pr.truth = static_cast<int>(truth.size());
  pr.empty_prediction = pr.predicted == 0;
  pr.precision = pr.predicted == 0 ? 0.0 : static_cast<double>(pr.hits) / pr.predicted;
  pr.recall = static_cast<double>(pr.hits) / pr.truth;
  return pr;
}

std::string snippet_around(std::string_view text, std::size_t pos, std::size_t len, std::size_t radius) {
  auto is_space = [](char c) { return c == ' ' || c == '\n'; };
  const std::size_t nl_before = pos == 0 ? std::string_view::npos : text.rfind('\n', pos - 1);
  const std::size_t line_begin = nl_before == std::string_view::npos ? 0 : nl_before + 1;
  const std::size_t line_end = std::min(text.size(), text.find('\n', pos + len));
  std::size_t begin = std::max(line_begin, pos > radius ? pos - radius : 0);
  std::size_t end = std::min(line_end, pos + len + radius);
  if (begin > 0 && !is_space(text[begin - 1])) {
    while (begin < pos && !is_space(text[begin])) ++begin;
  }
  if (end < text.size() && !is_space(text[end])) {
    while (end > pos + len && !is_space(text[end - 1])) --end;
  }
  std::string out(text.substr(begin, end - begin));
  std::replace(out.begin(), out.end(), '\n', ' ');
  return trim(collapse_whitespace(out));
}

std::vector<LookupMatch> lookup(const SegmentTree& tree, std::string_view query_in) {
  std::vector<LookupMatch> out;
  const std::string query = to_lower(collapse_whitespace(query_in));
  if (query.empty()) return out;
  std::set<std::tuple<std::string, int, std::string>> seen;
  for (const Segment* seg : tree.preorder()) {
    const std::string hay = to_lower(seg->readable_text);
    for (std::size_t pos = hay.find(query); pos != std::string::npos; pos = hay.find(query, pos + 1)) {
      const SegmentLink* link = nullptr;
      for (const auto& l : seg->links) {
        if (pos >= l.text_begin && pos < l.text_end) {
          link = &l;
          break;
        }
      }
      LookupMatch m;
      m.segment_id = seg->segment_id;
      m.kind = link ? MatchKind::Navigation : MatchKind::Reading;
      if (link) {
        m.target_url = link->target_url;
        m.anchor_text = link->anchor_text;
      }
      auto key = std::make_tuple(m.segment_id, static_cast<int>(m.kind), m.target_url.value_or(""));
      if (!seen.insert(key).second) continue;
      m.snippet = snippet_around(seg->readable_text, pos, query.size());
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace convbrowse
