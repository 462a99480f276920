#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "convbrowse/landmarks.hpp"
#include "convbrowse/page_model.hpp"
#include "convbrowse/site_model.hpp"

namespace convbrowse {

enum class PopularityMode { Occurrences, DistinctPages };
enum class CutoffMode { Static, ScoreGap };

const char* to_string(PopularityMode m);
const char* to_string(CutoffMode m);

class RegionWeights {
 public:
  // nav 1.5, header 1.2, main 1.0, other 1.0, aside 0.8, footer 0.5
  RegionWeights();

  double operator[](Region r) const { return w_[static_cast<std::size_t>(r)]; }
  void set(Region r, double weight);  // throws std::invalid_argument unless weight > 0
  RegionWeights scaled(double factor) const;

 private:
  std::array<double, 6> w_{};
};

struct OfferingsConfig {
  int threshold = 30;
  RegionWeights region_weights;
  PopularityMode popularity_mode = PopularityMode::Occurrences;
  // ScoreGap additionally cuts the ranked list at its largest relative drop.
  CutoffMode cutoff = CutoffMode::Static;

  void validate() const;
};

// Applies "key=value" lines: threshold, popularity_mode, cutoff, and one
// weight per region name ("nav=1.5"). '#' starts a comment.
void apply_config_lines(OfferingsConfig& config, std::istream& in);
void apply_config_entry(OfferingsConfig& config, std::string_view key, std::string_view value);

struct Offering {
  std::string target_url;
  std::string label;
  double score = 0.0;
  int rank = 0;
};

// Region a target is "at": its most frequent region, ties to the higher weight.
Region modal_region(const LinkStats& stats, const RegionWeights& weights);

// Scores are popularity x modal-region weight over targets on the seed's
// site; sorted by score (relative tolerance 1e-9 counts as a tie), then
// smallest min_dom_index, then URL; cut to the threshold.
std::vector<Offering> rank_offerings(const NavigationGraph& graph, const LinkStatsMap& stats,
                                     const OfferingsConfig& config);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  int hits = 0;
  int predicted = 0;
  int truth = 0;
  bool empty_prediction = false;
};

// Membership is by normalized URL. Throws std::invalid_argument on empty truth.
PrecisionRecall evaluate_offerings(const std::vector<Offering>& predicted, const std::set<std::string>& truth);

enum class MatchKind { Reading, Navigation };

struct LookupMatch {
  std::string segment_id;
  MatchKind kind = MatchKind::Reading;
  std::string snippet;
  std::optional<std::string> target_url;  // set iff kind == Navigation
  std::string anchor_text;                // navigation matches only
};

// Case-insensitive scan of every segment's readable text, in document order.
// A hit inside an anchor's words is a navigation match carrying the link
// target; any other hit is a reading match. One match per
// (segment, kind, target).
std::vector<LookupMatch> lookup(const SegmentTree& tree, std::string_view query);

// Text window of +-radius bytes around [pos, pos+len), clipped to words and
// kept within the match's line.
std::string snippet_around(std::string_view text, std::size_t pos, std::size_t len, std::size_t radius = 60);

}  // namespace convbrowse
