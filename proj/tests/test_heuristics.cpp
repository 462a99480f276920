#include <doctest.h>

#include <random>
#include <sstream>

#include "convbrowse/heuristics.hpp"
#include "support.hpp"

using namespace convbrowse;

namespace {

CrawlRecord record(const std::string& url, std::vector<std::pair<std::string, Region>> links) {
  CrawlRecord r;
  r.url = url;
  r.fetch_status = 200;
  for (std::size_t i = 0; i < links.size(); ++i) {
    r.outlinks.push_back(LinkOccurrence{url, links[i].first, "", static_cast<int>(i), links[i].second});
  }
  return r;
}

NavigationGraph graph_of(const std::vector<CrawlRecord>& recs) {
  CrawlConfig c;
  c.seed = recs.front().url;
  return build_graph(recs, c);
}

std::vector<std::string> order(const std::vector<Offering>& offs) {
  std::vector<std::string> out;
  for (const auto& o : offs) out.push_back(o.target_url);
  return out;
}

NavigationGraph four_pages() {
  std::vector<CrawlRecord> recs;
  for (int p = 0; p < 4; ++p) {
    recs.push_back(record("http://s.test/page" + std::to_string(p), {{"http://s.test/A", Region::Nav},
                                                                     {"http://s.test/B", Region::Nav},
                                                                     {"http://s.test/C", Region::Nav},
                                                                     {"http://s.test/F", Region::Footer}}));
  }
  return graph_of(recs);
}

}  // namespace

TEST_CASE("four-page example: nav links outrank the footer link") {
  auto g = four_pages();
  auto offs = rank_offerings(g, compute_popularity(g), OfferingsConfig{});
  CHECK(order(offs) ==
        std::vector<std::string>{"http://s.test/A", "http://s.test/B", "http://s.test/C", "http://s.test/F"});
  CHECK(offs[0].score == 6.0);
  CHECK(offs[3].score == 2.0);
  for (std::size_t i = 0; i < offs.size(); ++i) CHECK(offs[i].rank == static_cast<int>(i + 1));
  CHECK(offs[0].label == "A");
}

TEST_CASE("threshold caps fifty candidates at thirty") {
  std::vector<std::pair<std::string, Region>> links;
  for (int i = 0; i < 50; ++i) links.push_back({"http://s.test/t" + std::to_string(i), Region::Main});
  auto g = graph_of({record("http://s.test/", links)});
  auto offs = rank_offerings(g, compute_popularity(g), OfferingsConfig{});
  CHECK(offs.size() == 30);
  CHECK(offs.front().target_url == "http://s.test/t0");
}

TEST_CASE("single page with one self link") {
  auto g = graph_of({record("http://s.test/", {{"http://s.test/", Region::Header}})});
  auto offs = rank_offerings(g, compute_popularity(g), OfferingsConfig{});
  REQUIRE(offs.size() == 1);
  CHECK(offs[0].rank == 1);
  CHECK(offs[0].target_url == "http://s.test/");
}

TEST_CASE("off-site targets are never offered") {
  auto g = graph_of({record("http://s.test/", {{"http://other.test/x", Region::Nav},
                                               {"http://other.test/x", Region::Nav},
                                               {"http://www.s.test/in", Region::Main}})});
  CHECK(order(rank_offerings(g, compute_popularity(g), OfferingsConfig{})) ==
        std::vector<std::string>{"http://www.s.test/in"});
}

TEST_CASE("modal region ties go to the higher weight") {
  LinkStats s;
  s.region_histogram[static_cast<std::size_t>(Region::Footer)] = 2;
  s.region_histogram[static_cast<std::size_t>(Region::Nav)] = 2;
  CHECK(modal_region(s, RegionWeights{}) == Region::Nav);
  s.region_histogram[static_cast<std::size_t>(Region::Footer)] = 3;
  CHECK(modal_region(s, RegionWeights{}) == Region::Footer);
}

TEST_CASE("float ties are grouped with a relative tolerance") {
  // 5 x 1.2 is 6.000000000000001 in binary floating point, 4 x 1.5 is 6.
  std::vector<CrawlRecord> recs;
  for (int p = 0; p < 5; ++p) {
    std::vector<std::pair<std::string, Region>> links{{"http://s.test/z-header", Region::Header}};
    if (p < 4) links.insert(links.begin(), {"http://s.test/a-nav", Region::Nav});
    recs.push_back(record("http://s.test/p" + std::to_string(p), links));
  }
  auto g = graph_of(recs);
  auto offs = rank_offerings(g, compute_popularity(g), OfferingsConfig{});
  REQUIRE(offs.size() == 2);
  CHECK(offs[0].target_url == "http://s.test/a-nav");
}

TEST_CASE("distinct-pages popularity and score-gap cutoff") {
  std::vector<CrawlRecord> recs{
      record("http://s.test/", {{"http://s.test/x", Region::Main}, {"http://s.test/x", Region::Main},
                                {"http://s.test/x", Region::Main}, {"http://s.test/y", Region::Main}}),
      record("http://s.test/2", {{"http://s.test/y", Region::Main}}),
  };
  auto g = graph_of(recs);
  auto stats = compute_popularity(g);
  OfferingsConfig c;
  CHECK(order(rank_offerings(g, stats, c)).front() == "http://s.test/x");
  c.popularity_mode = PopularityMode::DistinctPages;
  CHECK(order(rank_offerings(g, stats, c)).front() == "http://s.test/y");

  std::vector<std::pair<std::string, Region>> links;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 10; ++k) links.push_back({"http://s.test/big" + std::to_string(i), Region::Nav});
  for (int i = 0; i < 5; ++i) links.push_back({"http://s.test/small" + std::to_string(i), Region::Main});
  auto g2 = graph_of({record("http://s.test/", links)});
  OfferingsConfig gap;
  gap.cutoff = CutoffMode::ScoreGap;
  CHECK(rank_offerings(g2, compute_popularity(g2), gap).size() == 3);
}

TEST_CASE("weights and config parsing") {
  RegionWeights w;
  CHECK(w[Region::Nav] == 1.5);
  CHECK(w[Region::Header] == 1.2);
  CHECK(w[Region::Main] == 1.0);
  CHECK(w[Region::Other] == 1.0);
  CHECK(w[Region::Aside] == 0.8);
  CHECK(w[Region::Footer] == 0.5);
  CHECK_THROWS_AS(w.set(Region::Nav, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(w.set(Region::Nav, -1.0), std::invalid_argument);
  CHECK(w.scaled(2.0)[Region::Footer] == 1.0);

  OfferingsConfig c;
  std::istringstream in("# weights\nnav = 2.5\nfooter=0.25  # low\n\nthreshold=12\npopularity_mode=distinct_pages\ncutoff=score_gap\n");
  apply_config_lines(c, in);
  CHECK(c.region_weights[Region::Nav] == 2.5);
  CHECK(c.region_weights[Region::Footer] == 0.25);
  CHECK(c.threshold == 12);
  CHECK(c.popularity_mode == PopularityMode::DistinctPages);
  CHECK(c.cutoff == CutoffMode::ScoreGap);
  CHECK_THROWS(apply_config_entry(c, "sidebar", "1"));
  CHECK_THROWS(apply_config_entry(c, "nav", "abc"));
  CHECK_THROWS(apply_config_entry(c, "threshold", "0"));
  std::istringstream bad("nav\n");
  CHECK_THROWS(apply_config_lines(c, bad));
}

TEST_CASE("precision and recall") {
  auto offs = [](std::vector<std::string> urls) {
    std::vector<Offering> out;
    for (auto& u : urls) out.push_back(Offering{u, "", 1.0, 0});
    return out;
  };
  std::set<std::string> truth{"http://s.test/a", "http://s.test/b", "http://s.test/c", "http://s.test/d"};
  auto pr = evaluate_offerings(offs({"http://s.test/a", "http://s.test/b", "http://s.test/x"}), truth);
  CHECK(pr.hits == 2);
  CHECK(pr.precision == doctest::Approx(2.0 / 3.0));
  CHECK(pr.recall == 0.5);
  auto same = evaluate_offerings(offs({truth.begin(), truth.end()}), truth);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  auto disjoint = evaluate_offerings(offs({"http://s.test/q"}), truth);
  CHECK(disjoint.precision == 0.0);
  CHECK(disjoint.recall == 0.0);
  auto none = evaluate_offerings({}, truth);
  CHECK(none.empty_prediction);
  CHECK(none.precision == 0.0);
  auto normalized = evaluate_offerings(offs({"HTTP://S.TEST/a#x", "http://s.test/a"}), truth);
  CHECK(normalized.hits == 1);
  CHECK(normalized.predicted == 1);
  CHECK_THROWS_AS(evaluate_offerings(offs({"http://s.test/a"}), {}), std::invalid_argument);
}

TEST_CASE("random graphs: oracle, scale invariance, monotonicity, bounds") {
  std::mt19937 rng(77);
  const Region regions[] = {Region::Header, Region::Nav, Region::Main, Region::Footer, Region::Aside, Region::Other};
  for (int trial = 0; trial < 60; ++trial) {
    const int pages = 1 + static_cast<int>(rng() % 10);
    std::vector<CrawlRecord> recs;
    for (int p = 0; p < pages; ++p) {
      std::vector<std::pair<std::string, Region>> links;
      for (unsigned k = rng() % 12; k > 0; --k) {
        const std::string host = rng() % 8 == 0 ? "http://away.test/" : "http://s.test/";
        links.push_back({host + "t" + std::to_string(rng() % 15), regions[rng() % 6]});
      }
      recs.push_back(record("http://s.test/p" + std::to_string(p), links));
    }
    auto g = graph_of(recs);
    auto stats = compute_popularity(g);
    OfferingsConfig c;
    c.threshold = 1 + static_cast<int>(rng() % 20);
    auto offs = rank_offerings(g, stats, c);

    auto oracle = testsupport::oracle_offerings(g, c.threshold, testsupport::default_weight_tenths());
    REQUIRE(offs.size() == oracle.size());
    for (std::size_t i = 0; i < offs.size(); ++i) {
      CHECK(offs[i].target_url == oracle[i].url);
      CHECK(offs[i].score == doctest::Approx(oracle[i].score_tenths / 10.0).epsilon(1e-12));
    }

    for (double k : {0.1, 7.0, 1e-3, 1e3}) {
      OfferingsConfig scaled = c;
      scaled.region_weights = c.region_weights.scaled(k);
      CHECK(order(rank_offerings(g, stats, scaled)) == order(offs));
    }

    for (const auto& o : offs) CHECK(same_site(o.target_url, g.seed()));

    if (!offs.empty()) {
      const auto& pick = offs[rng() % offs.size()];
      const Region r = modal_region(stats.at(pick.target_url), c.region_weights);
      auto more = recs;
      more[0].outlinks.push_back(
          LinkOccurrence{more[0].url, pick.target_url, "", static_cast<int>(more[0].outlinks.size()), r});
      auto g2 = graph_of(more);
      auto offs2 = rank_offerings(g2, compute_popularity(g2), c);
      auto rank_of = [&](const std::vector<Offering>& v) {
        for (const auto& o : v)
          if (o.target_url == pick.target_url) return o.rank;
        return 1 << 30;
      };
      CHECK(rank_of(offs2) <= rank_of(offs));
    }
  }
}

TEST_CASE("lookup on the gazette front page") {
  auto fetcher = StaticFetcher(testsupport::corpus_transport(), FetchConfig{});
  auto tree = segment_page(fetcher.fetch("http://gazette.test/"));
  auto matches = lookup(tree, "covid");
  REQUIRE(matches.size() == 3);
  int nav = 0, reading = 0;
  for (const auto& m : matches) {
    if (m.kind == MatchKind::Navigation) {
      REQUIRE(m.target_url.has_value());
      if (m.target_url->find("/articles/covid") != std::string::npos) ++nav;
    } else {
      CHECK_FALSE(m.target_url.has_value());
      if (m.snippet.find("latest COVID figures") != std::string::npos) ++reading;
    }
  }
  CHECK(nav == 2);
  CHECK(reading == 1);
  CHECK(lookup(tree, "zebra").empty());
  CHECK(lookup(tree, "").empty());
}

TEST_CASE("lookup inside an anchor label is a navigation match") {
  PageSource src{"http://s.test/", R"(<main><p>Read <a href="/covid">COVID updates</a> daily.</p></main>)", 0, 200,
                 "text/html"};
  auto m = lookup(segment_page(src), "covid");
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == MatchKind::Navigation);
  CHECK(*m[0].target_url == "http://s.test/covid");
  CHECK(m[0].anchor_text == "COVID updates");
}

TEST_CASE("snippets stay on the match's line and on word boundaries") {
  const std::string text = "Heading line\nThe quick brown fox jumps over the lazy dog near the river bank.";
  const auto pos = text.find("fox");
  const std::string s = snippet_around(text, pos, 3, 12);
  CHECK(s.find("Heading") == std::string::npos);
  CHECK(s.find("fox") != std::string::npos);
  CHECK(s.find('\n') == std::string::npos);
  CHECK(s.front() != ' ');
  CHECK(s.back() != ' ');
}
