#include "convbrowse/serialize.hpp"

namespace convbrowse {

Json to_json(const Segment& segment) {
  Json links = Json::array();
  for (const auto& l : segment.links) {
    links.push_back({{"n", l.n}, {"target_url", l.target_url}, {"anchor_text", l.anchor_text}});
  }
  Json children = Json::array();
  for (const auto& c : segment.children) children.push_back(to_json(c));
  return {{"segment_id", segment.segment_id},
          {"role", to_string(segment.role)},
          {"label", segment.label},
          {"readable_text", segment.readable_text},
          {"links", std::move(links)},
          {"children", std::move(children)}};
}

Json to_json(const SegmentTree& tree) {
  const auto& m = tree.metadata;
  return {{"url", tree.url},
          {"metadata",
           {{"title", m.title},
            {"description", m.description},
            {"language", m.language},
            {"authors", m.authors},
            {"last_modified", m.last_modified}}},
          {"root", to_json(tree.root)}};
}

Json to_json(const Intent& intent) {
  return {{"kind", to_string(intent.kind)}, {"slots", intent.slots}, {"text", intent.text}};
}

Json to_json(const OfferingsConfig& config) {
  Json weights = Json::object();
  for (Region r : kAllRegions) weights[to_string(r)] = config.region_weights[r];
  return {{"threshold", config.threshold},
          {"popularity_mode", to_string(config.popularity_mode)},
          {"cutoff", to_string(config.cutoff)},
          {"region_weights", std::move(weights)}};
}

Json to_json(const Offering& o) {
  return {{"rank", o.rank}, {"label", o.label}, {"target_url", o.target_url}, {"score", o.score}};
}

Json to_json(const EvalReport& report) {
  Json sites = Json::array();
  for (const auto& s : report.sites) {
    Json j = {{"id", s.site_id}, {"skipped", s.skipped}};
    if (s.skipped) {
      j["note"] = s.note;
    } else {
      j["threshold"] = s.threshold;
      j["hits"] = s.hits;
      j["predicted"] = s.predicted;
      j["truth"] = s.truth;
      j["precision"] = s.precision.value();
      j["precision_exact"] = s.precision.str();
      j["recall"] = s.recall.value();
      j["recall_exact"] = s.recall.str();
      j["empty_prediction"] = s.empty_prediction;
    }
    sites.push_back(std::move(j));
  }
  return {{"averaging", "macro"},
          {"oracle_threshold", report.oracle_threshold},
          {"config", to_json(report.config)},
          {"crawl", {{"max_depth", report.crawl.max_depth}, {"max_pages", report.crawl.max_pages}}},
          {"sites", std::move(sites)},
          {"aggregate",
           {{"evaluated", report.evaluated},
            {"precision", report.macro_precision.value()},
            {"precision_exact", report.macro_precision.str()},
            {"recall", report.macro_recall.value()},
            {"recall_exact", report.macro_recall.str()}}}};
}

Json response_envelope(const Response& response, const std::string& session_id) {
  Json items = Json::array();
  for (const auto& it : response.items) items.push_back({{"n", it.n}, {"label", it.label}});
  return {{"text", response.text}, {"items", std::move(items)}, {"kind", to_string(response.kind)},
          {"session_id", session_id}};
}

Json session_summary(const Session& session) {
  Json history = Json::array();
  for (const auto& url : session.nav_history()) history.push_back({{"url", url}, {"title", session.title_of(url)}});
  Json bookmarks = Json::array();
  for (const auto& b : session.bookmarks()) bookmarks.push_back({{"label", b.label}, {"url", b.url}});
  return {{"session_id", session.id()},
          {"site", {{"seed", session.site().graph.seed()}, {"title", session.site().title}}},
          {"current_page", {{"url", session.current_url()}, {"title", session.current_title()}}},
          {"history", std::move(history)},
          {"bookmarks", std::move(bookmarks)},
          {"prefs",
           {{"verbosity", to_string(session.prefs().verbosity)}, {"speech_rate", session.prefs().speech_rate}}},
          {"turns", session.conversation().size()}};
}

}  // namespace convbrowse
