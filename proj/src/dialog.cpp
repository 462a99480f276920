#include "convbrowse/dialog.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "convbrowse/log.hpp"
#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

const char* to_string(Verbosity v) { return v == Verbosity::Short ? "short" : "normal"; }

SiteModel build_site_model(NavigationGraph graph, const OfferingsConfig& config) {
  SiteModel model;
  model.stats = compute_popularity(graph);
  model.offerings = rank_offerings(graph, model.stats, config);
  const PageNode* seed = graph.node(graph.seed());
  model.title = seed && !seed->title.empty() ? seed->title : parse_url(graph.seed()).host;
  model.graph = std::move(graph);
  return model;
}

// ---------------------------------------------------------------------------
// Browser

Browser::Browser(std::shared_ptr<CachedFetcher> fetcher, CrawlConfig crawl_defaults, OfferingsConfig offerings)
    : fetcher_(std::move(fetcher)), crawl_defaults_(std::move(crawl_defaults)), offerings_(std::move(offerings)) {
  offerings_.validate();
}

std::shared_ptr<const SiteModel> Browser::open_site(const std::string& seed_in) {
  std::string seed;
  try {
    seed = normalize_url(trim(seed_in));
  } catch (const UrlError& e) {
    throw SessionError("invalid seed URL '" + seed_in + "': " + e.what());
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = sites_.find(seed); it != sites_.end()) return it->second;
  }
  CrawlConfig config = crawl_defaults_;
  config.seed = seed;
  auto fetcher = fetcher_;
  Crawler crawler([fetcher](const std::string& url) { return fetcher->cached_fetch(url); });
  std::vector<CrawlRecord> records;
  try {
    records = crawler.crawl(config);
  } catch (const std::exception& e) {
    throw SessionError("could not open '" + seed_in + "': " + e.what());
  }
  auto model = std::make_shared<const SiteModel>(
      build_site_model(build_graph(records, config, fetcher_->clock()()), offerings_));
  std::lock_guard lock(mutex_);
  auto [it, _] = sites_.emplace(seed, std::move(model));
  return it->second;
}

std::shared_ptr<const SegmentTree> Browser::page(const std::string& url_in) {
  const std::string url = normalize_url(url_in);
  {
    std::lock_guard lock(mutex_);
    if (auto it = pages_.find(url); it != pages_.end()) return it->second;
  }
  auto tree = std::make_shared<const SegmentTree>(segment_page(fetcher_->cached_fetch(url)));
  std::lock_guard lock(mutex_);
  if (pages_.size() >= 512) pages_.clear();
  auto [it, _] = pages_.emplace(url, std::move(tree));
  return it->second;
}

void Browser::add_site_name(const std::string& name, const std::string& seed) {
  std::lock_guard lock(mutex_);
  names_[to_lower(collapse_whitespace(name))] = seed;
}

std::optional<std::string> Browser::resolve_site_name(std::string_view name) const {
  std::string key = to_lower(collapse_whitespace(name));
  std::lock_guard lock(mutex_);
  if (auto it = names_.find(key); it != names_.end()) return it->second;
  if (istarts_with(key, "the ")) {
    if (auto it = names_.find(key.substr(4)); it != names_.end()) return it->second;
  } else if (auto it = names_.find("the " + key); it != names_.end()) {
    return it->second;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Helpers

namespace {

const std::set<std::string> kStopwords = {"the", "a", "an", "to", "of", "page", "section", "link", "please", "my"};
const std::set<std::string> kHomeTargets = {"main page", "main", "home", "home page", "homepage",
                                            "front page", "start page", "start", "top"};
const std::set<std::string> kNextTargets = {"next", "next article", "next story", "next item"};
const std::set<std::string> kBackTargets = {"back", "previous page", "previous"};

std::set<std::string> content_tokens(std::string_view s) {
  std::set<std::string> all, kept;
  for (auto& t : word_tokens(s)) {
    all.insert(t);
    if (!kStopwords.count(t)) kept.insert(t);
  }
  return kept.empty() ? all : kept;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

double bigram_dice(std::string_view a_in, std::string_view b_in) {
  auto grams = [](std::string_view s) {
    std::multiset<std::string> g;
    std::string t = to_lower(s);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) g.insert(t.substr(i, 2));
    return g;
  };
  auto a = grams(a_in), b = grams(b_in);
  if (a.empty() || b.empty()) return 0.0;
  std::size_t inter = 0;
  for (auto it = a.begin(); it != a.end(); it = a.upper_bound(*it)) {
    inter += std::min(a.count(*it), b.count(*it));
  }
  return 2.0 * static_cast<double>(inter) / static_cast<double>(a.size() + b.size());
}

std::string plural(std::size_t n, const std::string& word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
    out += names[i];
  }
  return out;
}

std::string clip_words(const std::string& s, std::size_t limit) {
  if (s.size() <= limit) return s;
  if (limit < 3) return s.substr(0, limit);
  std::size_t cut = s.rfind(' ', limit - 3);
  if (cut == std::string::npos || cut == 0) cut = limit - 3;
  // Never split a UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return trim(s.substr(0, cut)) + "...";
}

struct LanguageName {
  const char* code;
  const char* name;
};

constexpr LanguageName kLanguages[] = {
    {"en", "english"}, {"fr", "french"},   {"de", "german"},  {"es", "spanish"}, {"it", "italian"},
    {"pt", "portuguese"}, {"nl", "dutch"}, {"ru", "russian"}, {"zh", "chinese"}, {"ja", "japanese"},
    {"ar", "arabic"},  {"pl", "polish"},   {"sv", "swedish"}, {"el", "greek"},   {"tr", "turkish"},
};

std::string language_code(const std::string& value) {
  std::string v = to_lower(trim(value));
  for (const auto& l : kLanguages) {
    if (v == l.name || v == l.code) return l.code;
  }
  return "";
}

std::string language_name(const std::string& code) {
  for (const auto& l : kLanguages) {
    if (code == l.code) {
      std::string n = l.name;
      n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
      return n;
    }
  }
  return code;
}

struct Candidate {
  std::string label;
  std::string url;
};

void add_candidate(std::vector<Candidate>& out, std::set<std::string>& seen, std::string label, std::string url) {
  if (label.empty() || !seen.insert(url).second) return;
  out.push_back({std::move(label), std::move(url)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Session

Session::Session(std::string id, std::shared_ptr<Browser> browser, std::shared_ptr<const SiteModel> site)
    : id_(std::move(id)), browser_(std::move(browser)), site_(std::move(site)) {
  if (!site_) throw SessionError("session needs a site model");
  history_.push_back(site_->graph.seed());
}

std::string Session::title_of(const std::string& url) const {
  if (const PageNode* n = site_->graph.node(url); n && !n->title.empty()) return n->title;
  try {
    auto tree = browser_->page(url);
    if (!tree->metadata.title.empty()) return tree->metadata.title;
  } catch (const std::exception&) {
  }
  try {
    auto slug = humanize_slug(last_path_segment(url));
    return slug.empty() ? parse_url(url).host : slug;
  } catch (const UrlError&) {
    return url;
  }
}

std::string Session::current_title() const { return title_of(current_url()); }

void Session::refresh_site(std::shared_ptr<const SiteModel> site) {
  if (!site) throw SessionError("session needs a site model");
  if (site->graph.seed() != site_->graph.seed()) throw SessionError("refresh_site must keep the same seed");
  site_ = std::move(site);
}

std::shared_ptr<const SegmentTree> Session::current_page() { return browser_->page(current_url()); }

void Session::check_invariants() const {
  if (history_.empty()) throw std::logic_error("navigation history is empty");
  if (prefs_.speech_rate < 1 || prefs_.speech_rate > 5) throw std::logic_error("speech rate out of range");
  if (list_shown_ > last_list_.size()) throw std::logic_error("list paging beyond the list");
  std::set<std::string> urls;
  for (const auto& b : bookmarks_) {
    if (!urls.insert(b.url).second) throw std::logic_error("duplicate bookmark " + b.url);
  }
  if (cursor_) {
    auto tree = browser_->page(current_url());
    if (!tree->find(cursor_->segment_id)) {
      throw std::logic_error("reading cursor points at a segment not on the current page");
    }
  }
}

Response Session::handle(std::string_view utterance) {
  Intent intent = parse_utterance(utterance);
  Response r;
  try {
    r = dispatch(intent);
  } catch (const std::exception& e) {
    log_error("session " + id_ + ": '" + std::string(utterance) + "' failed: " + e.what());
    r = Response{"Sorry, something went wrong while handling that. Please try again.", {}, intent.kind};
  }
  r.kind = intent.kind;
  finalize(r);
  std::string synopsis = r.text.size() > 80 ? clip_words(r.text, 80) : r.text;
  turns_.push_back(Turn{std::string(utterance), std::move(intent), std::move(synopsis)});
  return r;
}

void Session::finalize(Response& r) const {
  if (prefs_.verbosity == Verbosity::Short) {
    r.text = clip_words(r.text, kShortTextLimit);
    if (r.items.size() > kShortListLimit) r.items.resize(kShortListLimit);
  } else if (r.items.size() > kNormalListLimit) {
    r.items.resize(kNormalListLimit);
  }
}

Response Session::dispatch(const Intent& intent) {
  switch (intent.kind) {
    case IntentKind::Outline: return do_outline();
    case IntentKind::Orientation: return do_orientation();
    case IntentKind::Navigate: return do_navigate(intent.slot("target"));
    case IntentKind::Lookup: return do_lookup(intent.slot("query"));
    case IntentKind::ReadStart: return do_read_start();
    case IntentKind::ReadNext: return do_read_next();
    case IntentKind::ReadStop: return do_read_stop();
    case IntentKind::Overview: return do_overview();
    case IntentKind::About: return do_about();
    case IntentKind::Summary: return do_summary();
    case IntentKind::YesNoMeta: return do_yes_no(intent);
    case IntentKind::Open: return do_open(intent);
    case IntentKind::Bookmark: return do_bookmark(intent);
    case IntentKind::SetSpeech: return do_speech(intent.slot("direction"));
    case IntentKind::SetVerbosity: return do_verbosity(intent.slot("mode"));
    case IntentKind::Help: return do_help(false);
    case IntentKind::Unrecognized: return do_help(true);
  }
  return do_help(true);
}

Response Session::show_list(std::string text, std::vector<ResponseItem> items, std::string follow_up) {
  for (std::size_t i = 0; i < items.size(); ++i) items[i].n = static_cast<int>(i) + 1;
  last_list_ = std::move(items);
  list_follow_up_ = follow_up;
  const std::size_t cap = prefs_.verbosity == Verbosity::Short ? kShortListLimit : kNormalListLimit;
  list_shown_ = std::min(cap, last_list_.size());
  Response r;
  std::string tail = follow_up;
  if (list_shown_ < last_list_.size()) {
    tail += (tail.empty() ? "" : " ") + std::string("Say more to hear ") +
            std::to_string(last_list_.size() - list_shown_) + " more.";
  }
  if (prefs_.verbosity == Verbosity::Short && text.size() + tail.size() + 1 > kShortTextLimit) {
    text = clip_words(text, kShortTextLimit > tail.size() + 1 ? kShortTextLimit - tail.size() - 1 : 0);
  }
  r.text = tail.empty() ? text : text + " " + tail;
  r.items.assign(last_list_.begin(), last_list_.begin() + static_cast<std::ptrdiff_t>(list_shown_));
  return r;
}

Response Session::do_more() {
  if (list_shown_ >= last_list_.size()) return Response{"There is nothing more to list.", {}, {}};
  const std::size_t cap = prefs_.verbosity == Verbosity::Short ? kShortListLimit : kNormalListLimit;
  const std::size_t begin = list_shown_;
  list_shown_ = std::min(last_list_.size(), begin + cap);
  Response r;
  r.text = "More options.";
  if (!list_follow_up_.empty()) r.text += " " + list_follow_up_;
  if (list_shown_ < last_list_.size()) {
    r.text += " Say more to hear " + std::to_string(last_list_.size() - list_shown_) + " more.";
  }
  r.items.assign(last_list_.begin() + static_cast<std::ptrdiff_t>(begin),
                 last_list_.begin() + static_cast<std::ptrdiff_t>(list_shown_));
  return r;
}

Response Session::do_outline() {
  if (site_->offerings.empty()) return Response{"I couldn't find any main options on this site.", {}, {}};
  std::vector<ResponseItem> items;
  for (const auto& o : site_->offerings) items.push_back({0, o.label, o.target_url});
  return show_list("Main options on " + site_->title + ".", std::move(items), "Say open and a number to go there.");
}

Response Session::do_orientation() {
  std::string text = "You are at " + title_of(history_.back());
  const std::size_t n = history_.size();
  if (n >= 2) text += ", after " + title_of(history_[n - 2]);
  if (n >= 3) text += ", from " + title_of(history_[n - 3]);
  return Response{text + ".", {}, {}};
}

std::string Session::page_outline(const SegmentTree& tree) const {
  std::vector<std::string> parts;
  for (const auto& child : tree.root.children) {
    std::string name = spoken_role(child.role);
    if (parts.empty() || parts.back() != name) parts.push_back(name);
  }
  if (parts.empty()) return "This page has no sections.";
  std::string out = "Sections: ";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + ".";
}

Response Session::go_to(const std::string& url_in, const std::string& intro) {
  std::string url;
  std::shared_ptr<const SegmentTree> tree;
  try {
    url = normalize_url(url_in);
    tree = browser_->page(url);
  } catch (const std::exception& e) {
    log_warning("session " + id_ + ": could not open " + url_in + ": " + e.what());
    return Response{"Sorry, I couldn't open that page.", {}, {}};
  }
  history_.push_back(url);
  cursor_.reset();
  std::string title = title_of(url);
  return Response{intro + title + ". " + page_outline(*tree), {}, {}};
}

Response Session::go_back() {
  if (history_.size() < 2) return Response{"You are already at the first page.", {}, {}};
  history_.pop_back();
  cursor_.reset();
  return Response{"Back at " + title_of(current_url()) + ".", {}, {}};
}

Response Session::go_next_article() {
  auto primaries = [&](const std::string& url) {
    std::vector<std::string> out;
    try {
      auto tree = browser_->page(url);
      for (const Segment* s : tree->preorder()) {
        if (s->role == SegmentRole::Article && !s->links.empty()) out.push_back(s->links.front().target_url);
      }
    } catch (const std::exception&) {
    }
    return out;
  };
  const std::string& here = current_url();
  for (std::size_t j = history_.size() - 1; j-- > 0;) {
    auto list = primaries(history_[j]);
    auto it = std::find(list.begin(), list.end(), here);
    if (it == list.end()) continue;
    if (std::next(it) == list.end()) {
      return Response{"That was the last article on " + title_of(history_[j]) + ".", {}, {}};
    }
    return go_to(*std::next(it), "Next article: ");
  }
  auto own = primaries(here);
  for (const auto& u : own) {
    if (u != here) return go_to(u, "First article: ");
  }
  if (!lookup_trail_.empty()) {
    auto it = std::find(lookup_trail_.begin(), lookup_trail_.end(), here);
    if (it == lookup_trail_.end()) return go_to(lookup_trail_.front(), "Next result: ");
    if (std::next(it) != lookup_trail_.end()) return go_to(*std::next(it), "Next result: ");
    return Response{"That was the last result of your lookup.", {}, {}};
  }
  return Response{"I couldn't find a next article from here.", {}, {}};
}

Response Session::do_navigate(const std::string& target_in) {
  std::string target = to_lower(collapse_whitespace(target_in));
  if (target.empty()) return Response{"Where would you like to go?", {}, {}};

  if (int ord = parse_ordinal(target); ord != 0) {
    if (last_list_.empty()) {
      return Response{"There is no list to choose from yet. Ask what you can do on this website first.", {}, {}};
    }
    const std::size_t idx = ord < 0 ? last_list_.size() - 1 : static_cast<std::size_t>(ord - 1);
    if (idx >= last_list_.size()) {
      return Response{"There is no item " + target + ". The list has " + plural(last_list_.size(), "item") + ".",
                      {}, {}};
    }
    return go_to(last_list_[idx].reference);
  }
  if (kBackTargets.count(target)) return go_back();
  std::string bare = istarts_with(target, "the ") ? target.substr(4) : target;
  if (kHomeTargets.count(bare)) return go_to(site_->graph.seed());
  if (kNextTargets.count(bare)) return go_next_article();

  const auto wanted = content_tokens(bare);
  auto best_of = [&](const std::vector<Candidate>& cands) {
    std::vector<const Candidate*> best;
    double best_score = 0.0;
    for (const auto& c : cands) {
      double s = jaccard(wanted, content_tokens(c.label));
      if (s <= 0.0) continue;
      if (s > best_score) {
        best_score = s;
        best.clear();
      }
      if (s == best_score) best.push_back(&c);
    }
    return best;
  };

  std::vector<Candidate> offerings, links;
  std::set<std::string> seen_off, seen_links;
  for (const auto& o : site_->offerings) add_candidate(offerings, seen_off, o.label, o.target_url);
  try {
    auto tree = current_page();
    for (const Segment* s : tree->preorder()) {
      for (const auto& l : s->links) add_candidate(links, seen_links, l.anchor_text, l.target_url);
    }
  } catch (const std::exception& e) {
    log_warning("session " + id_ + ": current page unavailable: " + e.what());
  }

  for (const auto* cands : {&offerings, &links}) {
    auto best = best_of(*cands);
    if (best.size() == 1) return go_to(best.front()->url);
    if (best.size() > 1) {
      std::vector<ResponseItem> items;
      for (const auto* c : best) items.push_back({0, c->label, c->url});
      return show_list("More than one link matches " + target_in + ".", std::move(items),
                       "Which one? Say open and a number.");
    }
  }

  std::vector<std::pair<double, const Candidate*>> near;
  for (const auto* cands : {&offerings, &links}) {
    for (const auto& c : *cands) {
      double d = bigram_dice(bare, c.label);
      if (d > 0.0) near.emplace_back(d, &c);
    }
  }
  std::stable_sort(near.begin(), near.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<ResponseItem> items;
  std::set<std::string> urls;
  for (const auto& [d, c] : near) {
    if (items.size() == 3) break;
    if (urls.insert(c->url).second) items.push_back({0, c->label, c->url});
  }
  if (items.empty()) {
    return Response{"I couldn't find " + target_in + ". Ask what you can do on this website to hear the options.",
                    {}, {}};
  }
  return show_list("I couldn't find " + target_in + ". The closest matches are these.", std::move(items),
                   "Say open and a number to choose one.");
}

Response Session::do_lookup(const std::string& query) {
  if (trim(query).empty()) return Response{"What should I look up?", {}, {}};
  auto tree = current_page();
  auto matches = lookup(*tree, query);
  std::vector<ResponseItem> items;
  std::set<std::string> urls;
  std::size_t links = 0, mentions = 0;
  std::string first_mention;
  for (const auto& m : matches) {
    if (m.kind == MatchKind::Navigation) {
      ++links;
      if (urls.insert(*m.target_url).second) {
        items.push_back({0, m.anchor_text.empty() ? title_of(*m.target_url) : m.anchor_text, *m.target_url});
      }
    } else {
      ++mentions;
      if (first_mention.empty()) first_mention = m.snippet;
    }
  }
  std::size_t site_wide = 0;
  if (matches.size() < 3) {
    const std::string q = to_lower(collapse_whitespace(query));
    auto consider = [&](const std::string& label, const std::string& url) {
      if (url == current_url() || label.empty() || to_lower(label).find(q) == std::string::npos) return;
      if (!urls.insert(url).second) return;
      items.push_back({0, label + " (site-wide)", url});
      ++site_wide;
    };
    for (const auto& n : site_->graph.nodes()) {
      if (n.fetch_status >= 200 && n.fetch_status < 300) consider(n.title, n.url);
    }
    for (const auto& e : site_->graph.edges()) {
      if (same_site(e.target_url, site_->graph.seed())) consider(e.anchor_text, e.target_url);
    }
  }
  lookup_trail_.clear();
  for (const auto& it : items) lookup_trail_.push_back(it.reference);

  if (matches.empty() && site_wide == 0) {
    last_list_.clear();
    list_shown_ = 0;
    return Response{"I found nothing about " + query + " on this page or elsewhere on the site.", {}, {}};
  }
  std::string text = "Found " + plural(links, "article link") + " and " + plural(mentions, "mention") + " of " +
                     query + " on this page.";
  if (!first_mention.empty()) text += " Mention: \"" + first_mention + "\"";
  if (site_wide > 0) text += " " + plural(site_wide, "more page") + " elsewhere on the site.";
  if (items.empty()) {
    last_list_.clear();
    list_shown_ = 0;
    return Response{text, {}, {}};
  }
  return show_list(text, std::move(items), "Say open and a number to follow a link.");
}

Response Session::do_read_start() {
  auto tree = current_page();
  const Segment* main = tree->main_content();
  std::vector<std::string> sentences;
  if (main) sentences = split_sentences(subtree_text(*main));
  if (sentences.empty()) {
    cursor_.reset();
    return Response{"There is nothing to read here. " + page_outline(*tree), {}, {}};
  }
  cursor_ = ReadingCursor{main->segment_id, 0};
  return do_read_next();
}

Response Session::do_read_next() {
  if (!cursor_) {
    if (list_shown_ < last_list_.size()) return do_more();
    return Response{"Nothing is being read right now. Say read article to start.", {}, {}};
  }
  auto tree = current_page();
  const Segment* seg = tree->find(cursor_->segment_id);
  if (!seg) {
    cursor_.reset();
    return Response{"Nothing is being read right now. Say read article to start.", {}, {}};
  }
  auto sentences = split_sentences(subtree_text(*seg));
  if (cursor_->sentence >= sentences.size()) return Response{"End of article.", {}, {}};
  const bool is_short = prefs_.verbosity == Verbosity::Short;
  const std::size_t chunk = is_short ? 2 : 5;
  std::string text;
  std::size_t i = cursor_->sentence;
  const std::size_t stop = std::min(sentences.size(), i + chunk);
  for (; i < stop; ++i) {
    std::string sentence = sentences[i];
    if (char last = sentence.back(); last != '.' && last != '!' && last != '?' && last != ':') sentence += '.';
    std::string next = text.empty() ? sentence : text + " " + sentence;
    if (is_short && !text.empty() && next.size() + 16 > kShortTextLimit) break;
    text = std::move(next);
  }
  cursor_->sentence = i;
  if (i >= sentences.size()) text += " End of article.";
  return Response{text, {}, {}};
}

Response Session::do_read_stop() {
  if (!cursor_) return Response{"Nothing is being read right now.", {}, {}};
  cursor_.reset();
  return Response{"Stopped reading.", {}, {}};
}

Response Session::do_overview() {
  std::string description;
  try {
    description = browser_->page(site_->graph.seed())->metadata.description;
  } catch (const std::exception& e) {
    log_warning("session " + id_ + ": seed page unavailable: " + e.what());
  }
  if (description.empty()) return Response{site_->title + ". No description available.", {}, {}};
  return Response{site_->title + ". " + description, {}, {}};
}

Response Session::do_about() {
  auto tree = current_page();
  const auto& authors = tree->metadata.authors;
  if (authors.empty()) return Response{"I couldn't find any authors for this page.", {}, {}};
  return Response{"This page is by " + join_names(authors) + ".", {}, {}};
}

Response Session::do_summary() {
  auto tree = current_page();
  Summary s = summarize(*tree, prefs_.verbosity == Verbosity::Short ? 2 : 4);
  if (s.status == SummaryStatus::NothingToSummarize) return Response{"There is nothing to summarize here.", {}, {}};
  return Response{"Summary: " + s.text, {}, {}};
}

Response Session::do_yes_no(const Intent& intent) {
  if (intent.slot("attribute") != "language") return do_help(true);
  const std::string asked = intent.slot("value");
  auto tree = current_page();
  const std::string& declared = tree->metadata.language;
  if (declared.empty()) return Response{"Unknown. This page does not declare its language.", {}, {}};
  const std::string code = language_code(asked);
  if (code.empty()) return Response{"Unknown. I don't recognize the language " + asked + ".", {}, {}};
  if (code == declared) return Response{"Yes, it is written in " + language_name(declared) + ".", {}, {}};
  return Response{"No, it is written in " + language_name(declared) + ".", {}, {}};
}

Response Session::do_open(const Intent& intent) {
  const std::string target = intent.slot("target");
  if (intent.slot("search") == "web") {
    std::string text = "I can't search the web.";
    if (browser_->resolve_site_name(target)) {
      text += " Say open " + target + " to go there directly.";
    } else {
      text += " Say open followed by a site address.";
    }
    return Response{text, {}, {}};
  }
  std::optional<std::string> seed = browser_->resolve_site_name(target);
  if (!seed && (target.find("://") != std::string::npos ||
                (target.find('.') != std::string::npos && target.find(' ') == std::string::npos))) {
    seed = target.find("://") == std::string::npos ? "http://" + target : target;
  }
  if (!seed) return do_navigate(target);
  std::shared_ptr<const SiteModel> model;
  try {
    model = browser_->open_site(*seed);
  } catch (const SessionError& e) {
    log_warning("session " + id_ + ": " + e.what());
    return Response{"Sorry, I couldn't open " + target + ".", {}, {}};
  }
  site_ = std::move(model);
  history_.assign(1, site_->graph.seed());
  cursor_.reset();
  last_list_.clear();
  list_shown_ = 0;
  lookup_trail_.clear();
  return Response{"Opened " + site_->title + ". Your browsing history was cleared.", {}, {}};
}

Response Session::do_bookmark(const Intent& intent) {
  if (intent.slot("action") == "list") {
    if (bookmarks_.empty()) return Response{"You have no bookmarks.", {}, {}};
    std::vector<ResponseItem> items;
    for (const auto& b : bookmarks_) items.push_back({0, b.label, b.url});
    return show_list("Your bookmarks.", std::move(items), "Say open and a number to go there.");
  }
  const std::string& url = current_url();
  for (const auto& b : bookmarks_) {
    if (b.url == url) return Response{"This page is already bookmarked as " + b.label + ".", {}, {}};
  }
  std::string label = intent.slot("label");
  if (label.empty()) label = current_title();
  bookmarks_.push_back({label, url});
  return Response{"Bookmarked " + label + ".", {}, {}};
}

Response Session::do_speech(const std::string& direction) {
  const int delta = direction == "decrease" ? -1 : 1;
  const int next = std::clamp(prefs_.speech_rate + delta, 1, 5);
  if (next == prefs_.speech_rate) {
    return Response{std::string("Speech rate is already at the ") + (delta > 0 ? "maximum" : "minimum") + ", " +
                        std::to_string(next) + ".",
                    {}, {}};
  }
  prefs_.speech_rate = next;
  return Response{"Speech rate is now " + std::to_string(next) + " of 5.", {}, {}};
}

Response Session::do_verbosity(const std::string& mode) {
  prefs_.verbosity = mode == "short" ? Verbosity::Short : Verbosity::Normal;
  return Response{prefs_.verbosity == Verbosity::Short ? "Short interactions are on." : "Short interactions are off.",
                  {}, {}};
}

Response Session::do_help(bool unrecognized) {
  std::string text = unrecognized ? "Sorry, I can't help with that. " : "";
  text +=
      "You can say: what can I do in this website, where am I, go to a section, lookup a topic, read article, "
      "stop reading, go back, summarise the article, or bookmark page.";
  return Response{text, {}, {}};
}

// ---------------------------------------------------------------------------

std::unique_ptr<Session> open_session(std::shared_ptr<Browser> browser, const std::string& seed,
                                      std::string session_id) {
  if (!browser) throw SessionError("no browser configured");
  auto site = browser->open_site(seed);
  if (session_id.empty()) session_id = hex64(fnv1a64(seed + "\x1f" + std::to_string(system_now()))).substr(0, 12);
  return std::make_unique<Session>(std::move(session_id), std::move(browser), std::move(site));
}

std::string transcript_lines(std::string_view utterance, const Response& response) {
  std::ostringstream out;
  out << "U: " << utterance << '\n';
  out << "A: " << response.text << '\n';
  for (const auto& item : response.items) out << "A:   " << item.n << ". " << item.label << '\n';
  return out.str();
}

}  // namespace convbrowse
