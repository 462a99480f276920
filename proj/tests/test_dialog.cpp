#include <doctest.h>

#include <random>

#include "convbrowse/dialog.hpp"
#include "convbrowse/log.hpp"
#include "support.hpp"

using namespace convbrowse;

namespace {

const char* kNav = R"(<nav><a href="/">Home</a><a href="/world">World news</a><a href="/local">Local news</a>
  <a href="/story">Big story</a><a href="/blank">Blank</a></nav>)";

std::shared_ptr<MemoryTransport> news_site() {
  auto t = std::make_shared<MemoryTransport>();
  auto page = [&](const std::string& path, const std::string& head, const std::string& main) {
    t->add("http://news.test" + path, "<html" + head + "><body>" + kNav + "<main>" + main + "</main></body></html>");
  };
  page("/", " lang=\"en\"><head><title>News Test</title><meta name=\"description\" content=\"Stories.\"></head",
       "<h1>Front</h1><p>Welcome to the front page.</p>");
  page("/world", "><head><title>World</title></head", "<p>World stories.</p>");
  page("/local", "><head><title>Local</title></head", "<p>Local stories.</p>");
  page("/story",
       " lang=\"fr\"><head><title>Story</title><meta name=\"author\" content=\"Ann Writer\"></head",
       "<p>S1 one. S2 two. S3 three. S4 four. S5 five. S6 six. S7 seven.</p>");
  page("/blank", "><head><title>Blank</title></head", "");
  return t;
}

std::unique_ptr<Session> news_session() {
  auto browser = testsupport::make_browser(news_site());
  return open_session(browser, "http://news.test/", "s1");
}

struct Snapshot {
  std::vector<std::string> history;
  std::optional<ReadingCursor> cursor;
  std::vector<Bookmark> bookmarks;
  Preferences prefs;
  bool operator==(const Snapshot&) const = default;
};

Snapshot snap(const Session& s) { return {s.nav_history(), s.reading_cursor(), s.bookmarks(), s.prefs()}; }

}  // namespace

TEST_CASE("session opens at the seed") {
  auto s = news_session();
  CHECK(s->current_url() == "http://news.test/");
  CHECK(s->nav_history().size() == 1);
  CHECK(s->current_title() == "News Test");
  CHECK(s->id() == "s1");
  CHECK(s->site().title == "News Test");
}

TEST_CASE("invalid or unreachable seeds name the input") {
  auto browser = testsupport::make_browser(news_site());
  try {
    open_session(browser, "not a url");
    FAIL("expected SessionError");
  } catch (const SessionError& e) {
    CHECK(std::string(e.what()).find("not a url") != std::string::npos);
  }
  CHECK_THROWS_AS(open_session(browser, "http://nowhere.test/"), SessionError);
}

TEST_CASE("second open reuses the crawl and the cache") {
  testsupport::TempDir dir;
  auto recorder = std::make_shared<RecordingTransport>(news_site());
  auto fetcher = std::make_shared<StaticFetcher>(recorder, FetchConfig{});
  auto cached = std::make_shared<CachedFetcher>(fetcher, DocumentCache(dir.path()));
  auto b1 = std::make_shared<Browser>(cached, CrawlConfig{}, OfferingsConfig{});
  open_session(b1, "http://news.test/");
  const auto after_first = recorder->request_count();
  CHECK(after_first > 0);
  open_session(b1, "http://news.test/");
  auto b2 = std::make_shared<Browser>(cached, CrawlConfig{}, OfferingsConfig{});
  open_session(b2, "http://news.test/");
  CHECK(recorder->request_count() == after_first);
}

TEST_CASE("outline lists offerings by label") {
  auto s = news_session();
  auto r = s->handle("What can I do in this website?");
  CHECK(r.kind == IntentKind::Outline);
  REQUIRE(r.items.size() == 5);
  std::set<std::string> labels;
  for (const auto& it : r.items) labels.insert(it.label);
  CHECK(labels == std::set<std::string>{"Home", "World news", "Local news", "Big story", "Blank"});
  for (std::size_t i = 0; i < r.items.size(); ++i) CHECK(r.items[i].n == static_cast<int>(i + 1));
}

TEST_CASE("ambiguous target asks, without moving") {
  auto s = news_session();
  auto r = s->handle("go to news");
  CHECK(r.kind == IntentKind::Navigate);
  CHECK(r.items.size() == 2);
  CHECK(s->current_url() == "http://news.test/");
  CHECK(s->nav_history().size() == 1);
  auto pick = s->handle("open 2");
  CHECK(s->current_url() == r.items[1].reference);
}

TEST_CASE("navigate, back, main page") {
  auto s = news_session();
  s->handle("go to local news");
  CHECK(s->current_url() == "http://news.test/local");
  s->handle("go back");
  CHECK(s->current_url() == "http://news.test/");
  CHECK(s->handle("go back").text == "You are already at the first page.");
  s->handle("go to big story");
  s->handle("go to the main page");
  CHECK(s->current_url() == "http://news.test/");
  CHECK(s->nav_history().size() == 3);
  auto where = s->handle("Where am I?");
  CHECK(where.text == "You are at News Test, after Story, from News Test.");
}

TEST_CASE("unknown target suggests near matches") {
  auto s = news_session();
  auto r = s->handle("go to wrld nws");
  CHECK_FALSE(r.items.empty());
  CHECK(r.items.size() <= 3);
  CHECK(r.items.front().label == "World news");
  CHECK(s->nav_history().size() == 1);
}

TEST_CASE("reading a seven-sentence article") {
  auto s = news_session();
  s->handle("go to big story");
  auto first = s->handle("Read article");
  CHECK(first.text == "S1 one. S2 two. S3 three. S4 four. S5 five.");
  auto rest = s->handle("next");
  CHECK(rest.text == "S6 six. S7 seven. End of article.");
  CHECK(s->handle("next").text == "End of article.");
  CHECK(s->handle("stop reading").text == "Stopped reading.");
  auto again = s->handle("stop reading");
  CHECK(again.text == "Nothing is being read right now.");
  CHECK_FALSE(s->reading_cursor().has_value());
}

TEST_CASE("short verbosity reads two sentences at a time") {
  auto s = news_session();
  s->handle("turn on short interactions");
  s->handle("go to big story");
  CHECK(s->handle("read article").text == "S1 one. S2 two.");
  CHECK(s->handle("continue").text == "S3 three. S4 four.");
}

TEST_CASE("empty main content") {
  auto s = news_session();
  s->handle("go to blank");
  auto r = s->handle("read article");
  CHECK(r.text.rfind("There is nothing to read here. Sections:", 0) == 0);
  CHECK_FALSE(s->reading_cursor().has_value());
}

TEST_CASE("metadata answers say unknown exactly when the field is empty") {
  auto s = news_session();
  CHECK(s->handle("Is the article written in English?").text == "Yes, it is written in English.");
  CHECK(s->handle("What is this website about?").text == "News Test. Stories.");
  CHECK(s->handle("Who are the authors of this article?").text == "I couldn't find any authors for this page.");
  s->handle("go to big story");
  CHECK(s->handle("Is the article written in English?").text == "No, it is written in French.");
  CHECK(s->handle("Who are the authors of this article?").text == "This page is by Ann Writer.");
  s->handle("go to world news");
  CHECK(s->handle("Is the article written in English?").text.rfind("Unknown.", 0) == 0);
}

TEST_CASE("summary") {
  auto s = news_session();
  s->handle("go to big story");
  CHECK(s->handle("Summarise the article?").text == "Summary: S1 one. S2 two. S3 three. S4 four.");
  s->handle("go to blank");
  CHECK(s->handle("summarize").text == "There is nothing to summarize here.");
}

TEST_CASE("bookmarks, speech rate, verbosity") {
  auto s = news_session();
  CHECK(s->handle("Bookmark page Front").text == "Bookmarked Front.");
  CHECK(s->handle("bookmark this page").text == "This page is already bookmarked as Front.");
  s->handle("go to world news");
  s->handle("bookmark page");
  REQUIRE(s->bookmarks().size() == 2);
  CHECK(s->bookmarks()[1].label == "World");
  auto list = s->handle("show bookmarks");
  CHECK(list.items.size() == 2);
  s->handle("open 1");
  CHECK(s->current_url() == "http://news.test/");

  for (int i = 0; i < 4; ++i) s->handle("Increase speech rate");
  CHECK(s->prefs().speech_rate == 5);
  CHECK(s->handle("faster").text == "Speech rate is already at the maximum, 5.");
  s->handle("decrease speech rate");
  CHECK(s->prefs().speech_rate == 4);
  s->handle("Turn on short interactions");
  CHECK(s->prefs().verbosity == Verbosity::Short);
  s->handle("turn off short interactions");
  CHECK(s->prefs().verbosity == Verbosity::Normal);
}

TEST_CASE("gibberish gets help and changes nothing") {
  auto s = news_session();
  s->handle("go to big story");
  s->handle("read article");
  const Snapshot before = snap(*s);
  auto r = s->handle("When are sports coming back?");
  CHECK(r.kind == IntentKind::Unrecognized);
  CHECK(r.text.rfind("Sorry, I can't help with that.", 0) == 0);
  CHECK(snap(*s) == before);
  CHECK(s->conversation().size() == 3);
  CHECK(s->conversation().back().intent.kind == IntentKind::Unrecognized);
}

TEST_CASE("web search is declined, opening a named site resets history") {
  auto browser = testsupport::corpus_browser();
  auto s = open_session(browser, "http://sports.test/");
  s->handle("What can I do in this website?");
  s->handle("open 2");
  auto search = s->handle("Search for The Tambury Gazette");
  CHECK(search.text == "I can't search the web. Say open The Tambury Gazette to go there directly.");
  auto open = s->handle("Open The Tambury Gazette");
  CHECK(open.text == "Opened The Tambury Gazette. Your browsing history was cleared.");
  CHECK(s->nav_history() == std::vector<std::string>{"http://gazette.test/"});
  CHECK(s->handle("open nowhere.test").text == "Sorry, I couldn't open nowhere.test.");
  CHECK(s->current_url() == "http://gazette.test/");
}

TEST_CASE("long lists page with more") {
  auto browser = testsupport::corpus_browser();
  auto s = open_session(browser, "http://reference.test/");
  auto r = s->handle("What can I do in this website?");
  CHECK(r.items.size() == kNormalListLimit);
  CHECK(r.text.find("Say more to hear") != std::string::npos);
  auto more = s->handle("more");
  CHECK(more.items.front().n == 11);
  s->handle("turn on short interactions");
  auto brief = s->handle("what can I do here");
  CHECK(brief.items.size() == kShortListLimit);
}

TEST_CASE("lookup then open the first result") {
  auto browser = testsupport::corpus_browser();
  auto s = open_session(browser, "http://gazette.test/");
  auto r = s->handle("Lookup COVID");
  REQUIRE(r.items.size() == 2);
  s->handle("open 1");
  CHECK(s->current_url() == r.items[0].reference);
  auto next = s->handle("Next article");
  CHECK(s->current_url() == r.items[1].reference);
  CHECK(next.text.rfind("Next article: ", 0) == 0);
  CHECK(s->handle("nothing matches this zzqx").kind == IntentKind::Unrecognized);
  CHECK(s->handle("lookup zzqx").text == "I found nothing about zzqx on this page or elsewhere on the site.");
}

TEST_CASE("random utterances keep every invariant and the short bounds") {
  const std::vector<std::string> pool = {
      "What can I do in this website?", "Where am I?", "go back", "Next article", "open 1", "open 3", "open last",
      "go to news", "go to the main page", "go to coronavirus", "Lookup COVID", "lookup fair", "Read article",
      "next", "more", "Stop reading", "What is this website about?", "Summarise the article",
      "Who are the authors of this article?", "Is the article written in English?", "bookmark page",
      "show bookmarks", "increase speech rate", "decrease speech rate", "turn on short interactions",
      "turn off short interactions", "help", "blorf", "", "Search for The Tambury Gazette",
      "Open The Tambury Gazette", "open sports.test", "go to weather", "the second one"};
  auto browser = testsupport::corpus_browser();
  std::mt19937 rng(31);
  for (int run = 0; run < 20; ++run) {
    auto s = open_session(browser, run % 2 ? "http://gazette.test/" : "http://sports.test/");
    for (int step = 0; step < 40; ++step) {
      const std::string& u = pool[rng() % pool.size()];
      CAPTURE(u);
      const auto before = s->nav_history();
      auto r = s->handle(u);
      CHECK_NOTHROW(s->check_invariants());
      CHECK(r.kind == parse_utterance(u).kind);
      if (s->prefs().verbosity == Verbosity::Short && parse_utterance(u).kind != IntentKind::SetVerbosity) {
        CHECK(r.text.size() <= kShortTextLimit);
        CHECK(r.items.size() <= kShortListLimit);
      }
      CHECK(r.items.size() <= kNormalListLimit);
      if (r.items.size() > 1 && r.text.rfind("More than one link matches", 0) == 0) {
        CHECK(s->nav_history() == before);
      }
    }
  }
}

TEST_CASE("transcript lines") {
  Response r{"Pick one.", {{1, "Alpha", "u1"}, {2, "Beta", "u2"}}, IntentKind::Outline};
  CHECK(transcript_lines("menu", r) == "U: menu\nA: Pick one.\nA:   1. Alpha\nA:   2. Beta\n");
}

TEST_CASE("refresh keeps history but requires the same seed") {
  auto browser = testsupport::corpus_browser();
  auto s = open_session(browser, "http://gazette.test/");
  s->handle("go to news");
  const auto history = s->nav_history();
  s->refresh_site(std::make_shared<SiteModel>(build_site_model(s->site().graph, OfferingsConfig{})));
  CHECK(s->nav_history() == history);
  CHECK_THROWS_AS(s->refresh_site(browser->open_site("http://sports.test/")), SessionError);
}

TEST_CASE("site names resolve with or without a leading article") {
  auto browser = testsupport::corpus_browser();
  CHECK(browser->resolve_site_name("the tambury gazette") == "http://gazette.test/");
  CHECK(browser->resolve_site_name("Tambury Gazette") == "http://gazette.test/");
  CHECK_FALSE(browser->resolve_site_name("tambury").has_value());
}
