#include <doctest.h>

#include <random>
#include <regex>

#include "convbrowse/page_model.hpp"
#include "support.hpp"

using namespace convbrowse;

namespace {

PageSource page(std::string body, std::string url = "http://p.test/") {
  return PageSource{std::move(url), std::move(body), 0, 200, "text/html"};
}

std::vector<int> ordinals_in(const std::string& text) {
  static const std::regex re(R"(\[link (\d+)\])");
  std::vector<int> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stoi((*it)[1]));
  }
  return out;
}

bool ordinals_exact(const std::string& text, std::size_t links) {
  auto got = ordinals_in(text);
  std::sort(got.begin(), got.end());
  std::vector<int> want;
  for (std::size_t i = 1; i <= links; ++i) want.push_back(static_cast<int>(i));
  return got == want;
}

std::vector<SegmentRole> child_roles(const Segment& s) {
  std::vector<SegmentRole> out;
  for (const auto& c : s.children) out.push_back(c.role);
  return out;
}

}  // namespace

TEST_CASE("readable text: link placeholder") {
  auto r = extract_readable_text("<p>see <a href='/c'>here</a> now</p>", "http://p.test/x");
  CHECK(r.text == "see here [link 1] now");
  REQUIRE(r.links.size() == 1);
  CHECK(r.links[0].n == 1);
  CHECK(r.links[0].target_url == "http://p.test/c");
  CHECK(r.links[0].anchor_text == "here");
  CHECK(r.text.substr(r.links[0].text_begin, r.links[0].text_end - r.links[0].text_begin) == "here");
}

TEST_CASE("readable text: empty and cleaned") {
  auto empty = extract_readable_text("<p></p>", "http://p.test/");
  CHECK(empty.text.empty());
  CHECK(empty.links.empty());
  auto cleaned = extract_readable_text("<p>one</p><script>x</script><style>y</style><p>two</p>", "http://p.test/");
  CHECK(cleaned.text == "one\ntwo");
}

TEST_CASE("placeholder integrity on random fragments") {
  std::mt19937 rng(1);
  for (int i = 0; i < 300; ++i) {
    const std::string frag = testsupport::random_fragment(rng);
    auto r = extract_readable_text(frag, "http://p.test/");
    CAPTURE(frag);
    CHECK(ordinals_exact(r.text, r.links.size()));
    for (std::size_t k = 0; k < r.links.size(); ++k) {
      CHECK(r.links[k].n == static_cast<int>(k + 1));
      CHECK(r.links[k].text_begin <= r.links[k].text_end);
      CHECK(r.links[k].text_end <= r.text.size());
    }
    auto tree = segment_page(page("<body>" + frag + "</body>"));
    for (const Segment* s : tree.preorder()) CHECK(ordinals_exact(s->readable_text, s->links.size()));
  }
}

TEST_CASE("landmark tree: nav, main with two articles, footer") {
  auto tree = segment_page(page(R"(<body><nav><a href="/a">A</a></nav>
    <main><article><h2>One</h2><p>First.</p></article><article><h2>Two</h2><p>Second.</p></article></main>
    <footer><p>Foot</p></footer></body>)"));
  CHECK(child_roles(tree.root) ==
        std::vector<SegmentRole>{SegmentRole::Navigation, SegmentRole::Main, SegmentRole::Contentinfo});
  const Segment& main = tree.root.children[1];
  CHECK(child_roles(main) == std::vector<SegmentRole>{SegmentRole::Article, SegmentRole::Article});
  CHECK(main.children[0].readable_text.find("First.") != std::string::npos);
  CHECK(main.readable_text.find("First.") == std::string::npos);
  CHECK(tree.main_content() == &main);
}

TEST_CASE("no landmarks: one generic segment") {
  auto tree = segment_page(page("<body><h1>Title</h1><p>Body text.</p></body>"));
  REQUIRE(tree.root.children.size() == 1);
  CHECK(tree.root.children[0].role == SegmentRole::Generic);
  CHECK(tree.root.children[0].readable_text == "Title\nBody text.");
}

TEST_CASE("role attribute wins") {
  auto tree = segment_page(page(R"(<body><div role="navigation"><a href="/x">X</a></div><nav role="none"><p>plain</p></nav></body>)"));
  REQUIRE(!tree.root.children.empty());
  CHECK(tree.root.children[0].role == SegmentRole::Navigation);
  for (const Segment* s : tree.preorder()) {
    if (s->readable_text.find("plain") != std::string::npos) CHECK(s->role != SegmentRole::Navigation);
  }
}

TEST_CASE("segmentation is deterministic and ids are unique") {
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    const std::string body = "<body>" + testsupport::random_fragment(rng) + "</body>";
    auto a = segment_page(page(body));
    auto b = segment_page(page(body));
    CHECK(a == b);
    std::set<std::string> ids;
    for (const Segment* s : a.preorder()) CHECK(ids.insert(s->segment_id).second);
    for (const Segment* s : a.preorder()) CHECK(a.find(s->segment_id) == s);
  }
}

TEST_CASE("coverage: visible text survives, dropped text does not") {
  const std::string body = R"(<body><header>Masthead</header><nav>Menu</nav><div>Loose words</div>
    <main><p>Story text</p><aside>Side note</aside></main><script>secret()</script>
    <template>hidden tmpl</template><footer>Legal</footer><p>Trailer</p></body>)";
  auto tree = segment_page(page(body));
  std::string all;
  for (const Segment* s : tree.preorder()) all += s->readable_text + "\n";
  for (const char* w : {"Masthead", "Menu", "Loose words", "Story text", "Side note", "Legal", "Trailer"}) {
    CHECK(all.find(w) != std::string::npos);
  }
  CHECK(all.find("secret") == std::string::npos);
  CHECK(all.find("hidden tmpl") == std::string::npos);
}

TEST_CASE("metadata") {
  auto m = extract_metadata(page(R"(<html lang="en-GB"><head><title> T </title>
    <meta name="author" content="J. Smith"><meta name="description" content="A paper.">
    <meta http-equiv="last-modified" content="2020-05-01"></head>
    <body><p class="byline">By A. Jones</p><p class="byline">By j. smith</p></body></html>)"));
  CHECK(m.title == "T");
  CHECK(m.language == "en");
  CHECK(m.description == "A paper.");
  CHECK(m.authors == std::vector<std::string>{"J. Smith", "A. Jones"});
  auto bare = extract_metadata(page("<p>x</p>"));
  CHECK(bare.description.empty());
  CHECK(bare.language.empty());
  CHECK(bare.authors.empty());
}

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("Dr. Smith spoke. It rained!  Why? End") ==
        std::vector<std::string>{"Dr.", "Smith spoke.", "It rained!", "Why?", "End"});
  CHECK(split_sentences("Heading\nBody one. Body two.") ==
        std::vector<std::string>{"Heading", "Body one.", "Body two."});
  CHECK(split_sentences("   ").empty());
}

TEST_CASE("extractive summary") {
  auto five = segment_page(page("<main><p>One. Two. Three. Four. Five.</p></main>"));
  auto s = summarize(five, 2);
  CHECK(s.status == SummaryStatus::Ok);
  CHECK(s.text == "One. Two.");
  auto single = segment_page(page("<main><p>Only one.</p></main>"));
  CHECK(summarize(single, 3).text == "Only one.");
  auto empty = segment_page(page("<body></body>"));
  CHECK(summarize(empty, 3).status == SummaryStatus::NothingToSummarize);
}

TEST_CASE("spoken roles") {
  CHECK(spoken_role(SegmentRole::Contentinfo) == "footer");
  CHECK(spoken_role(SegmentRole::Navigation) == "navigation");
}

TEST_CASE("gazette front page segments") {
  auto fetcher = StaticFetcher(testsupport::corpus_transport(), FetchConfig{});
  auto tree = segment_page(fetcher.fetch("http://gazette.test/"));
  CHECK(tree.metadata.title == "The Tambury Gazette");
  CHECK_FALSE(tree.metadata.description.empty());
  const Segment* main = tree.main_content();
  REQUIRE(main != nullptr);
  CHECK(main->role == SegmentRole::Main);
  for (const Segment* s : tree.preorder()) CHECK(ordinals_exact(s->readable_text, s->links.size()));
}
