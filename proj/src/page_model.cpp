#include "convbrowse/page_model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "convbrowse/html.hpp"
#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

namespace convbrowse {

namespace {

bool is_heading(const html::Node& n) {
  return n.is_element() && n.tag.size() == 2 && n.tag[0] == 'h' && n.tag[1] >= '1' && n.tag[1] <= '6';
}

// Streams text with whitespace collapsing applied on the fly, so offsets
// recorded while writing are offsets into the final string.
class TextBuilder {
 public:
  void text(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
      auto c = static_cast<unsigned char>(s[i]);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        pending_space_ = true;
        ++i;
        continue;
      }
      if (c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0) {
        pending_space_ = true;
        i += 2;
        continue;
      }
      flush();
      out_.push_back(s[i++]);
    }
  }

  void space() { pending_space_ = true; }
  void line_break() { pending_break_ = true; }

  // Offset the next visible character will land on.
  std::size_t next_offset() const {
    if (out_.empty()) return 0;
    return (pending_break_ || pending_space_) ? out_.size() + 1 : out_.size();
  }
  std::size_t size() const { return out_.size(); }
  char at(std::size_t i) const { return out_[i]; }
  std::string take() { return std::move(out_); }
  bool empty() const { return out_.empty(); }

 private:
  void flush() {
    if (!out_.empty()) {
      if (pending_break_) {
        out_.push_back('\n');
      } else if (pending_space_ && out_.back() != '\n') {
        out_.push_back(' ');
      }
    }
    pending_break_ = pending_space_ = false;
  }

  std::string out_;
  bool pending_space_ = false;
  bool pending_break_ = false;
};

// Accumulates the readable text and links of one segment.
struct Accumulator {
  TextBuilder text;
  std::vector<SegmentLink> links;
  std::string first_heading;

  bool has_content() const { return !text.empty() || !links.empty(); }
};

std::string anchor_fallback_label(const html::Node& a) {
  const html::Node* img = nullptr;
  int images = 0;
  html::walk(a, [&](const html::Node& n) {
    if (n.is("img")) {
      img = &n;
      ++images;
    }
    return !html::is_hidden_content(n);
  });
  if (images == 1) {
    if (auto alt = img->attr("alt")) return collapse_whitespace(*alt);
  }
  return {};
}

class ContentWriter {
 public:
  explicit ContentWriter(std::string base) : base_(std::move(base)) {}

  void write(const html::Node& n, Accumulator& acc) {
    if (n.is_text()) {
      acc.text.text(n.text);
      return;
    }
    if (!n.is_element() || html::is_hidden_content(n)) return;
    if (is_heading(n) && acc.first_heading.empty()) acc.first_heading = html::text_content(n);
    if (n.is("br")) {
      acc.text.line_break();
      return;
    }
    const bool block = html::is_block_element(n.tag);
    if (block) acc.text.line_break();
    if (n.is("td") || n.is("th")) acc.text.space();

    if (n.is("a") && !in_anchor_) {
      if (auto target = resolve(n)) {
        write_anchor(n, *target, acc);
        if (block) acc.text.line_break();
        return;
      }
    }
    for (const auto& c : n.children) write(*c, acc);
    if (block) acc.text.line_break();
    if (n.is("td") || n.is("th")) acc.text.space();
  }

 private:
  std::optional<std::string> resolve(const html::Node& a) const {
    auto href = a.attr("href");
    if (!href || is_fragment_only(*href)) return std::nullopt;
    try {
      return normalize_url(*href, base_);
    } catch (const UrlError&) {
      return std::nullopt;
    }
  }

  void write_anchor(const html::Node& a, const std::string& target, Accumulator& acc) {
    SegmentLink link;
    link.n = static_cast<int>(acc.links.size()) + 1;
    link.target_url = target;
    const std::size_t before = acc.text.size();
    std::size_t begin = acc.text.next_offset();
    in_anchor_ = true;
    for (const auto& c : a.children) write(*c, acc);
    in_anchor_ = false;
    std::string label = html::text_content(a);
    if (acc.text.size() == before) {
      label = anchor_fallback_label(a);
      begin = acc.text.next_offset();
      acc.text.text(label);
    }
    link.anchor_text = label;
    if (acc.text.size() == before) begin = acc.text.size();
    while (begin < acc.text.size() && (acc.text.at(begin) == ' ' || acc.text.at(begin) == '\n')) ++begin;
    link.text_begin = std::min(begin, acc.text.size());
    link.text_end = acc.text.size();
    acc.text.space();
    acc.text.text("[link " + std::to_string(link.n) + "]");
    acc.links.push_back(std::move(link));
  }

  std::string base_;
  bool in_anchor_ = false;
};

std::string document_base(const html::Document& doc, const std::string& url) {
  if (const auto* b = doc.find_first("base")) {
    if (auto href = b->attr("href")) {
      try {
        return normalize_url(*href, url);
      } catch (const UrlError&) {
      }
    }
  }
  return url;
}

std::string make_segment_id(SegmentRole role, const std::string& label, const std::string& path) {
  std::string material = std::string(to_string(role)) + '\x1f' + label + '\x1f' + path;
  return std::string(to_string(role)).substr(0, 4) + "-" + hex64(fnv1a64(material)).substr(0, 12);
}

class Segmenter {
 public:
  Segmenter(const html::Document& doc, std::string base) : doc_(doc), writer_(std::move(base)) {}

  Segment run(const std::string& title) {
    Segment root;
    root.role = SegmentRole::Generic;
    root.label = title;
    root.segment_id = make_segment_id(SegmentRole::Generic, title, "");
    Accumulator run;
    collect_root(doc_.root(), root, run);
    close_run(root, run);
    return root;
  }

 private:
  bool contains_landmark(const html::Node& n) {
    if (auto it = memo_.find(&n); it != memo_.end()) return it->second;
    bool found = false;
    for (const auto& c : n.children) {
      if (!c->is_element() || html::is_hidden_content(*c)) continue;
      if (landmark_role(*c) || contains_landmark(*c)) {
        found = true;
        break;
      }
    }
    memo_[&n] = found;
    return found;
  }

  // Root level: landmark children become segments; everything else forms
  // generic runs between them.
  void collect_root(const html::Node& n, Segment& root, Accumulator& run) {
    for (const auto& c : n.children) {
      if (c->is_element() && !html::is_hidden_content(*c)) {
        if (landmark_role(*c)) {
          close_run(root, run);
          root.children.push_back(build(*c, *landmark_role(*c), path_for(root, "")));
          continue;
        }
        if (contains_landmark(*c)) {
          const bool block = html::is_block_element(c->tag);
          if (block) run.text.line_break();
          collect_root(*c, root, run);
          if (block) run.text.line_break();
          continue;
        }
      }
      writer_.write(*c, run);
    }
  }

  std::string path_for(const Segment& parent, const std::string& parent_path) const {
    std::string idx = std::to_string(parent.children.size());
    return parent_path.empty() ? idx : parent_path + "." + idx;
  }

  void close_run(Segment& root, Accumulator& run) {
    if (run.has_content()) {
      Segment g;
      g.role = SegmentRole::Generic;
      g.label = run.first_heading;
      g.readable_text = run.text.take();
      g.links = std::move(run.links);
      g.segment_id = make_segment_id(g.role, g.label, path_for(root, ""));
      root.children.push_back(std::move(g));
    }
    run = Accumulator{};
  }

  Segment build(const html::Node& el, SegmentRole role, const std::string& path) {
    Segment seg;
    seg.role = role;
    Accumulator acc;
    collect_inside(el, seg, acc, path);
    seg.readable_text = acc.text.take();
    seg.links = std::move(acc.links);
    seg.label = label_for(el, acc.first_heading);
    seg.segment_id = make_segment_id(role, seg.label, path);
    return seg;
  }

  void collect_inside(const html::Node& n, Segment& seg, Accumulator& acc, const std::string& path) {
    for (const auto& c : n.children) {
      if (c->is_element() && !html::is_hidden_content(*c)) {
        if (auto role = landmark_role(*c)) {
          std::string child_path = path + "." + std::to_string(seg.children.size());
          seg.children.push_back(build(*c, *role, child_path));
          acc.text.line_break();
          continue;
        }
        if (contains_landmark(*c)) {
          const bool block = html::is_block_element(c->tag);
          if (block) acc.text.line_break();
          collect_inside(*c, seg, acc, path);
          if (block) acc.text.line_break();
          continue;
        }
      }
      writer_.write(*c, acc);
    }
  }

  std::string label_for(const html::Node& el, const std::string& first_heading) const {
    if (auto aria = el.attr("aria-label")) {
      auto s = collapse_whitespace(*aria);
      if (!s.empty()) return s;
    }
    if (auto ids = el.attr("aria-labelledby")) {
      std::string joined;
      for (const auto& id : split(collapse_whitespace(*ids), ' ')) {
        if (const auto* ref = doc_.find_by_id(id)) {
          auto t = html::text_content(*ref);
          if (!t.empty()) joined += (joined.empty() ? "" : " ") + t;
        }
      }
      if (!joined.empty()) return joined;
    }
    return first_heading;
  }

  const html::Document& doc_;
  ContentWriter writer_;
  std::unordered_map<const html::Node*, bool> memo_;
};

std::string primary_subtag(std::string_view lang) {
  std::string tag = to_lower(trim(lang));
  auto dash = tag.find_first_of("-_");
  if (dash != std::string::npos) tag = tag.substr(0, dash);
  if (tag.size() < 2 || tag.size() > 8) return {};
  if (!std::all_of(tag.begin(), tag.end(), [](char c) { return c >= 'a' && c <= 'z'; })) return {};
  return tag;
}

bool is_byline(const html::Node& n) {
  if (!n.is_element() || n.is("meta") || n.is("link")) return false;
  if (auto rel = n.attr("rel")) {
    for (const auto& tok : split(collapse_whitespace(to_lower(*rel)), ' ')) {
      if (tok == "author") return true;
    }
  }
  if (auto cls = n.attr("class")) {
    for (const auto& tok : split(collapse_whitespace(to_lower(*cls)), ' ')) {
      if (tok.find("author") != std::string::npos || tok.find("byline") != std::string::npos) return true;
    }
  }
  return false;
}

std::string strip_by_prefix(std::string s) {
  for (std::string_view prefix : {"by:", "by "}) {
    if (istarts_with(s, prefix)) return trim(s.substr(prefix.size()));
  }
  return s;
}

void push_author(std::vector<std::string>& authors, std::string name) {
  name = strip_by_prefix(collapse_whitespace(name));
  if (name.empty() || name.size() > 100) return;
  for (const auto& a : authors) {
    if (iequals(a, name)) return;
  }
  authors.push_back(std::move(name));
}

}  // namespace

// ---------------------------------------------------------------------------

const Segment* SegmentTree::find(std::string_view segment_id) const {
  for (const auto* s : preorder()) {
    if (s->segment_id == segment_id) return s;
  }
  return nullptr;
}

std::vector<const Segment*> SegmentTree::preorder() const {
  std::vector<const Segment*> out;
  std::function<void(const Segment&)> visit = [&](const Segment& s) {
    out.push_back(&s);
    for (const auto& c : s.children) visit(c);
  };
  visit(root);
  return out;
}

const Segment* SegmentTree::main_content() const {
  auto all = preorder();
  for (const auto* s : all) {
    if (s->role == SegmentRole::Main) return s;
  }
  for (const auto* s : all) {
    if (s->role == SegmentRole::Article) return s;
  }
  const Segment* best = nullptr;
  for (const auto* s : all) {
    if (s->role == SegmentRole::Generic && s != &root &&
        (!best || s->readable_text.size() > best->readable_text.size()))
      best = s;
  }
  return best;
}

SegmentTree segment_page(const PageSource& source) {
  auto doc = html::parse(source.body);
  SegmentTree tree;
  tree.url = source.url;
  tree.metadata = extract_metadata(source);
  tree.root = Segmenter(doc, document_base(doc, source.url)).run(tree.metadata.title);
  return tree;
}

ReadableText extract_readable_text(std::string_view html_fragment, std::string_view base_url) {
  auto doc = html::parse(html_fragment);
  ContentWriter writer{std::string(base_url)};
  Accumulator acc;
  for (const auto& c : doc.root().children) writer.write(*c, acc);
  return ReadableText{acc.text.take(), std::move(acc.links)};
}

PageMetadata extract_metadata(const PageSource& source) {
  auto doc = html::parse(source.body);
  PageMetadata meta;
  if (const auto* t = doc.find_first("title")) meta.title = html::text_content(*t);
  if (meta.title.empty()) {
    if (const auto* h1 = doc.find_first("h1")) meta.title = html::text_content(*h1);
  }
  if (meta.title.empty()) meta.title = source.url;

  if (const auto* h = doc.find_first("html")) {
    if (auto lang = h->attr("lang")) meta.language = primary_subtag(*lang);
  }

  std::vector<const html::Node*> bylines;
  html::walk(doc.root(), [&](const html::Node& n) {
    if (!n.is_element()) return false;
    if (n.is("meta")) {
      auto name = to_lower(n.attr("name").value_or(""));
      auto equiv = to_lower(n.attr("http-equiv").value_or(""));
      auto property = to_lower(n.attr("property").value_or(""));
      auto content = collapse_whitespace(n.attr("content").value_or(""));
      if (name == "description" && meta.description.empty()) meta.description = content;
      if (name == "author") push_author(meta.authors, content);
      if (meta.last_modified.empty() &&
          (equiv == "last-modified" || name == "last-modified" || name == "dcterms.modified" ||
           name == "dc.date.modified" || property == "article:modified_time"))
        meta.last_modified = content;
      return false;
    }
    if (html::is_hidden_content(n) && !n.is("head")) return false;
    if (is_byline(n)) bylines.push_back(&n);
    return true;
  });
  // Keep the innermost byline elements only: "By <a rel=author>X</a>" yields X.
  for (const auto* b : bylines) {
    bool has_inner = std::any_of(bylines.begin(), bylines.end(), [&](const html::Node* other) {
      for (const html::Node* p = other->parent; p; p = p->parent) {
        if (p == b) return true;
      }
      return false;
    });
    if (!has_inner) push_author(meta.authors, html::text_content(*b));
  }
  return meta;
}

std::string subtree_text(const Segment& segment) {
  std::string out;
  std::function<void(const Segment&)> visit = [&](const Segment& s) {
    if (!s.readable_text.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += s.readable_text;
    }
    for (const auto& c : s.children) visit(c);
  };
  visit(segment);
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto push = [&](std::string_view s) {
    auto t = trim(s);
    if (!t.empty()) out.push_back(std::move(t));
  };
  for (const auto& line : split(text, '\n')) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (c != '.' && c != '!' && c != '?') continue;
      std::size_t j = i + 1;
      while (j < line.size() && (line[j] == '"' || line[j] == '\'' || line[j] == ')' || line[j] == '.' ||
                                 line[j] == '!' || line[j] == '?'))
        ++j;
      if (j < line.size() && line[j] == ' ') {
        push(std::string_view(line).substr(start, j - start));
        start = j + 1;
        i = j;
      }
    }
    push(std::string_view(line).substr(start));
  }
  return out;
}

Summary summarize(const SegmentTree& tree, int max_sentences) {
  if (max_sentences < 1) throw std::invalid_argument("max_sentences must be >= 1");
  const Segment* main = tree.main_content();
  if (!main) return Summary{"", SummaryStatus::NothingToSummarize};
  auto sentences = split_sentences(subtree_text(*main));
  if (sentences.empty()) return Summary{"", SummaryStatus::NothingToSummarize};
  std::string out;
  for (std::size_t i = 0; i < sentences.size() && i < static_cast<std::size_t>(max_sentences); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += sentences[i];
  }
  return Summary{out, SummaryStatus::Ok};
}

std::string spoken_role(SegmentRole role) {
  switch (role) {
    case SegmentRole::Banner: return "header";
    case SegmentRole::Navigation: return "navigation";
    case SegmentRole::Main: return "main content";
    case SegmentRole::Contentinfo: return "footer";
    case SegmentRole::Complementary: return "sidebar";
    case SegmentRole::Article: return "article";
    case SegmentRole::Section: return "section";
    case SegmentRole::Form: return "form";
    case SegmentRole::Generic: return "content";
  }
  return "content";
}

}  // namespace convbrowse
