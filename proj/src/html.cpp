#include "convbrowse/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_map>

#include "convbrowse/text.hpp"

namespace convbrowse::html {

namespace {

constexpr std::array<std::string_view, 14> kVoid = {"area", "base", "br",   "col",   "embed", "hr",    "img",
                                                    "input", "link", "meta", "param", "source", "track", "wbr"};

// Closes an open <p> when started.
constexpr std::array<std::string_view, 30> kClosesP = {
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir",  "div",   "dl",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hgroup", "hr", "main", "menu", "nav", "ol", "pre", "section"};

constexpr std::array<std::string_view, 10> kScopeMarkers = {"applet", "caption", "html",   "table",  "td",
                                                            "th",     "marquee", "object", "template", "button"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& set, std::string_view v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

bool is_heading(std::string_view t) {
  return t.size() == 2 && t[0] == 'h' && t[1] >= '1' && t[1] <= '6';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> table = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
      {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},     {"trade", 0x2122}, {"hellip", 0x2026},
      {"mdash", 0x2014}, {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
      {"rdquo", 0x201D}, {"laquo", 0xAB},   {"raquo", 0xBB},   {"bull", 0x2022},  {"middot", 0xB7},
      {"euro", 0x20AC},  {"pound", 0xA3},   {"yen", 0xA5},     {"cent", 0xA2},    {"sect", 0xA7},
      {"deg", 0xB0},     {"times", 0xD7},   {"divide", 0xF7},  {"eacute", 0xE9},  {"egrave", 0xE8},
      {"aacute", 0xE1},  {"agrave", 0xE0},  {"iacute", 0xED},  {"oacute", 0xF3},  {"uacute", 0xFA},
      {"ntilde", 0xF1},  {"ccedil", 0xE7},  {"uuml", 0xFC},    {"ouml", 0xF6},    {"auml", 0xE4},
      {"szlig", 0xDF},   {"shy", 0xAD},     {"zwj", 0x200D},   {"zwnj", 0x200C},  {"thinsp", 0x2009},
      {"ensp", 0x2002},  {"emsp", 0x2003},  {"larr", 0x2190},  {"rarr", 0x2192},  {"uarr", 0x2191},
      {"darr", 0x2193},  {"hearts", 0x2665}, {"check", 0x2713}};
  return table;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(Node& root) { stack_.push_back(&root); }

  void text(std::string_view raw, bool decode) {
    if (raw.empty()) return;
    Node* cur = stack_.back();
    std::string t = decode ? decode_entities(raw) : std::string(raw);
    if (!cur->children.empty() && cur->children.back()->is_text()) {
      cur->children.back()->text += t;
      return;
    }
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Text;
    n->text = std::move(t);
    n->parent = cur;
    cur->children.push_back(std::move(n));
  }

  Node* start(std::string tag, std::vector<std::pair<std::string, std::string>> attrs, bool self_closing) {
    if (tag == "html" && has_open("html")) return nullptr;
    if (in(kClosesP, tag) && has_in_scope("p", {})) close_through("p");
    if (is_heading(tag) && is_heading(stack_.back()->tag)) pop();
    if (tag == "li") close_in_scope_if("li", {"ol", "ul"});
    if (tag == "dt" || tag == "dd") {
      close_in_scope_if("dt", {"dl"});
      close_in_scope_if("dd", {"dl"});
    }
    if (tag == "option") close_if_current("option");
    if (tag == "a" && has_in_scope("a", {})) close_through("a");
    if (tag == "tr") close_in_scope_if("tr", {"table", "tbody", "thead", "tfoot"});
    if (tag == "td" || tag == "th") {
      close_in_scope_if("td", {"tr", "table"});
      close_in_scope_if("th", {"tr", "table"});
    }

    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Element;
    n->tag = std::move(tag);
    n->attrs = std::move(attrs);
    Node* parent = stack_.back();
    n->parent = parent;
    Node* raw = n.get();
    parent->children.push_back(std::move(n));
    if (!self_closing && !is_void_element(raw->tag)) stack_.push_back(raw);
    return raw;
  }

  void end(const std::string& tag) {
    if (tag == "br") {
      start("br", {}, true);
      return;
    }
    // Table-ish and template boundaries stop the search for non-matching tags.
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& open = stack_[i]->tag;
      if (open == tag) {
        stack_.resize(i);
        return;
      }
      if ((open == "table" || open == "template") && tag != "table" && tag != "template") return;
    }
  }

 private:
  bool has_open(std::string_view tag) const {
    return std::any_of(stack_.begin() + 1, stack_.end(), [&](const Node* n) { return n->tag == tag; });
  }

  bool has_in_scope(std::string_view tag, std::initializer_list<std::string_view> extra) const {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& open = stack_[i]->tag;
      if (open == tag) return true;
      if (in(kScopeMarkers, open)) return false;
      if (std::find(extra.begin(), extra.end(), open) != extra.end()) return false;
    }
    return false;
  }

  void close_in_scope_if(std::string_view tag, std::initializer_list<std::string_view> extra) {
    if (has_in_scope(tag, extra)) close_through(tag);
  }

  void close_if_current(std::string_view tag) {
    if (stack_.size() > 1 && stack_.back()->tag == tag) pop();
  }

  void close_through(std::string_view tag) {
    while (stack_.size() > 1) {
      bool match = stack_.back()->tag == tag;
      pop();
      if (match) return;
    }
  }

  void pop() {
    if (stack_.size() > 1) stack_.pop_back();
  }

  std::vector<Node*> stack_;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class Tokenizer {
 public:
  Tokenizer(std::string_view src, TreeBuilder& builder) : src_(src), b_(builder) {}

  void run() {
    std::size_t text_start = 0;
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') {
        ++pos_;
        continue;
      }
      std::size_t lt = pos_;
      if (lt + 1 >= src_.size()) break;
      char next = src_[lt + 1];
      if (std::isalpha(static_cast<unsigned char>(next))) {
        b_.text(src_.substr(text_start, lt - text_start), true);
        pos_ = lt + 1;
        start_tag();
        text_start = pos_;
      } else if (next == '/' && lt + 2 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[lt + 2]))) {
        b_.text(src_.substr(text_start, lt - text_start), true);
        pos_ = lt + 2;
        end_tag();
        text_start = pos_;
      } else if (src_.substr(lt, 4) == "<!--") {
        b_.text(src_.substr(text_start, lt - text_start), true);
        auto close = src_.find("-->", lt + 4);
        pos_ = close == std::string_view::npos ? src_.size() : close + 3;
        text_start = pos_;
      } else if (next == '!' || next == '?' || next == '/') {
        b_.text(src_.substr(text_start, lt - text_start), true);
        auto close = src_.find('>', lt + 2);
        pos_ = close == std::string_view::npos ? src_.size() : close + 1;
        text_start = pos_;
      } else {
        ++pos_;
      }
    }
    b_.text(src_.substr(text_start), true);
  }

 private:
  std::string read_name() {
    std::size_t s = pos_;
    while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>' && src_[pos_] != '/') ++pos_;
    return to_lower(src_.substr(s, pos_ - s));
  }

  void skip_space() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  void start_tag() {
    std::string tag = read_name();
    std::vector<std::pair<std::string, std::string>> attrs;
    bool self_closing = false;
    while (pos_ < src_.size()) {
      skip_space();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      std::size_t ns = pos_;
      while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>' && src_[pos_] != '=' &&
             !(src_[pos_] == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>'))
        ++pos_;
      if (pos_ == ns) {
        ++pos_;  // stray '=' or similar
        continue;
      }
      std::string name = to_lower(src_.substr(ns, pos_ - ns));
      std::string value;
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          char q = src_[pos_++];
          auto close = src_.find(q, pos_);
          if (close == std::string_view::npos) close = src_.size();
          value = decode_entities(src_.substr(pos_, close - pos_));
          pos_ = std::min(close + 1, src_.size());
        } else {
          std::size_t vs = pos_;
          while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
          value = decode_entities(src_.substr(vs, pos_ - vs));
        }
      }
      bool dup = std::any_of(attrs.begin(), attrs.end(), [&](const auto& a) { return a.first == name; });
      if (!dup) attrs.emplace_back(std::move(name), std::move(value));
    }

    b_.start(tag, std::move(attrs), self_closing);
    if (self_closing) return;
    if (tag == "script" || tag == "style" || tag == "xmp" || tag == "iframe" || tag == "noembed" ||
        tag == "noframes") {
      raw_text(tag, false);
    } else if (tag == "title" || tag == "textarea") {
      raw_text(tag, true);
    } else if (tag == "plaintext") {
      b_.text(src_.substr(pos_), false);
      pos_ = src_.size();
    }
  }

  // Consumes content up to the matching end tag (case-insensitive).
  void raw_text(const std::string& tag, bool decode) {
    std::size_t search = pos_;
    std::size_t end = src_.size();
    while (true) {
      auto lt = src_.find("</", search);
      if (lt == std::string_view::npos) break;
      auto name = src_.substr(lt + 2, tag.size());
      std::size_t after = lt + 2 + tag.size();
      if (iequals(name, tag) && (after >= src_.size() || !is_name_char(src_[after]))) {
        end = lt;
        break;
      }
      search = lt + 2;
    }
    b_.text(src_.substr(pos_, end - pos_), decode);
    if (end == src_.size()) {
      pos_ = end;
    } else {
      auto close = src_.find('>', end);
      pos_ = close == std::string_view::npos ? src_.size() : close + 1;
    }
    b_.end(tag);
  }

  void end_tag() {
    std::string tag = read_name();
    auto close = src_.find('>', pos_);
    pos_ = close == std::string_view::npos ? src_.size() : close + 1;
    b_.end(tag);
  }

  std::string_view src_;
  TreeBuilder& b_;
  std::size_t pos_ = 0;
};

const Node* find_first_impl(const Node& n, std::string_view tag) {
  for (const auto& c : n.children) {
    if (c->is(tag)) return c.get();
    if (auto* f = find_first_impl(*c, tag)) return f;
  }
  return nullptr;
}

const Node* find_id_impl(const Node& n, std::string_view id) {
  for (const auto& c : n.children) {
    if (c->is_element()) {
      if (auto v = c->attr("id"); v && *v == id) return c.get();
      if (auto* f = find_id_impl(*c, id)) return f;
    }
  }
  return nullptr;
}

void collect_text(const Node& n, std::string& out) {
  for (const auto& c : n.children) {
    if (c->is_text()) {
      out += c->text;
    } else if (c->is_element() && !is_hidden_content(*c)) {
      bool block = c->is("br") || is_block_element(c->tag);
      if (block) out.push_back(' ');
      collect_text(*c, out);
      if (block) out.push_back(' ');
    }
  }
}

}  // namespace

std::optional<std::string_view> Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs) {
    if (k == name) return std::string_view(v);
  }
  return std::nullopt;
}

bool Node::has_class(std::string_view cls) const {
  auto v = attr("class");
  if (!v) return false;
  for (const auto& tok : split(collapse_whitespace(*v), ' ')) {
    if (iequals(tok, cls)) return true;
  }
  return false;
}

Document::Document() : root_(std::make_unique<Node>()) { root_->kind = NodeKind::Document; }

const Node* Document::find_first(std::string_view tag) const { return find_first_impl(*root_, tag); }

const Node* Document::find_by_id(std::string_view id) const { return find_id_impl(*root_, id); }

const Node* Document::body() const {
  const Node* b = find_first("body");
  return b ? b : root_.get();
}

Document parse(std::string_view html) {
  Document doc;
  TreeBuilder builder(doc.root());
  Tokenizer(html, builder).run();
  return doc;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i + 1;
    if (j < s.size() && s[j] == '#') {
      ++j;
      bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
      if (hex) ++j;
      std::size_t ds = j;
      std::uint32_t cp = 0;
      while (j < s.size() && (hex ? std::isxdigit(static_cast<unsigned char>(s[j]))
                                  : std::isdigit(static_cast<unsigned char>(s[j])))) {
        char c = s[j];
        std::uint32_t d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10);
        cp = std::min<std::uint32_t>(cp * (hex ? 16 : 10) + d, 0x110000);
        ++j;
      }
      if (j == ds) {
        out.push_back(s[i++]);
        continue;
      }
      if (j < s.size() && s[j] == ';') ++j;
      append_utf8(out, cp);
      i = j;
      continue;
    }
    std::size_t ns = j;
    while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j])) && j - ns < 10) ++j;
    auto name = s.substr(ns, j - ns);
    auto& table = named_entities();
    auto it = table.find(name);
    if (it != table.end() && j < s.size() && s[j] == ';') {
      append_utf8(out, it->second);
      i = j + 1;
    } else if (it != table.end() && (name == "amp" || name == "lt" || name == "gt" || name == "nbsp" ||
                                      name == "quot" || name == "copy")) {
      append_utf8(out, it->second);  // legacy forms without ';'
      i = j;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool is_void_element(std::string_view tag) { return in(kVoid, tag); }

bool is_block_element(std::string_view tag) {
  static constexpr std::array<std::string_view, 44> kBlock = {
      "address", "article", "aside",  "blockquote", "body",    "caption", "center",   "dd",     "details",
      "dialog",  "div",     "dl",     "dt",         "fieldset", "figcaption", "figure", "footer", "form",
      "h1",      "h2",      "h3",     "h4",         "h5",      "h6",      "header",   "hgroup", "hr",
      "html",    "li",      "main",   "menu",       "nav",     "ol",      "p",        "pre",    "section",
      "summary", "table",   "tbody",  "thead",      "tfoot",   "tr",      "ul",       "option"};
  return in(kBlock, tag);
}

bool is_hidden_content(const Node& n) {
  if (!n.is_element()) return false;
  static constexpr std::array<std::string_view, 7> kHidden = {"script", "style", "template", "head",
                                                              "noscript", "iframe", "title"};
  if (in(kHidden, n.tag)) return true;
  if (n.attr("hidden")) return true;
  if (auto ah = n.attr("aria-hidden"); ah && iequals(*ah, "true")) return true;
  return false;
}

std::string text_content(const Node& n) {
  std::string out;
  if (n.is_text()) return collapse_whitespace(n.text);
  collect_text(n, out);
  return collapse_whitespace(out);
}

}  // namespace convbrowse::html
