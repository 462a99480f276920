#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace convbrowse::html {

enum class NodeKind { Document, Element, Text };

// A DOM-like node. Element names are lowercased; attribute names too.
struct Node {
  NodeKind kind = NodeKind::Element;
  std::string tag;   // elements only
  std::string text;  // text nodes only (entities decoded)
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;

  bool is_element() const { return kind == NodeKind::Element; }
  bool is_text() const { return kind == NodeKind::Text; }
  bool is(std::string_view name) const { return kind == NodeKind::Element && tag == name; }

  std::optional<std::string_view> attr(std::string_view name) const;
  bool has_class(std::string_view cls) const;
};

// Owns a parsed tree. Parsing never fails: malformed markup is recovered the
// way browsers do it for the common cases (implied end tags, stray end tags
// ignored, unclosed elements closed at EOF).
class Document {
 public:
  Document();
  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;

  const Node& root() const { return *root_; }
  Node& root() { return *root_; }

  // First element with the given tag in document order, if any.
  const Node* find_first(std::string_view tag) const;
  const Node* find_by_id(std::string_view id) const;
  // The body element, or the root when the markup has none.
  const Node* body() const;

 private:
  std::unique_ptr<Node> root_;
};

Document parse(std::string_view html);

// Decodes character references (&amp; &#39; &#x2014; ...).
std::string decode_entities(std::string_view s);

bool is_void_element(std::string_view tag);

// Elements that start a new line of text when linearized.
bool is_block_element(std::string_view tag);

// Elements whose content is never visible text.
bool is_hidden_content(const Node& n);

// Whitespace-normalized visible text of a subtree.
std::string text_content(const Node& n);

// Visits elements in document order; `fn` returns false to skip the subtree.
template <typename Fn>
void walk(const Node& n, Fn&& fn) {
  for (const auto& child : n.children) {
    if (fn(*child)) walk(*child, fn);
  }
}

}  // namespace convbrowse::html
