#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "convbrowse/fetch.hpp"
#include "convbrowse/landmarks.hpp"

namespace convbrowse {

// A link pulled out of readable text. The text carries " [link n]" right
// after the anchor's words; [text_begin, text_end) spans those words.
struct SegmentLink {
  int n = 0;
  std::string target_url;
  std::string anchor_text;
  std::size_t text_begin = 0;
  std::size_t text_end = 0;

  bool operator==(const SegmentLink&) const = default;
};

struct ReadableText {
  std::string text;
  std::vector<SegmentLink> links;
};

struct Segment {
  std::string segment_id;
  SegmentRole role = SegmentRole::Generic;
  std::string label;
  std::string readable_text;
  std::vector<SegmentLink> links;
  std::vector<Segment> children;

  bool operator==(const Segment&) const = default;
};

struct PageMetadata {
  std::string title;
  std::string description;
  std::string language;  // lowercase primary subtag, or empty
  std::vector<std::string> authors;
  std::string last_modified;

  bool operator==(const PageMetadata&) const = default;
};

// Non-visual rendering of one page: landmarks and sectioning elements become
// segments; content outside any landmark is grouped into generic segments,
// one per contiguous run.
struct SegmentTree {
  std::string url;
  Segment root;
  PageMetadata metadata;

  const Segment* find(std::string_view segment_id) const;
  std::vector<const Segment*> preorder() const;

  // The segment a reader would call "the article": the main landmark, else
  // the first article, else the generic segment holding the most text.
  const Segment* main_content() const;

  bool operator==(const SegmentTree&) const = default;
};

SegmentTree segment_page(const PageSource& source);

// Cleans an HTML fragment: script/style/template dropped, block boundaries
// become single newlines, whitespace collapsed, anchors numbered from 1.
ReadableText extract_readable_text(std::string_view html_fragment, std::string_view base_url);

PageMetadata extract_metadata(const PageSource& source);

// Readable text of a segment and all its descendants, in tree order, one
// line per non-empty segment.
std::string subtree_text(const Segment& segment);

// Splits on '.', '!' or '?' followed by whitespace, and on line breaks.
// Abbreviations ("Dr. Smith") split too; the rule is approximate.
std::vector<std::string> split_sentences(std::string_view text);

enum class SummaryStatus { Ok, NothingToSummarize };

struct Summary {
  std::string text;
  SummaryStatus status = SummaryStatus::Ok;
};

// Pluggable summarization behind one contract.
using Summarizer = std::function<Summary(const SegmentTree& tree, int max_sentences)>;

// Extractive fallback: the first max_sentences sentences of the main content.
Summary summarize(const SegmentTree& tree, int max_sentences);

// The friendly spoken name of a segment role ("footer" for contentinfo).
std::string spoken_role(SegmentRole role);

}  // namespace convbrowse
