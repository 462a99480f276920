#include "convbrowse/nlu.hpp"

#include <array>
#include <regex>

#include "convbrowse/text.hpp"

namespace convbrowse {

const char* to_string(IntentKind kind) {
  switch (kind) {
    case IntentKind::Outline: return "Outline";
    case IntentKind::Orientation: return "Orientation";
    case IntentKind::Navigate: return "Navigate";
    case IntentKind::Lookup: return "Lookup";
    case IntentKind::ReadStart: return "ReadStart";
    case IntentKind::ReadNext: return "ReadNext";
    case IntentKind::ReadStop: return "ReadStop";
    case IntentKind::Overview: return "Overview";
    case IntentKind::About: return "About";
    case IntentKind::Summary: return "Summary";
    case IntentKind::YesNoMeta: return "YesNoMeta";
    case IntentKind::Open: return "Open";
    case IntentKind::Bookmark: return "Bookmark";
    case IntentKind::SetSpeech: return "SetSpeech";
    case IntentKind::SetVerbosity: return "SetVerbosity";
    case IntentKind::Help: return "Help";
    case IntentKind::Unrecognized: return "Unrecognized";
  }
  return "Unrecognized";
}

std::string Intent::slot(const std::string& name) const {
  auto it = slots.find(name);
  return it == slots.end() ? std::string() : it->second;
}

namespace {

constexpr std::array<std::string_view, 10> kOrdinalWords = {"first",   "second", "third", "fourth", "fifth",
                                                            "sixth",   "seventh", "eighth", "ninth", "tenth"};
constexpr std::array<std::string_view, 10> kNumberWords = {"one", "two", "three", "four", "five",
                                                           "six", "seven", "eight", "nine", "ten"};

#define ORD                                                                                    \
  "([0-9]+|one|two|three|four|five|six|seven|eight|nine|ten|first|second|third|fourth|fifth|" \
  "sixth|seventh|eighth|ninth|tenth|last|1st|2nd|3rd|[4-9]th|10th)"

std::vector<GrammarRule> build_rules() {
  using K = IntentKind;
  return {
      // Browsing
      {"what can i do(?: (?:in|on) (?:this|the) (?:website|site|page))?(?: here)?|what are my options|"
       "(?:show|list|give)(?: me)? (?:the )?(?:menu|options|offerings)|outline|menu",
       K::Outline, {}, {}, "What can I do in this website?"},
      {"where am i(?: now)?|what page is this|where are we", K::Orientation, {}, {}, "Where am I?"},
      {"(?:go|navigate|take me) back|back|previous page|go to the previous page", K::Navigate, {},
       {{"target", "back"}}, "Go back"},
      {"(?:go to |read |open )?(?:the )?next (?:article|story|item)", K::Navigate, {}, {{"target", "next"}},
       "Next article"},
      {"(?:(?:open|select|choose|pick|go to|follow)\\s+)?(?:the\\s+)?(?:(?:number|item|link|result|option)\\s+)?" ORD
       "(?:\\s+(?:one|link|result|item|article|option))?",
       K::Navigate, {"target"}, {}, "Open 1"},
      {"(?:go to|navigate to|take me to|visit|follow)\\s+(?:the\\s+)?(.+)", K::Navigate, {"target"}, {},
       "Go to the main page"},
      {"(?:lookup|look up|look for|find|search (?:this|the) (?:page|site|website) for)\\s+(.+)", K::Lookup,
       {"query"}, {}, "Lookup COVID"},
      {"(?:start )?read(?:ing)?(?: (?:the|this))?(?: (?:article|page|story|it))?(?: (?:aloud|out loud))?",
       K::ReadStart, {}, {}, "Read article"},
      {"stop(?: reading)?|pause(?: reading)?|quiet|be quiet", K::ReadStop, {}, {}, "Stop reading"},
      {"next|continue(?: reading)?|more|go on|keep reading|read more", K::ReadNext, {}, {}, "Continue"},
      // Metadata
      {"what(?: is|'s) (?:this|the) (?:website|site|page) about|describe (?:this|the) (?:website|site)|overview",
       K::Overview, {}, {}, "What is this website about?"},
      {"who (?:are|is) the authors?(?: of (?:this|the) (?:article|page|story))?|"
       "who wrote (?:this|the|it)(?: (?:article|page|story))?",
       K::About, {}, {}, "Who are the authors of this article?"},
      {"summari[sz]e(?: (?:the|this))?(?: (?:article|page|story|it))?|(?:give me )?(?:a )?summary", K::Summary,
       {}, {}, "Summarise the article?"},
      {"is (?:the|this) (?:article|page|story|document|website|site) (?:written )?in ([a-z]+)", K::YesNoMeta, {"value"},
       {{"attribute", "language"}}, "Is the article written in English?"},
      // Operations
      {"(?:search (?:the web |online )?for|google)\\s+(.+)", K::Open, {"target"}, {{"search", "web"}},
       "Search for The Tambury Gazette"},
      {"open\\s+(.+)", K::Open, {"target"}, {}, "Open The Tambury Gazette"},
      {"(?:show|list|read)(?: me)?(?: my)? bookmarks|bookmarks", K::Bookmark, {}, {{"action", "list"}},
       "Show bookmarks"},
      {"bookmark(?: (?:this|the))?(?: page)?(?:\\s+(.+))?", K::Bookmark, {"label"}, {{"action", "add"}},
       "Bookmark page The Tambury Gazette"},
      {"(?:increase|raise|speed up)(?: the)? speech(?: rate)?|speak faster|talk faster|faster", K::SetSpeech, {},
       {{"direction", "increase"}}, "Increase speech rate"},
      {"(?:decrease|lower|slow down)(?: the)? speech(?: rate)?|speak slower|talk slower|slower", K::SetSpeech, {},
       {{"direction", "decrease"}}, "Decrease speech rate"},
      {"turn on short (?:interactions|answers|mode)|(?:use )?short (?:interactions|answers|mode)|be brief",
       K::SetVerbosity, {}, {{"mode", "short"}}, "Turn on short interactions"},
      {"turn off short (?:interactions|answers|mode)|(?:use )?normal (?:interactions|answers|mode)|be verbose",
       K::SetVerbosity, {}, {{"mode", "normal"}}, "Turn off short interactions"},
      {"help|what can you do|(?:list|show)(?: the)? commands|commands", K::Help, {}, {}, "Help"},
  };
}

#undef ORD

const std::vector<std::regex>& compiled_rules() {
  static const std::vector<std::regex> compiled = [] {
    std::vector<std::regex> out;
    for (const auto& r : rule_table()) out.emplace_back(r.pattern, std::regex::icase | std::regex::ECMAScript);
    return out;
  }();
  return compiled;
}

bool strip_suffix(std::string& s, std::string_view suffix) {
  if (s.size() >= suffix.size() && iequals(std::string_view(s).substr(s.size() - suffix.size()), suffix)) {
    s.erase(s.size() - suffix.size());
    return true;
  }
  return false;
}

std::string clean_utterance(std::string_view raw) {
  std::string s = trim(collapse_whitespace(raw));
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    for (std::string_view q : {"\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x9E"}) {
      if (s.rfind(q, 0) == 0) s.erase(0, q.size()), changed = true;
      if (strip_suffix(s, q)) changed = true;
    }
    while (!s.empty() && (s.back() == '?' || s.back() == '.' || s.back() == '!' || s.back() == '"' ||
                          s.back() == '\'' || s.back() == ',' || s.back() == ' ')) {
      s.pop_back();
      changed = true;
    }
    while (!s.empty() && (s.front() == '"' || s.front() == '\'' || s.front() == ' ')) {
      s.erase(0, 1);
      changed = true;
    }
  }
  if (istarts_with(s, "please ")) s = trim(s.substr(7));
  if (strip_suffix(s, " please")) s = trim(s);
  return s;
}

}  // namespace

const std::vector<GrammarRule>& rule_table() {
  static const std::vector<GrammarRule> rules = build_rules();
  return rules;
}

Intent parse_utterance(std::string_view text) {
  Intent intent;
  intent.text = std::string(text);
  const std::string cleaned = clean_utterance(text);
  if (cleaned.empty()) return intent;
  const auto& rules = rule_table();
  const auto& regexes = compiled_rules();
  std::smatch m;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!std::regex_match(cleaned, m, regexes[i])) continue;
    const auto& rule = rules[i];
    intent.kind = rule.kind;
    intent.rule_index = static_cast<int>(i);
    intent.slots = rule.fixed_slots;
    for (std::size_t g = 0; g < rule.capture_slots.size(); ++g) {
      if (g + 1 < m.size() && m[g + 1].matched) {
        std::string v = trim(m[g + 1].str());
        if (!v.empty()) intent.slots[rule.capture_slots[g]] = v;
      }
    }
    return intent;
  }
  return intent;
}

int parse_ordinal(std::string_view word_in) {
  const std::string w = to_lower(trim(word_in));
  if (w.empty()) return 0;
  if (w == "last") return -1;
  for (std::size_t i = 0; i < kOrdinalWords.size(); ++i) {
    if (w == kOrdinalWords[i] || w == kNumberWords[i]) return static_cast<int>(i) + 1;
  }
  std::size_t digits = 0;
  while (digits < w.size() && std::isdigit(static_cast<unsigned char>(w[digits]))) ++digits;
  if (digits == 0 || digits > 6) return 0;
  const std::string rest = w.substr(digits);
  if (!rest.empty() && rest != "st" && rest != "nd" && rest != "rd" && rest != "th") return 0;
  int v = std::stoi(w.substr(0, digits));
  return v > 0 ? v : 0;
}

}  // namespace convbrowse
