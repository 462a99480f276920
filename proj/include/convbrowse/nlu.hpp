#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace convbrowse {

enum class IntentKind {
  Outline,
  Orientation,
  Navigate,
  Lookup,
  ReadStart,
  ReadNext,
  ReadStop,
  Overview,
  About,
  Summary,
  YesNoMeta,
  Open,
  Bookmark,
  SetSpeech,
  SetVerbosity,
  Help,
  Unrecognized,
};

inline constexpr IntentKind kAllIntentKinds[] = {
    IntentKind::Outline,   IntentKind::Orientation, IntentKind::Navigate,  IntentKind::Lookup,
    IntentKind::ReadStart, IntentKind::ReadNext,    IntentKind::ReadStop,  IntentKind::Overview,
    IntentKind::About,     IntentKind::Summary,     IntentKind::YesNoMeta, IntentKind::Open,
    IntentKind::Bookmark,  IntentKind::SetSpeech,   IntentKind::SetVerbosity, IntentKind::Help,
    IntentKind::Unrecognized,
};

const char* to_string(IntentKind kind);

using Slots = std::map<std::string, std::string>;

struct Intent {
  IntentKind kind = IntentKind::Unrecognized;
  Slots slots;
  std::string text;     // the raw utterance
  int rule_index = -1;  // index into rule_table(), -1 when unrecognized

  std::string slot(const std::string& name) const;
  bool operator==(const Intent&) const = default;
};

// One grammar rule. The pattern is matched case-insensitively against the
// whole cleaned utterance; capture groups fill capture_slots in order.
struct GrammarRule {
  std::string pattern;
  IntentKind kind;
  std::vector<std::string> capture_slots;
  Slots fixed_slots;
  std::string example;
};

const std::vector<GrammarRule>& rule_table();

// Trims, drops trailing "?.!" and a leading or trailing "please", then tries
// the rules in order. The first match wins.
Intent parse_utterance(std::string_view text);

// Ordinal words and digits ("2", "second", "two", "last") as 1-based
// positions; "last" gives -1. Returns 0 when not an ordinal.
int parse_ordinal(std::string_view word);

}  // namespace convbrowse
