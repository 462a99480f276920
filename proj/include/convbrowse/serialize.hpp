#pragma once

#include <json.hpp>

#include "convbrowse/dialog.hpp"
#include "convbrowse/eval.hpp"
#include "convbrowse/heuristics.hpp"
#include "convbrowse/nlu.hpp"
#include "convbrowse/page_model.hpp"

namespace convbrowse {

using Json = nlohmann::json;

Json to_json(const Segment& segment);
Json to_json(const SegmentTree& tree);
Json to_json(const Intent& intent);
Json to_json(const OfferingsConfig& config);
Json to_json(const Offering& offering);
Json to_json(const EvalReport& report);

// The API envelope: {text, items:[{n, label}], kind, session_id}.
Json response_envelope(const Response& response, const std::string& session_id);

// Current page, history titles and preferences.
Json session_summary(const Session& session);

}  // namespace convbrowse
