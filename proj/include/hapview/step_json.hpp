#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hapview/transform.hpp"

namespace hapview {

/// Steps serialize as objects tagged by "op", e.g.
///   {"op": "filter_frequency", "threshold": 0.005, "mode": "ABOVE"}
/// A pipeline is either an array of steps or {"steps": [...]}; entries may
/// carry extra keys (the service log adds "timestamp"), which are ignored.
nlohmann::json step_to_json(const Step& s);

/// Throws Error(InvalidStep) naming the offending field.
Step step_from_json(const nlohmann::json& j);

nlohmann::json steps_to_json(const std::vector<Step>& steps);

/// Throws Error(InvalidStep) with a message starting "step <i>:" on the first
/// invalid entry, or on malformed JSON.
std::vector<Step> parse_pipeline(const std::string& text);

}  // namespace hapview
