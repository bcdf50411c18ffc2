#pragma once

#include <string_view>

#include <json.hpp>

namespace gradekit {

/// Pulls the first balanced top-level JSON object out of model output.
/// Handles ``` fences, prose before/after the object, and braces inside
/// string values (with escapes). Throws NoJsonFoundError when no '{' exists
/// and UnbalancedBracesError when the object never closes.
nlohmann::json extract_json(std::string_view raw_text);

}  // namespace gradekit
