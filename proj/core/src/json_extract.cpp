#include "gradekit/json_extract.hpp"

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

// Scans from `open` (a '{') for the matching close brace, honoring strings
// and escapes. Returns npos when the object never closes.
std::size_t matching_close(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') { in_string = true; continue; }
        if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i;
    }
    return std::string_view::npos;
}

}  // namespace

nlohmann::json extract_json(std::string_view raw_text) {
    // Prose may contain stray braces; try each '{' until one opens a
    // balanced object that parses.
    bool saw_open = false;
    for (std::size_t open = raw_text.find('{'); open != std::string_view::npos;
         open = raw_text.find('{', open + 1)) {
        saw_open = true;
        const std::size_t close = matching_close(raw_text, open);
        if (close == std::string_view::npos) continue;
        const std::string_view candidate = raw_text.substr(open, close - open + 1);
        nlohmann::json parsed =
            nlohmann::json::parse(candidate, /*cb=*/nullptr, /*allow_exceptions=*/false);
        if (!parsed.is_discarded()) return parsed;
    }
    if (!saw_open) throw NoJsonFoundError("no '{' in model output");
    throw UnbalancedBracesError("no balanced JSON object in model output");
}

}  // namespace gradekit
