#pragma once

#include <map>
#include <string>
#include <vector>

#include "gradekit/technique.hpp"

namespace gradekit {

struct RenderedPrompt {
    std::string system;
    std::string user;
};

/// Slot names a prompt kind requires, in template order.
const std::vector<std::string>& prompt_slots(PromptKind kind);

/// Fills the technique's template. Every required slot must be present and
/// non-empty (MissingSlotError otherwise); extra slots are ignored. Rendering
/// is byte-stable: same inputs, same bytes.
RenderedPrompt render_prompt(PromptKind kind, const std::map<std::string, std::string>& slots);

/// Bumped whenever a template changes; folded into config fingerprints so
/// cached traces cannot silently mix prompt revisions.
inline constexpr int kPromptTemplateVersion = 1;

}  // namespace gradekit
