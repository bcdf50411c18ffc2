#pragma once

#include <string>
#include <string_view>

#include "gradekit/errors.hpp"

namespace gradekit {

enum class Technique { Cre, Pre, Eme, Fpm, QaMethodwise };

inline std::string to_string(Technique t) {
    switch (t) {
        case Technique::Cre: return "CRE";
        case Technique::Pre: return "PRE";
        case Technique::Eme: return "EME";
        case Technique::Fpm: return "FPM";
        case Technique::QaMethodwise: return "QA_METHODWISE";
    }
    return "?";
}

inline Technique technique_from_string(std::string_view s) {
    if (s == "CRE" || s == "cre") return Technique::Cre;
    if (s == "PRE" || s == "pre") return Technique::Pre;
    if (s == "EME" || s == "eme") return Technique::Eme;
    if (s == "FPM" || s == "fpm") return Technique::Fpm;
    if (s == "QA_METHODWISE" || s == "qa" || s == "qa_methodwise") return Technique::QaMethodwise;
    throw UsageError("unknown technique '" + std::string(s) + "'");
}

/// Distinct prompt/response contracts; EME uses two of them.
enum class PromptKind { Cre, Pre, EmeIdentify, EmeEvaluate, Fpm, QaMethod };

inline std::string to_string(PromptKind k) {
    switch (k) {
        case PromptKind::Cre: return "cre";
        case PromptKind::Pre: return "pre";
        case PromptKind::EmeIdentify: return "eme_identify";
        case PromptKind::EmeEvaluate: return "eme_evaluate";
        case PromptKind::Fpm: return "fpm";
        case PromptKind::QaMethod: return "qa_method";
    }
    return "?";
}

}  // namespace gradekit
