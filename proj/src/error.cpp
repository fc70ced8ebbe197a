#include "etk/error.hpp"

#include "etk/character.hpp"

namespace etk {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSystem: return "invalid-system";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::NoBoundState: return "no-bound-state";
        case ErrorKind::UnsupportedImprovement: return "unsupported-improvement";
        case ErrorKind::ImprovementUndefined: return "improvement-undefined";
        case ErrorKind::Undefined: return "undefined";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

std::string_view to_string(VariationalCharacter c) {
    switch (c) {
        case VariationalCharacter::UpperBound: return "UpperBound";
        case VariationalCharacter::LowerBound: return "LowerBound";
        case VariationalCharacter::Exact: return "Exact";
        case VariationalCharacter::Undefined: return "Undefined";
    }
    return "Undefined";
}

std::string_view to_string(Curvature c) {
    switch (c) {
        case Curvature::Negative: return "negative";
        case Curvature::Zero: return "zero";
        case Curvature::Positive: return "positive";
        case Curvature::Indefinite: return "indefinite";
    }
    return "indefinite";
}

std::optional<VariationalCharacter> parse_character(std::string_view text) {
    for (auto c : {VariationalCharacter::UpperBound, VariationalCharacter::LowerBound,
                   VariationalCharacter::Exact, VariationalCharacter::Undefined}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

}  // namespace etk
