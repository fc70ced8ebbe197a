#pragma once

#include <optional>
#include <string_view>

namespace etk {

/// Whether an envelope energy is a guaranteed bound on the true level.
enum class VariationalCharacter { UpperBound, LowerBound, Exact, Undefined };

/// Sign of d²b/dy² where b(y) = f(√y) for a kinetic or potential function f.
enum class Curvature { Negative, Zero, Positive, Indefinite };

std::string_view to_string(VariationalCharacter c);
std::string_view to_string(Curvature c);
std::optional<VariationalCharacter> parse_character(std::string_view text);

}  // namespace etk
