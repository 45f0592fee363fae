#pragma once

#include <optional>
#include <string>

#include "stressmat/framework.hpp"

namespace stressmat {

/// Static drawing of a framework. With a stress, positive edges are blue,
/// negative red and zero edges dashed grey; stroke width grows with |s|.
/// Coordinates are the only floating point output. Throws DegenerateEdge,
/// LengthMismatch.
std::string emit_svg(const Framework& f, const std::optional<Stress>& stress = std::nullopt);

}  // namespace stressmat
