#pragma once

#include <optional>
#include <vector>

#include "wfc/types.hpp"

namespace wfc {

/// Turbine indices sorted by increasing streamwise coordinate for wind
/// direction `direction_deg`. Ties keep the original index order.
[[nodiscard]] std::vector<std::size_t> downstream_order(const FarmLayout& layout,
                                                        double direction_deg);

/// Rigid CCW rotation of all positions by `dphi_deg` about `pivot`
/// (layout centroid when omitted). Bumps `farm_rotation` by the same angle.
[[nodiscard]] FarmLayout rotate_layout(const FarmLayout& layout, double dphi_deg,
                                       std::optional<Vec2> pivot = std::nullopt);

}  // namespace wfc
