#include "wfc/farm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wfc {

std::vector<std::size_t> downstream_order(const FarmLayout& layout, double direction_deg) {
    AmbientState probe;
    probe.direction = direction_deg;
    const Vec2 flow = probe.flow_dir();
    std::vector<std::size_t> order(layout.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return layout.positions[a].dot(flow) < layout.positions[b].dot(flow);
    });
    return order;
}

FarmLayout rotate_layout(const FarmLayout& layout, double dphi_deg, std::optional<Vec2> pivot) {
    const Vec2 c = pivot.value_or(layout.centroid());
    const double a = deg2rad(dphi_deg);
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    FarmLayout out;
    out.positions.reserve(layout.size());
    for (const auto& p : layout.positions) {
        const Vec2 r = p - c;
        out.positions.push_back({c.x + ca * r.x - sa * r.y, c.y + sa * r.x + ca * r.y});
    }
    out.farm_rotation = layout.farm_rotation + dphi_deg;
    return out;
}

}  // namespace wfc
