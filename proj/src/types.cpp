#include "wfc/types.hpp"

#include <cmath>
#include <stdexcept>

namespace wfc {

void TurbineSpec::validate() const {
    if (!(rotor_diameter > 0.0)) {
        throw std::invalid_argument("TurbineSpec: rotor diameter must be positive");
    }
    if (!(hub_height > 0.5 * rotor_diameter)) {
        throw std::invalid_argument("TurbineSpec: hub height must exceed the rotor radius");
    }
    if (!(cut_in > 0.0) || !(cut_out > cut_in)) {
        throw std::invalid_argument("TurbineSpec: need 0 < cut_in < cut_out");
    }
    if (!(yaw_rate_limit > 0.0)) {
        throw std::invalid_argument("TurbineSpec: yaw rate limit must be positive");
    }
    if (!(power_scaling > 0.0)) {
        throw std::invalid_argument("TurbineSpec: power scaling must be positive");
    }
    if (ct_curve.empty() || cp_curve.empty()) {
        throw std::invalid_argument("TurbineSpec: coefficient curves are required");
    }
    for (double v : ct_curve.ys()) {
        if (!(v >= 0.0) || !(v < 1.0)) {
            throw std::invalid_argument("TurbineSpec: C_T nodes must lie in [0, 1)");
        }
    }
    const double betz = 16.0 / 27.0;
    for (double v : cp_curve.ys()) {
        if (!(v > 0.0) || !(v < betz)) {
            throw std::invalid_argument("TurbineSpec: C_P nodes must lie in (0, 16/27)");
        }
    }
}

void FarmLayout::validate(double rotor_diameter) const {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            double d = (positions[i] - positions[j]).norm();
            if (d < rotor_diameter) {
                throw std::invalid_argument(
                    "FarmLayout: turbines " + std::to_string(i) + " and " + std::to_string(j) +
                    " are closer than one rotor diameter");
            }
        }
    }
}

Vec2 FarmLayout::centroid() const {
    Vec2 c;
    if (positions.empty()) return c;
    for (const auto& p : positions) c = c + p;
    return c * (1.0 / static_cast<double>(positions.size()));
}

void MeasurementWindow::validate() const {
    if (!(t_end > t_start)) {
        throw std::invalid_argument("MeasurementWindow: window duration must be positive");
    }
    for (const auto& t : turbines) {
        if (t.completeness < 0.0 || t.completeness > 1.0) {
            throw std::invalid_argument("MeasurementWindow: completeness outside [0, 1]");
        }
        if (t.completeness > 0.0 && t.power_mean < 0.0) {
            throw std::invalid_argument("MeasurementWindow: negative mean power");
        }
    }
}

}  // namespace wfc
