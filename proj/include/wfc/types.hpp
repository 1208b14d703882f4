#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wfc/util.hpp"

namespace wfc {

/// Machine description with tabulated thrust and power coefficient curves.
/// Curves are piecewise linear over a strictly increasing speed grid.
struct TurbineSpec {
    double rotor_diameter = 0.0;   // D [m]
    double hub_height = 0.0;       // z_h [m]
    double cut_in = 0.0;           // [m/s]
    double cut_out = 0.0;          // [m/s]
    double yaw_rate_limit = 10.0;  // [deg/s]
    double wohler_blade = 10.0;    // Wohler exponent, blade channels
    double wohler_tower = 4.0;     // Wohler exponent, tower channels
    double power_scaling = 1.08;   // eta0 in eta(gamma) = eta0 / cos(gamma)
    LinearTable ct_curve;          // C_T(speed)
    LinearTable cp_curve;          // C_P(speed)

    [[nodiscard]] double radius() const { return 0.5 * rotor_diameter; }
    [[nodiscard]] double rotor_area() const {
        return 0.25 * kPi * rotor_diameter * rotor_diameter;
    }
    [[nodiscard]] double ct(double speed) const { return ct_curve(speed); }
    [[nodiscard]] double cp(double speed) const { return cp_curve(speed); }

    /// Throws std::invalid_argument when geometric or curve invariants fail.
    void validate() const;
};

/// Horizontal turbine positions in a fixed east/north frame.
struct FarmLayout {
    std::vector<Vec2> positions;  // [m], index == turbine id
    double farm_rotation = 0.0;   // [deg, CCW] accumulated rigid rotation

    [[nodiscard]] std::size_t size() const { return positions.size(); }

    /// Throws std::invalid_argument when positions coincide or two turbines
    /// sit closer than one rotor diameter.
    void validate(double rotor_diameter) const;

    [[nodiscard]] Vec2 centroid() const;
};

/// Free-stream conditions. `direction` is the meteorological wind direction
/// in degrees: the direction the wind comes FROM, clockwise from north, so
/// 270 deg is a west wind blowing toward +x.
struct AmbientState {
    double speed = 0.0;      // U_b [m/s]
    double direction = 0.0;  // phi [deg]
    double ti = 0.0;         // ambient turbulence intensity [-]
    double rho = 1.225;      // air density [kg/m^3]

    /// Unit vector of the flow (direction the wind blows TOWARD), east/north frame.
    [[nodiscard]] Vec2 flow_dir() const {
        double a = deg2rad(-90.0 - direction);
        return {std::cos(a), std::sin(a)};
    }
    [[nodiscard]] Vec2 velocity() const { return flow_dir() * speed; }
};

/// Set points and availability for every turbine.
struct ControlState {
    std::vector<double> yaw;          // misalignment set points [deg]
    std::vector<double> pitch_offset; // collective pitch offsets [deg]
    std::vector<int> available;       // B_k: 1 available, 0 out of service

    static ControlState zeros(std::size_t n) {
        ControlState c;
        c.yaw.assign(n, 0.0);
        c.pitch_offset.assign(n, 0.0);
        c.available.assign(n, 1);
        return c;
    }
};

/// Wake model tuning parameters kappa = [k_a, k_b, alpha, beta].
struct WakeParams {
    double k_a = 0.38;
    double k_b = 0.004;
    double alpha = 2.32;
    double beta = 0.154;

    [[nodiscard]] std::array<double, 4> as_array() const { return {k_a, k_b, alpha, beta}; }
    static WakeParams from_array(const std::array<double, 4>& v) {
        return {v[0], v[1], v[2], v[3]};
    }
};

/// Admissible box for calibrated wake parameters.
struct WakeParamBounds {
    std::array<double, 4> lower{0.0, 0.001, 0.5, 0.01};
    std::array<double, 4> upper{1.0, 0.1, 5.0, 0.5};
};

/// Windowed SCADA-style statistics for one turbine over one control period.
struct TurbineWindow {
    double power_mean = 0.0;   // [W], mean over available samples
    double yaw_mean = 0.0;     // [deg]
    double completeness = 0.0; // fraction of window with valid data, [0, 1]
};

struct MeasurementWindow {
    double t_start = 0.0;  // [s]
    double t_end = 0.0;    // [s]
    std::vector<TurbineWindow> turbines;

    [[nodiscard]] double duration() const { return t_end - t_start; }
    void validate() const;
};

}  // namespace wfc
