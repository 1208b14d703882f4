#pragma once

#include <vector>

#include "wfc/surrogate.hpp"
#include "wfc/types.hpp"

namespace wfc::test {

/// 10 MW reference machine used throughout the tests: D = 178.3 m,
/// hub 119 m, region-2 plateau C_P = 0.476 up to ~11.4 m/s.
inline TurbineSpec reference_turbine() {
    TurbineSpec spec;
    spec.rotor_diameter = 178.3;
    spec.hub_height = 119.0;
    spec.cut_in = 4.0;
    spec.cut_out = 25.0;
    const std::vector<double> speeds{4.0,  5.0,  6.0,  7.0,  8.0,  9.0,  10.0, 11.0, 11.4,
                                     12.0, 13.0, 14.0, 16.0, 18.0, 20.0, 22.0, 25.0};
    const std::vector<double> ct{0.923, 0.919, 0.904, 0.858, 0.814, 0.814, 0.814, 0.814, 0.810,
                                 0.662, 0.494, 0.393, 0.269, 0.199, 0.155, 0.124, 0.092};
    const std::vector<double> cp{0.286,  0.418,  0.452,  0.469,  0.476,  0.476,  0.476,  0.476,
                                 0.4730, 0.4026, 0.3167, 0.2535, 0.1699, 0.1193, 0.0870, 0.0653,
                                 0.0445};
    spec.ct_curve = LinearTable(speeds, ct);
    spec.cp_curve = LinearTable(speeds, cp);
    return spec;
}

/// Column of n turbines along +x (west wind hits 0 first), spacing in D.
inline FarmLayout column_layout(std::size_t n, double spacing_d,
                                double diameter = 178.3) {
    FarmLayout layout;
    for (std::size_t i = 0; i < n; ++i) {
        layout.positions.push_back({static_cast<double>(i) * spacing_d * diameter, 0.0});
    }
    return layout;
}

/// rows x cols grid, aligned, spacing in D; id = row * cols + col.
inline FarmLayout grid_layout(std::size_t rows, std::size_t cols, double spacing_d,
                              double diameter = 178.3) {
    FarmLayout layout;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            layout.positions.push_back({static_cast<double>(c) * spacing_d * diameter,
                                        static_cast<double>(r) * spacing_d * diameter});
        }
    }
    return layout;
}

/// West wind: flow along +x.
inline AmbientState west_wind(double speed, double ti) {
    AmbientState amb;
    amb.speed = speed;
    amb.direction = 270.0;
    amb.ti = ti;
    return amb;
}

/// Coarse fatigue table covering the conditions the controller tests visit.
/// Built once per test binary (a few hundred distinct nodes at 5 Hz).
inline const FatigueLut& tiny_lut() {
    static const FatigueLut lut = [] {
        LutAxes axes;
        axes.values[0] = {4.0, 8.0, 12.0};
        axes.values[1] = {0.03, 0.10, 0.20};
        axes.values[2] = {-30.0, -15.0, 0.0, 15.0, 30.0};
        axes.values[3] = {0.0};
        axes.values[4] = {0.0, 0.3, 0.6};
        axes.values[5] = {0.8, 1.2, 1.6};
        axes.values[6] = {-1.0, 0.0, 1.0};
        LutBuildMeta meta;
        meta.sample_rate_hz = 5.0;
        return build_lut(axes, reference_turbine(), meta, 4);
    }();
    return lut;
}

}  // namespace wfc::test
