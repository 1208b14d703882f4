#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "wfc/lut.hpp"
#include "wfc/types.hpp"

namespace wfc {

/// Gaussian mean inflow seen by a waked rotor: free stream u_inf reduced by
/// a deficit of depth w_d centered laterally at delta_c rotor diameters from
/// the hub, with width sigma_d in 2*sigma/D units:
///   U(y, z) = u_inf (1 - w_d exp(-2 (y - delta_c D)^2 / (D sigma_d)^2)
///                         exp(-2 (z - z_h)^2 / (D sigma_d)^2)).
struct InflowWakeSpec {
    double u_inf = 0.0;    // [m/s]
    double w_d = 0.0;      // deficit fraction
    double sigma_d = 1.0;  // 2*sigma/D
    double delta_c = 0.0;  // center offset [D]
    double diameter = 0.0; // [m]
    double hub_height = 0.0;
};

[[nodiscard]] double inflow_wake_speed(const InflowWakeSpec& w, double y, double z);

/// Query point of the fatigue table, in axis order.
struct SurrogateInputs {
    double wind_speed = 8.0;  // [m/s]
    double ti = 0.1;          // fraction
    double yaw = 0.0;         // [deg]
    double pitch = 0.0;       // [deg]
    double w_d = 0.0;
    double sigma_d = 1.2;
    double delta_c = 0.0;

    [[nodiscard]] std::array<double, kLutAxisCount> as_array() const {
        return {wind_speed, ti, yaw, pitch, w_d, sigma_d, delta_c};
    }
};

/// Synthetic 10-minute load histories for one operating point and one
/// turbulence seed: blade root out-of-plane / in-plane bending, tower base
/// fore-aft / side-side. Units kN*m, deterministic per (inputs, seed).
struct LoadCase {
    double dt = 0.1;  // [s]
    std::array<std::vector<double>, kLutChannelCount> channels;
};

[[nodiscard]] LoadCase surrogate_load_case(const SurrogateInputs& in, const TurbineSpec& spec,
                                           std::uint64_t seed, double duration_s = 600.0,
                                           double sample_rate_hz = 10.0);

/// DELs and mean loads of one operating point averaged over `n_seeds`
/// turbulence realizations.
struct SurrogateCaseResult {
    std::array<double, kLutChannelCount> del{};
    std::array<double, kLutChannelCount> mean{};
};

[[nodiscard]] SurrogateCaseResult evaluate_surrogate_case(const SurrogateInputs& in,
                                                          const TurbineSpec& spec, int n_seeds,
                                                          const LutBuildMeta& meta);

/// Seeds required at turbulence intensity `ti`: the variance estimate
/// ceil(ti^2 * 2 tau / (eps^2 * duration)), lower-bounded by the schedule
/// entry when `ti` matches one.
[[nodiscard]] int seed_count(double ti, const SeedSchedule& schedule, double duration_s);

/// Node bookkeeping for a build. Nodes with W_d = 0 collapse onto a single
/// representative per (speed, TI, yaw, pitch): the wake shape axes are
/// degenerate without a wake.
struct LutBuildPlan {
    std::size_t nodes_total = 0;      // full grid product
    std::size_t nodes_wake_free = 0;  // collapsed W_d = 0 representatives
    std::size_t nodes_distinct = 0;   // simulated after the collapse
    std::size_t series_total = 0;     // sum of seeds over distinct nodes

    static LutBuildPlan make(const LutAxes& axes, const LutBuildMeta& meta);
};

/// Populate a fatigue table over `axes`. Embarrassingly parallel over
/// distinct nodes; results land at fixed node offsets so the payload is
/// identical for any worker count.
[[nodiscard]] FatigueLut build_lut(const LutAxes& axes, const TurbineSpec& spec,
                                   const LutBuildMeta& meta, int workers = 1,
                                   const std::function<void(std::size_t, std::size_t)>&
                                       progress = nullptr);

}  // namespace wfc
