#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wfc/types.hpp"
#include "wfc/wake.hpp"

namespace wfc {

/// One wake in the merged flow field. The wake frame has X along the local
/// flow direction at the source rotor; the deficit scales the velocity
/// component along the rotor axis e_perp.
struct WakeEntry {
    std::size_t turbine = 0;
    Vec2 center;             // rotor center [m]
    double z_h = 0.0;        // hub height [m]
    double diameter = 0.0;   // D [m]
    double frame_cos = 1.0;  // wake-frame X direction (local flow)
    double frame_sin = 0.0;
    double perp_cos = 1.0;   // rotor axis e_perp
    double perp_sin = 0.0;
    double ct = 0.0;
    double gamma_deg = 0.0;
    double k_w = 0.0;
    double x0 = 0.0;
    double exponent_scale = 1.0;
};

/// Uniform background velocity plus an ordered (upstream-first) list of
/// wakes, merged by recursive projection onto each rotor axis.
struct FlowField {
    Vec2 ambient_velocity;
    std::vector<WakeEntry> wakes;

    /// Velocity at point (p, z). `clamp_events`, when given, counts points
    /// where a wake amplitude had to be clamped (invalid near field).
    [[nodiscard]] Vec2 evaluate(const Vec2& p, double z, int* clamp_events = nullptr) const;
};

/// Rotor-disc quadrature: 16 points on two rings of 8 at radii
/// R sqrt(1/4) and R sqrt(3/4), uniform weights 1/16. The inner ring starts
/// at the 12 o'clock position, the outer ring is offset by 22.5 deg.
/// Coordinates are (lateral, vertical) offsets in units of the rotor radius.
[[nodiscard]] const std::array<std::array<double, 2>, 16>& rotor_quadrature_points();

/// Disc-averaged wind speed seen by a rotor with axis direction
/// `axis_deg` (math frame, degrees) centered at (center, z_h).
[[nodiscard]] double rotor_average_speed(const FlowField& field, const Vec2& center,
                                         double z_h, double axis_deg, double diameter,
                                         int* clamp_events = nullptr);

/// Rotor axis direction [deg, math frame]: atan2(V, U) + gamma.
[[nodiscard]] double turbine_orientation(double u, double v, double gamma_deg);

/// Electrical power [W] for disc-averaged speed s and misalignment gamma:
/// P = 1/2 rho A C_P(s) cos^3(gamma) s^3, times eta0/cos(gamma) when
/// apply_eta is set. Zero outside the cut range.
[[nodiscard]] double turbine_power(double s, double gamma_deg, const TurbineSpec& spec,
                                   double rho, bool apply_eta);

/// Thrust/turbulence state pinned during an optimization pass.
struct FrozenOperatingPoint {
    double ct = 0.0;
    double i_rotor = 0.0;
};

struct SolveOptions {
    bool apply_eta = true;
    double deficit_exponent = 1.0;
    /// Lone-wake deficit at a rotor center above this marks the wake a
    /// turbulence contributor for that rotor.
    double contributor_threshold = 1e-3;
    const std::vector<FrozenOperatingPoint>* frozen = nullptr;
};

struct TurbineSolution {
    double s_rotor = 0.0;     // disc-averaged inflow speed [m/s]
    double theta_flow = 0.0;  // local flow direction [deg, math frame]
    double ct = 0.0;
    double i_rotor = 0.0;
    double k_w = 0.0;
    double x0 = 0.0;
    double power = 0.0;  // [W]
    bool operating = false;
    int clamp_events = 0;
};

struct FarmSolution {
    std::vector<TurbineSolution> turbines;  // indexed by turbine id
    std::vector<std::size_t> order;         // upstream-first processing order
    FlowField field;
    double farm_power = 0.0;  // [W]
};

/// Steady-state farm solve: turbines processed upstream-first, each sampling
/// the field of all upstream wakes, then contributing its own wake.
[[nodiscard]] FarmSolution solve_farm(const FarmLayout& layout, const AmbientState& ambient,
                                      const ControlState& control, const WakeParams& kappa,
                                      const TurbineSpec& spec, const SolveOptions& options = {});

/// Strongest single wake impinging on a target rotor center, described by
/// the Gaussian triple used for fatigue lookups: peak deficit fraction W_d,
/// width sigma_d = (sigma_y + sigma_z)/D, and lateral center offset in D.
struct DominantWake {
    double w_d = 0.0;
    double sigma_d = 1.0;
    double delta_c = 0.0;
    bool waked = false;
};

[[nodiscard]] DominantWake dominant_wake_at(const FlowField& field, std::size_t target,
                                            const Vec2& center, double z_h, double diameter,
                                            double threshold = 1e-3);

/// Hub-height velocity raster on a regular grid, CSV columns x,y,u,v,speed.
void export_flow_csv(const FlowField& field, double z, const Vec2& lo, const Vec2& hi,
                     int nx, int ny, std::ostream& out);

}  // namespace wfc
