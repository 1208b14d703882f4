#pragma once

#include "wfc/types.hpp"

namespace wfc {

/// Lateral and vertical Gaussian wake widths [m] at downstream distance x.
struct WakeWidths {
    double sigma_y = 0.0;
    double sigma_z = 0.0;
};

/// Velocity deficit fraction at one point of the wake frame.
/// `clamped` marks points where the Gaussian amplitude radicand went
/// negative (invalid near field); the amplitude is then pinned to 1.
struct DeficitValue {
    double value = 0.0;
    bool clamped = false;
};

/// Wake growth rate k_w = k_a * I_rotor + k_b.
[[nodiscard]] double wake_expansion(double k_a, double k_b, double i_rotor);

/// Near-wake length x_0 [m]:
///   x_0/D = cos(g) (1 + sqrt(1-C_T)) / sqrt(2 (4 a I + 2 b (1 - sqrt(1-C_T)))).
/// Throws std::invalid_argument when the bracketed term is not positive.
[[nodiscard]] double near_wake_length(double ct, double gamma_deg, double i_rotor,
                                      double alpha, double beta, double diameter);

/// Gaussian widths at downstream distance x [m]:
///   sigma_y/D = 0.35 cos(g) + k_w ln(1 + exp((x - x_0)/D))
///   sigma_z/D = 0.35        + k_w ln(1 + exp((x - x_0)/D))
[[nodiscard]] WakeWidths wake_widths(double x, double x0, double k_w, double gamma_deg,
                                     double diameter);

/// Lateral wake-center displacement [m] at downstream distance x. Linear
/// (x tan(theta_c0)) up to x_0, logarithmic growth beyond, continuous at x_0.
/// Odd in gamma; identically zero for gamma == 0 or C_T == 0.
[[nodiscard]] double deflection(double x, double x0, double k_w, double ct,
                                double gamma_deg, double diameter);

/// Velocity deficit fraction at wake-frame point (x, y, z); zero for x <= 0.
/// y is measured laterally from the rotor center, z from the ground with the
/// hub at z_h. `exponent_scale` multiplies the Gaussian exponents (1 = nominal).
[[nodiscard]] DeficitValue deficit(double x, double y, double z, double x0, double k_w,
                                   double ct, double gamma_deg, double diameter,
                                   double z_h, double exponent_scale = 1.0);

/// Added turbulence intensity of one wake at x_over_d diameters downstream
/// (Crespo-Hernandez): 0.73 a^0.8325 I_inf^0.0325 (x/D)^-0.32 with
/// a = (1 - sqrt(1-C_T))/2. Zero when C_T == 0 or x_over_d <= 0.
[[nodiscard]] double added_turbulence(double ct, double i_ambient, double x_over_d);

/// Ambient TI combined in quadrature with the largest added-TI contribution.
[[nodiscard]] double combine_turbulence(double i_ambient, double i_added_max);

}  // namespace wfc
