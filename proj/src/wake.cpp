#include "wfc/wake.hpp"

#include <cmath>
#include <stdexcept>

namespace wfc {

namespace {

double check_ct(double ct) {
    if (!(ct >= 0.0) || !(ct < 1.0)) {
        throw std::invalid_argument("wake: C_T must lie in [0, 1)");
    }
    return ct;
}

/// Initial skew angle theta_c0 [rad] of the deflected wake center.
double skew_angle(double ct, double gamma_rad) {
    double cg = std::cos(gamma_rad);
    double radicand = 1.0 - ct * cg;
    if (radicand < 0.0) radicand = 0.0;
    return 0.3 * gamma_rad / cg * (1.0 - std::sqrt(radicand));
}

/// Logarithmic far-wake deflection term evaluated with local widths.
double far_deflection_term(double sigma_y, double sigma_z, double k_w, double ct,
                           double gamma_rad, double diameter, double theta_c0) {
    const double cg = std::cos(gamma_rad);
    const double sqrt_ct = std::sqrt(ct);
    const double m = std::sqrt(8.0 * sigma_y * sigma_z / (diameter * diameter * cg));
    const double num = (1.6 + sqrt_ct) * (1.6 * m - sqrt_ct);
    const double den = (1.6 - sqrt_ct) * (1.6 * m + sqrt_ct);
    if (!(num > 0.0) || !(den > 0.0)) return 0.0;
    const double pref = diameter * theta_c0 / 14.7 * std::sqrt(cg / (k_w * k_w * ct)) *
                        (2.9 + 1.3 * std::sqrt(1.0 - ct) - ct);
    return pref * std::log(num / den);
}

}  // namespace

double wake_expansion(double k_a, double k_b, double i_rotor) {
    return k_a * i_rotor + k_b;
}

double near_wake_length(double ct, double gamma_deg, double i_rotor,
                        double alpha, double beta, double diameter) {
    check_ct(ct);
    const double g = deg2rad(gamma_deg);
    const double s = std::sqrt(1.0 - ct);
    const double denom_sq = 2.0 * (4.0 * alpha * i_rotor + 2.0 * beta * (1.0 - s));
    if (!(denom_sq > 0.0)) {
        throw std::invalid_argument("near_wake_length: non-positive denominator term");
    }
    return diameter * std::cos(g) * (1.0 + s) / std::sqrt(denom_sq);
}

WakeWidths wake_widths(double x, double x0, double k_w, double gamma_deg, double diameter) {
    const double g = deg2rad(gamma_deg);
    const double grow = k_w * softplus((x - x0) / diameter);
    return {diameter * (0.35 * std::cos(g) + grow), diameter * (0.35 + grow)};
}

double deflection(double x, double x0, double k_w, double ct, double gamma_deg,
                  double diameter) {
    check_ct(ct);
    if (x <= 0.0) return 0.0;
    const double g = deg2rad(gamma_deg);
    const double theta_c0 = skew_angle(ct, g);
    if (theta_c0 == 0.0 || ct == 0.0) return 0.0;
    const double tan_theta = std::tan(theta_c0);
    if (x <= x0) return x * tan_theta;
    const WakeWidths w = wake_widths(x, x0, k_w, gamma_deg, diameter);
    const WakeWidths w0 = wake_widths(x0, x0, k_w, gamma_deg, diameter);
    const double term = far_deflection_term(w.sigma_y, w.sigma_z, k_w, ct, g, diameter, theta_c0);
    const double term0 =
        far_deflection_term(w0.sigma_y, w0.sigma_z, k_w, ct, g, diameter, theta_c0);
    return x0 * tan_theta + (term - term0);
}

DeficitValue deficit(double x, double y, double z, double x0, double k_w, double ct,
                     double gamma_deg, double diameter, double z_h, double exponent_scale) {
    check_ct(ct);
    if (x <= 0.0 || ct == 0.0) return {0.0, false};
    const double g = deg2rad(gamma_deg);
    const WakeWidths w = wake_widths(x, x0, k_w, gamma_deg, diameter);
    const double radicand =
        1.0 - ct * std::cos(g) * diameter * diameter / (8.0 * w.sigma_y * w.sigma_z);
    bool clamped = false;
    double amplitude = 1.0;
    if (radicand >= 0.0) {
        amplitude = 1.0 - std::sqrt(radicand);
    } else {
        clamped = true;
    }
    const double dy = (y - deflection(x, x0, k_w, ct, gamma_deg, diameter)) / w.sigma_y;
    const double dz = (z - z_h) / w.sigma_z;
    const double shape = std::exp(-0.5 * exponent_scale * (dy * dy + dz * dz));
    return {amplitude * shape, clamped};
}

double added_turbulence(double ct, double i_ambient, double x_over_d) {
    check_ct(ct);
    if (ct <= 0.0 || x_over_d <= 0.0) return 0.0;
    const double a = 0.5 * (1.0 - std::sqrt(1.0 - ct));
    return 0.73 * std::pow(a, 0.8325) * std::pow(i_ambient, 0.0325) * std::pow(x_over_d, -0.32);
}

double combine_turbulence(double i_ambient, double i_added_max) {
    return std::sqrt(i_ambient * i_ambient + i_added_max * i_added_max);
}

}  // namespace wfc
