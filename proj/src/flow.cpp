#include "wfc/flow.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "wfc/farm.hpp"

namespace wfc {

Vec2 FlowField::evaluate(const Vec2& p, double z, int* clamp_events) const {
    Vec2 v = ambient_velocity;
    for (const auto& w : wakes) {
        const Vec2 r = p - w.center;
        const double x_local = r.x * w.frame_cos + r.y * w.frame_sin;
        if (x_local <= 0.0) continue;
        const double y_local = -r.x * w.frame_sin + r.y * w.frame_cos;
        const DeficitValue def = deficit(x_local, y_local, z, w.x0, w.k_w, w.ct, w.gamma_deg,
                                         w.diameter, w.z_h, w.exponent_scale);
        if (def.clamped && clamp_events != nullptr) ++(*clamp_events);
        if (def.value == 0.0) continue;
        const Vec2 e_perp{w.perp_cos, w.perp_sin};
        const Vec2 e_par{-w.perp_sin, w.perp_cos};
        const double vn = v.dot(e_perp) * (1.0 - def.value);
        const double vt = v.dot(e_par);
        v = e_perp * vn + e_par * vt;
    }
    return v;
}

const std::array<std::array<double, 2>, 16>& rotor_quadrature_points() {
    static const std::array<std::array<double, 2>, 16> pts = [] {
        std::array<std::array<double, 2>, 16> out{};
        const double r1 = std::sqrt(0.25);
        const double r2 = std::sqrt(0.75);
        for (int k = 0; k < 8; ++k) {
            const double a1 = deg2rad(45.0 * k);
            const double a2 = deg2rad(22.5 + 45.0 * k);
            out[static_cast<std::size_t>(k)] = {r1 * std::sin(a1), r1 * std::cos(a1)};
            out[static_cast<std::size_t>(8 + k)] = {r2 * std::sin(a2), r2 * std::cos(a2)};
        }
        return out;
    }();
    return pts;
}

double rotor_average_speed(const FlowField& field, const Vec2& center, double z_h,
                           double axis_deg, double diameter, int* clamp_events) {
    const double a = deg2rad(axis_deg);
    const Vec2 lateral{-std::sin(a), std::cos(a)};
    const double radius = 0.5 * diameter;
    double sum = 0.0;
    for (const auto& q : rotor_quadrature_points()) {
        const Vec2 p = center + lateral * (q[0] * radius);
        const double z = z_h + q[1] * radius;
        sum += field.evaluate(p, z, clamp_events).norm();
    }
    return sum / 16.0;
}

double turbine_orientation(double u, double v, double gamma_deg) {
    return rad2deg(std::atan2(v, u)) + gamma_deg;
}

double turbine_power(double s, double gamma_deg, const TurbineSpec& spec, double rho,
                     bool apply_eta) {
    if (s < spec.cut_in || s > spec.cut_out) return 0.0;
    const double g = deg2rad(gamma_deg);
    const double cg = std::cos(g);
    double p = 0.5 * rho * spec.rotor_area() * spec.cp(s) * cg * cg * cg * s * s * s;
    if (apply_eta) p *= spec.power_scaling / cg;
    return p;
}

FarmSolution solve_farm(const FarmLayout& layout, const AmbientState& ambient,
                        const ControlState& control, const WakeParams& kappa,
                        const TurbineSpec& spec, const SolveOptions& options) {
    const std::size_t n = layout.size();
    if (control.yaw.size() != n || control.available.size() != n) {
        throw std::invalid_argument("solve_farm: control state size mismatch");
    }
    if (options.frozen != nullptr && options.frozen->size() != n) {
        throw std::invalid_argument("solve_farm: frozen operating point size mismatch");
    }

    FarmSolution sol;
    sol.turbines.resize(n);
    sol.order = downstream_order(layout, ambient.direction);
    sol.field.ambient_velocity = ambient.velocity();
    sol.field.wakes.reserve(n);

    const double d = spec.rotor_diameter;

    for (std::size_t idx : sol.order) {
        TurbineSolution& ts = sol.turbines[idx];
        const Vec2 c = layout.positions[idx];
        const double gamma = control.yaw[idx];

        const Vec2 v_center = sol.field.evaluate(c, spec.hub_height, &ts.clamp_events);
        ts.theta_flow = rad2deg(std::atan2(v_center.y, v_center.x));
        const double axis = ts.theta_flow + gamma;
        ts.s_rotor =
            rotor_average_speed(sol.field, c, spec.hub_height, axis, d, &ts.clamp_events);

        if (control.available[idx] == 0) {
            continue;  // no thrust, no wake, no power
        }
        ts.operating = ts.s_rotor >= spec.cut_in && ts.s_rotor <= spec.cut_out;

        // Rotor-effective turbulence from the strongest upstream contributor.
        double i_added = 0.0;
        for (const auto& w : sol.field.wakes) {
            const Vec2 r = c - w.center;
            const double x_local = r.x * w.frame_cos + r.y * w.frame_sin;
            if (x_local <= 0.0) continue;
            const double y_local = -r.x * w.frame_sin + r.y * w.frame_cos;
            const DeficitValue lone =
                deficit(x_local, y_local, spec.hub_height, w.x0, w.k_w, w.ct, w.gamma_deg,
                        w.diameter, w.z_h, w.exponent_scale);
            if (lone.value <= options.contributor_threshold) continue;
            const double i_plus = added_turbulence(w.ct, ambient.ti, x_local / d);
            if (i_plus > i_added) i_added = i_plus;
        }

        if (options.frozen != nullptr) {
            ts.ct = (*options.frozen)[idx].ct;
            ts.i_rotor = (*options.frozen)[idx].i_rotor;
        } else {
            ts.ct = ts.operating ? spec.ct(ts.s_rotor) : 0.0;
            ts.i_rotor = combine_turbulence(ambient.ti, i_added);
        }

        if (ts.operating) {
            ts.power = turbine_power(ts.s_rotor, gamma, spec, ambient.rho, options.apply_eta);
        }

        if (ts.ct > 0.0) {
            ts.k_w = wake_expansion(kappa.k_a, kappa.k_b, ts.i_rotor);
            ts.x0 = near_wake_length(ts.ct, gamma, ts.i_rotor, kappa.alpha, kappa.beta, d);
            WakeEntry entry;
            entry.turbine = idx;
            entry.center = c;
            entry.z_h = spec.hub_height;
            entry.diameter = d;
            const double tf = deg2rad(ts.theta_flow);
            entry.frame_cos = std::cos(tf);
            entry.frame_sin = std::sin(tf);
            const double ta = deg2rad(axis);
            entry.perp_cos = std::cos(ta);
            entry.perp_sin = std::sin(ta);
            entry.ct = ts.ct;
            entry.gamma_deg = gamma;
            entry.k_w = ts.k_w;
            entry.x0 = ts.x0;
            entry.exponent_scale = options.deficit_exponent;
            sol.field.wakes.push_back(entry);
        }
    }

    for (const auto& ts : sol.turbines) sol.farm_power += ts.power;
    return sol;
}

DominantWake dominant_wake_at(const FlowField& field, std::size_t target, const Vec2& center,
                              double z_h, double diameter, double threshold) {
    DominantWake best;
    double best_local = threshold;
    for (const auto& w : field.wakes) {
        if (w.turbine == target) continue;
        const Vec2 r = center - w.center;
        const double x_local = r.x * w.frame_cos + r.y * w.frame_sin;
        if (x_local <= 0.0) continue;
        const double y_local = -r.x * w.frame_sin + r.y * w.frame_cos;
        const DeficitValue local = deficit(x_local, y_local, z_h, w.x0, w.k_w, w.ct,
                                           w.gamma_deg, w.diameter, w.z_h, w.exponent_scale);
        if (local.value <= best_local) continue;
        best_local = local.value;

        const WakeWidths widths = wake_widths(x_local, w.x0, w.k_w, w.gamma_deg, w.diameter);
        const double radicand = 1.0 - w.ct * std::cos(deg2rad(w.gamma_deg)) * w.diameter *
                                          w.diameter / (8.0 * widths.sigma_y * widths.sigma_z);
        best.w_d = radicand >= 0.0 ? 1.0 - std::sqrt(radicand) : 1.0;
        best.sigma_d = (widths.sigma_y + widths.sigma_z) / diameter;
        const double delta = deflection(x_local, w.x0, w.k_w, w.ct, w.gamma_deg, w.diameter);
        best.delta_c = (delta - y_local) / diameter;
        best.waked = true;
    }
    return best;
}

void export_flow_csv(const FlowField& field, double z, const Vec2& lo, const Vec2& hi,
                     int nx, int ny, std::ostream& out) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("export_flow_csv: need nx, ny >= 2");
    out << "x,y,u,v,speed\n";
    char buf[160];
    for (int j = 0; j < ny; ++j) {
        const double y = lo.y + (hi.y - lo.y) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = lo.x + (hi.x - lo.x) * i / (nx - 1);
            const Vec2 v = field.evaluate({x, y}, z);
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f\n", x, y, v.x, v.y,
                          v.norm());
            out << buf;
        }
    }
}

}  // namespace wfc
