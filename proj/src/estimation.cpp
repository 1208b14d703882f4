#include "wfc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfc/flow.hpp"

namespace wfc {

std::vector<std::size_t> upstream_set(const FarmLayout& layout, const AmbientState& ambient,
                                      const WakeParams& kappa, const TurbineSpec& spec,
                                      const std::vector<int>& availability, double threshold) {
    const std::size_t n = layout.size();
    if (availability.size() != n) {
        throw std::invalid_argument("upstream_set: availability size mismatch");
    }
    if (!(ambient.speed > 0.0)) {
        throw std::invalid_argument("upstream_set: reference speed must be positive");
    }
    ControlState zero = ControlState::zeros(n);
    zero.available = availability;
    const FarmSolution sol = solve_farm(layout, ambient, zero, kappa, spec);

    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (availability[k] == 0) continue;
        const double deficit = 1.0 - sol.turbines[k].s_rotor / ambient.speed;
        if (deficit < threshold) out.push_back(k);
    }
    if (out.empty()) throw std::runtime_error("upstream_set: no unwaked available turbine");
    return out;
}

EstimateResult estimate_background(const MeasurementWindow& window,
                                   const std::vector<std::size_t>& upstream,
                                   const TurbineSpec& spec, double rho, bool apply_eta,
                                   double tol) {
    if (upstream.empty()) {
        throw std::invalid_argument("estimate_background: empty upstream set");
    }
    window.validate();
    double power_sum = 0.0;
    for (std::size_t k : upstream) {
        if (k >= window.turbines.size()) {
            throw std::invalid_argument("estimate_background: turbine index out of range");
        }
        power_sum += window.turbines[k].power_mean;
    }
    if (!(power_sum > 0.0)) {
        throw std::runtime_error(
            "estimate_background: upstream powers all zero (idle or curtailed)");
    }

    auto mismatch = [&](double u) {
        double acc = 0.0;
        for (std::size_t k : upstream) {
            const auto& t = window.turbines[k];
            const double p = turbine_power(u, t.yaw_mean, spec, rho, apply_eta);
            const double r = t.power_mean - p;
            acc += r * r;
        }
        return acc / static_cast<double>(upstream.size());
    };

    // The power curve is non-monotone around rated speed (C_P roll-off),
    // so the mismatch is not unimodal over the whole cut range: scan a fine
    // grid, refine every local minimum by golden section, and keep the
    // lowest speed among near-equal optima (above rated the curve is nearly
    // flat, so ties there carry no information).
    const double span = spec.cut_out - spec.cut_in;
    const int cells = std::max(1, static_cast<int>(std::ceil(span / 0.1)));
    std::vector<double> fs(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        fs[i] = mismatch(spec.cut_in + span * i / cells);
    }

    struct Candidate {
        double u, f, slack;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i <= cells; ++i) {
        const bool left_ok = i == 0 || fs[i] <= fs[i - 1];
        const bool right_ok = i == cells || fs[i] <= fs[i + 1];
        if (!left_ok || !right_ok) continue;
        const double lo = spec.cut_in + span * std::max(i - 1, 0) / cells;
        const double hi = spec.cut_in + span * std::min(i + 1, cells) / cells;
        Candidate c;
        c.u = golden_section_min(mismatch, lo, hi, tol);
        c.f = mismatch(c.u);
        // Refinement resolves f only to curvature * tol^2; measure that
        // granularity so equally good optima can be recognized as ties.
        c.slack = 0.0;
        for (double probe : {c.u - tol, c.u + tol}) {
            if (probe < spec.cut_in || probe > spec.cut_out) continue;
            c.slack = std::max(c.slack, mismatch(probe) - c.f);
        }
        cands.push_back(c);
    }

    const auto best = std::min_element(cands.begin(), cands.end(),
                                       [](const Candidate& a, const Candidate& b) {
                                           return a.f < b.f;
                                       });
    // Above rated the power curve is nearly flat, so several basins can fit
    // the data equally well; resolve such ties toward the lowest speed,
    // where the inversion is informative.
    EstimateResult res;
    res.u_b = best->u;
    res.rms = std::sqrt(best->f);
    for (const Candidate& c : cands) {
        if (c.u >= res.u_b) continue;
        if (c.f <= best->f + 4.0 * (c.slack + best->slack) + 1e-9 * (1.0 + best->f)) {
            res.u_b = c.u;
            res.rms = std::sqrt(c.f);
        }
    }
    return res;
}

namespace {

double data_term_mw2(const FarmLayout& layout, const AmbientState& ambient,
                     const MeasurementWindow& window, const std::vector<int>& availability,
                     const WakeParams& kappa, const TurbineSpec& spec, bool apply_eta,
                     int* n_used = nullptr) {
    const std::size_t n = layout.size();
    ControlState control;
    control.yaw.resize(n, 0.0);
    control.pitch_offset.assign(n, 0.0);
    control.available = availability;
    for (std::size_t k = 0; k < n; ++k) control.yaw[k] = window.turbines[k].yaw_mean;

    SolveOptions opts;
    opts.apply_eta = apply_eta;
    const FarmSolution sol = solve_farm(layout, ambient, control, kappa, spec, opts);

    double acc = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (availability[k] == 0) continue;
        const double r = (window.turbines[k].power_mean - sol.turbines[k].power) * 1e-6;
        acc += r * r;
        ++used;
    }
    if (n_used != nullptr) *n_used = used;
    return used > 0 ? acc / used : 0.0;
}

double ridge_penalty(const WakeParams& kappa, double lambda) {
    double acc = 0.0;
    for (double v : kappa.as_array()) acc += v * v;
    return lambda * acc;
}

}  // namespace

CalibrationResult calibrate(const FarmLayout& layout, const AmbientState& ambient,
                            const MeasurementWindow& window, const std::vector<int>& availability,
                            const WakeParams& kappa_prev, const TurbineSpec& spec,
                            const CalibrationOptions& options) {
    const std::size_t n = layout.size();
    if (window.turbines.size() != n || availability.size() != n) {
        throw std::invalid_argument("calibrate: window/availability size mismatch");
    }

    CalibrationResult res;
    res.kappa = kappa_prev;

    // Nothing to learn when no available turbine is waked.
    ControlState ref = ControlState::zeros(n);
    ref.available = availability;
    const FarmSolution ref_sol = solve_farm(layout, ambient, ref, kappa_prev, spec);
    bool any_waked = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (availability[k] == 0) continue;
        if (1.0 - ref_sol.turbines[k].s_rotor / ambient.speed >= 1e-3) {
            any_waked = true;
            break;
        }
    }
    if (!any_waked) {
        res.degenerate = true;
        int used = 0;
        const double data = data_term_mw2(layout, ambient, window, availability, kappa_prev,
                                          spec, options.apply_eta, &used);
        res.objective_before = res.objective_after = data + ridge_penalty(kappa_prev, options.lambda);
        res.rms_before = res.rms_after = std::sqrt(data) * 1e6;
        return res;
    }

    const auto& lo = options.bounds.lower;
    const auto& hi = options.bounds.upper;
    auto to_unit = [&](const WakeParams& k) {
        const auto a = k.as_array();
        std::vector<double> u(4);
        for (std::size_t i = 0; i < 4; ++i) u[i] = (a[i] - lo[i]) / (hi[i] - lo[i]);
        return u;
    };
    auto from_unit = [&](const std::vector<double>& u) {
        std::array<double, 4> a{};
        for (std::size_t i = 0; i < 4; ++i) a[i] = lo[i] + u[i] * (hi[i] - lo[i]);
        return WakeParams::from_array(a);
    };

    auto objective = [&](const std::vector<double>& u) {
        const WakeParams k = from_unit(u);
        return data_term_mw2(layout, ambient, window, availability, k, spec, options.apply_eta) +
               ridge_penalty(k, options.lambda);
    };

    const std::vector<double> unit_lo(4, 0.0);
    const std::vector<double> unit_hi(4, 1.0);
    const auto fit = nelder_mead_minimize(objective, to_unit(kappa_prev), unit_lo, unit_hi,
                                          options.search);

    res.kappa = from_unit(fit.x);
    res.objective_before = objective(to_unit(kappa_prev));
    res.objective_after = fit.f;
    res.rms_before = std::sqrt(data_term_mw2(layout, ambient, window, availability, kappa_prev,
                                             spec, options.apply_eta)) *
                     1e6;
    res.rms_after = std::sqrt(data_term_mw2(layout, ambient, window, availability, res.kappa,
                                            spec, options.apply_eta)) *
                    1e6;
    if (res.objective_after > res.objective_before) {
        // Pattern search never accepts a worse point, so this only guards
        // round-off: fall back to the warm start.
        res.kappa = kappa_prev;
        res.objective_after = res.objective_before;
        res.rms_after = res.rms_before;
    }
    return res;
}

}  // namespace wfc
