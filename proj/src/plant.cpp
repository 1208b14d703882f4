#include "wfc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace wfc {

void PlantConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("PlantConfig: dt must be positive");
    if (noise_std < 0.0) throw std::invalid_argument("PlantConfig: noise std must be >= 0");
    if (spin_up_s < 0.0) throw std::invalid_argument("PlantConfig: spin-up must be >= 0");
    if (noise_std > 0.0 && !(noise_tau_s > 0.0)) {
        throw std::invalid_argument("PlantConfig: noise correlation time must be positive");
    }
    if (yaw_deadband_deg < 0.0) throw std::invalid_argument("PlantConfig: deadband must be >= 0");
    for (const auto& o : outages) {
        if (!(o.t_end > o.t_start)) throw std::invalid_argument("PlantConfig: empty outage");
    }
}

Plant::Plant(FarmLayout layout, AmbientState ambient, TurbineSpec spec, PlantConfig config,
             std::uint64_t seed)
    : layout_(std::move(layout)),
      ambient_(std::move(ambient)),
      spec_(std::move(spec)),
      config_(std::move(config)),
      normal_(seed) {
    config_.validate();
    const std::size_t n = layout_.size();
    for (const auto& o : config_.outages) {
        if (o.turbine >= n) throw std::invalid_argument("PlantConfig: outage turbine out of range");
    }
    yaw_.assign(n, 0.0);
    target_.assign(n, 0.0);
    available_.assign(n, 1);
    noise_.assign(n, 0.0);
    noise_rho_ = config_.noise_std > 0.0 ? std::exp(-config_.dt / config_.noise_tau_s) : 0.0;
    refresh_availability();
}

void Plant::set_targets(std::span<const double> targets) {
    if (targets.size() != target_.size()) {
        throw std::invalid_argument("Plant: target vector size mismatch");
    }
    std::copy(targets.begin(), targets.end(), target_.begin());
}

void Plant::refresh_availability() {
    std::vector<int> now(layout_.size(), 1);
    for (const auto& o : config_.outages) {
        if (clock_ >= o.t_start && clock_ < o.t_end) now[o.turbine] = 0;
    }
    if (now != available_) {
        available_ = std::move(now);
        truth_dirty_ = true;
    }
}

void Plant::actuate() {
    const double max_move = spec_.yaw_rate_limit * config_.dt;
    for (std::size_t k = 0; k < yaw_.size(); ++k) {
        if (available_[k] == 0) continue;  // parked turbines hold yaw
        const double diff = target_[k] - yaw_[k];
        if (std::abs(diff) <= config_.yaw_deadband_deg) continue;
        const double move = std::min(max_move, std::abs(diff));
        yaw_[k] += diff > 0.0 ? move : -move;
        truth_dirty_ = true;
    }
}

const FarmSolution& Plant::truth() {
    if (truth_dirty_) {
        ControlState control;
        control.yaw = yaw_;
        control.pitch_offset.assign(yaw_.size(), 0.0);
        control.available = available_;
        SolveOptions opts;
        opts.apply_eta = config_.apply_eta;
        opts.deficit_exponent = config_.deficit_exponent;
        truth_ = solve_farm(layout_, ambient_, control, config_.kappa_true, spec_, opts);
        truth_dirty_ = false;
    }
    return truth_;
}

PlantSample Plant::step() {
    refresh_availability();
    actuate();
    const FarmSolution& sol = truth();

    PlantSample sample;
    sample.t = clock_;
    sample.yaw = yaw_;
    sample.available = available_;
    sample.power.resize(yaw_.size());
    for (std::size_t k = 0; k < yaw_.size(); ++k) {
        double factor = 1.0;
        if (config_.noise_std > 0.0) {
            noise_[k] = noise_rho_ * noise_[k] +
                        std::sqrt(1.0 - noise_rho_ * noise_rho_) * normal_();
            factor += config_.noise_std * noise_[k];
        }
        sample.power[k] = available_[k] == 1 ? sol.turbines[k].power * factor : 0.0;
    }
    clock_ += config_.dt;
    return sample;
}

MeasurementWindow averaged_window(std::span<const PlantSample> history, double t_start,
                                  double t_end) {
    if (!(t_end > t_start)) throw std::invalid_argument("averaged_window: empty interval");
    const double eps = 1e-9;
    std::size_t n = 0;
    std::size_t steps = 0;
    std::vector<double> power_sum, yaw_on_sum, yaw_all_sum;
    std::vector<std::size_t> on_steps;
    for (const auto& s : history) {
        if (s.t < t_start - eps || s.t >= t_end - eps) continue;
        if (steps == 0) {
            n = s.power.size();
            power_sum.assign(n, 0.0);
            yaw_on_sum.assign(n, 0.0);
            yaw_all_sum.assign(n, 0.0);
            on_steps.assign(n, 0);
        }
        for (std::size_t k = 0; k < n; ++k) {
            yaw_all_sum[k] += s.yaw[k];
            if (s.available[k] == 1) {
                power_sum[k] += s.power[k];
                yaw_on_sum[k] += s.yaw[k];
                ++on_steps[k];
            }
        }
        ++steps;
    }
    if (steps == 0) throw std::runtime_error("averaged_window: no samples cover the window");

    MeasurementWindow window;
    window.t_start = t_start;
    window.t_end = t_end;
    window.turbines.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto& t = window.turbines[k];
        t.completeness = static_cast<double>(on_steps[k]) / static_cast<double>(steps);
        if (on_steps[k] > 0) {
            t.power_mean = power_sum[k] / static_cast<double>(on_steps[k]);
            t.yaw_mean = yaw_on_sum[k] / static_cast<double>(on_steps[k]);
        } else {
            t.power_mean = 0.0;
            t.yaw_mean = yaw_all_sum[k] / static_cast<double>(steps);
        }
    }
    return window;
}

std::vector<int> availability_flags(const MeasurementWindow& window, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("availability_flags: threshold must be in (0,1)");
    }
    std::vector<int> flags(window.turbines.size(), 1);
    for (std::size_t k = 0; k < flags.size(); ++k) {
        if (window.turbines[k].completeness < 1.0 - threshold) flags[k] = 0;
    }
    return flags;
}

}  // namespace wfc
