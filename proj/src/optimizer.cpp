#include "wfc/optimizer.hpp"

#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "wfc/util.hpp"

namespace wfc {

YawObjective::YawObjective(const FarmLayout& layout, const AmbientState& ambient,
                           const WakeParams& kappa, const TurbineSpec& spec,
                           std::vector<int> availability, const FatigueLut* lut,
                           const YawOptimizerConfig& config)
    : layout_(&layout),
      ambient_(ambient),
      kappa_(kappa),
      spec_(&spec),
      availability_(std::move(availability)),
      lut_(lut),
      config_(config) {
    const std::size_t n = layout.size();
    if (availability_.size() != n) {
        throw std::invalid_argument("YawObjective: availability size mismatch");
    }
    const double w_sum = config_.weights.power + config_.weights.load;
    if (config_.weights.power < 0.0 || config_.weights.load < 0.0 ||
        std::fabs(w_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("YawObjective: weights must be non-negative and sum to 1");
    }
    if (config_.weights.load > 0.0 && lut_ == nullptr) {
        throw std::invalid_argument("YawObjective: load weight requires a fatigue table");
    }

    ControlState zero = ControlState::zeros(n);
    zero.available = availability_;
    SolveOptions opts;
    opts.apply_eta = config_.apply_eta;
    baseline_ = solve_farm(layout, ambient_, zero, kappa_, *spec_, opts);

    frozen_.resize(n);
    power_denominator_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        frozen_[k] = {baseline_.turbines[k].ct, baseline_.turbines[k].i_rotor};
        power_denominator_[k] = baseline_.turbines[k].power;
    }
}

GainBreakdown YawObjective::evaluate(const std::vector<double>& yaw) const {
    const std::size_t n = layout_->size();
    if (yaw.size() != n) throw std::invalid_argument("YawObjective: yaw size mismatch");

    ControlState control;
    control.yaw = yaw;
    control.pitch_offset.assign(n, 0.0);
    control.available = availability_;

    SolveOptions opts;
    opts.apply_eta = config_.apply_eta;
    opts.frozen = &frozen_;
    const FarmSolution sol = solve_farm(*layout_, ambient_, control, kappa_, *spec_, opts);

    GainBreakdown out;
    for (std::size_t k = 0; k < n; ++k) {
        if (availability_[k] == 0) continue;
        if (power_denominator_[k] <= 0.0) {
            ++out.excluded_power_terms;
            continue;
        }
        out.power_gain += sol.turbines[k].power / power_denominator_[k];
    }

    const bool want_load = config_.weights.load > 0.0 && lut_ != nullptr;
    if (want_load) {
        for (std::size_t k = 0; k < n; ++k) {
            if (availability_[k] == 0) continue;
            const DominantWake dw = dominant_wake_at(sol.field, k, layout_->positions[k],
                                                     spec_->hub_height, spec_->rotor_diameter);
            std::array<double, kLutAxisCount> at = {ambient_.speed,
                                                    sol.turbines[k].i_rotor,
                                                    yaw[k],
                                                    0.0,
                                                    dw.w_d,
                                                    dw.sigma_d,
                                                    dw.delta_c};
            const double num = lut_->interpolate(at).del[0];
            at[2] = 0.0;
            const double den = lut_->interpolate(at).del[0];
            out.load_gain += den > 0.0 ? num / den : 1.0;
        }
    }

    out.objective = -config_.weights.power * out.power_gain +
                    (want_load ? config_.weights.load * out.load_gain : 0.0);
    return out;
}

double power_gain(const YawObjective& objective, const std::vector<double>& yaw) {
    return objective.evaluate(yaw).power_gain;
}

double del_gain(const YawObjective& objective, const std::vector<double>& yaw) {
    return objective.evaluate(yaw).load_gain;
}

OptimizeResult optimize_yaw(const FarmLayout& layout, const AmbientState& ambient,
                            const WakeParams& kappa, const TurbineSpec& spec,
                            const std::vector<int>& availability, const FatigueLut* lut,
                            const YawOptimizerConfig& config, std::uint64_t seed) {
    const std::size_t n = layout.size();
    YawObjective objective(layout, ambient, kappa, spec, availability, lut, config);

    std::vector<std::size_t> free_dims;
    for (std::size_t k = 0; k < n; ++k) {
        if (availability[k] == 1) free_dims.push_back(k);
    }

    OptimizeResult result;
    result.yaw.assign(n, 0.0);
    if (free_dims.empty()) {
        result.gains = objective.evaluate(result.yaw);
        return result;
    }

    const std::size_t m = free_dims.size();
    const std::vector<double> lo(m, -config.yaw_bound);
    const std::vector<double> hi(m, config.yaw_bound);

    auto expand = [&](const std::vector<double>& packed) {
        std::vector<double> full(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) full[free_dims[i]] = packed[i];
        return full;
    };
    auto packed_objective = [&](const std::vector<double>& packed) {
        return objective.evaluate(expand(packed)).objective;
    };

    const int starts = std::max(1, config.starts);
    auto run_start = [&](int s) {
        std::vector<double> x0(m, 0.0);
        if (s > 0) {
            std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
            std::uniform_real_distribution<double> u(-config.yaw_bound, config.yaw_bound);
            for (auto& v : x0) v = u(rng);
        }
        return pattern_search_minimize(packed_objective, std::move(x0), lo, hi, config.search);
    };

    std::vector<PatternSearchResult> outcomes(static_cast<std::size_t>(starts));
    if (config.parallel_starts && starts > 1) {
        std::vector<std::future<PatternSearchResult>> futures;
        futures.reserve(static_cast<std::size_t>(starts));
        for (int s = 0; s < starts; ++s) {
            futures.push_back(std::async(std::launch::async, run_start, s));
        }
        for (int s = 0; s < starts; ++s) outcomes[static_cast<std::size_t>(s)] = futures[static_cast<std::size_t>(s)].get();
    } else {
        for (int s = 0; s < starts; ++s) outcomes[static_cast<std::size_t>(s)] = run_start(s);
    }

    int best = 0;
    for (int s = 1; s < starts; ++s) {
        if (outcomes[static_cast<std::size_t>(s)].f < outcomes[static_cast<std::size_t>(best)].f) best = s;
    }
    for (const auto& o : outcomes) result.evaluations += o.evals;
    result.winning_start = best;
    result.yaw = expand(outcomes[static_cast<std::size_t>(best)].x);
    result.gains = objective.evaluate(result.yaw);
    return result;
}

}  // namespace wfc
