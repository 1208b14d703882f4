#include "wfc/surrogate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wfc/rainflow.hpp"
#include "wfc/util.hpp"

namespace wfc {

double inflow_wake_speed(const InflowWakeSpec& w, double y, double z) {
    if (w.w_d == 0.0) return w.u_inf;
    const double s = w.diameter * w.sigma_d;
    const double dy = y - w.delta_c * w.diameter;
    const double dz = z - w.hub_height;
    const double shape = std::exp(-2.0 * dy * dy / (s * s)) * std::exp(-2.0 * dz * dz / (s * s));
    return w.u_inf * (1.0 - w.w_d * shape);
}

namespace {

// Load model constants [kN*m scale]. Calibrated once against the trend
// targets (TI-linearity, yaw bathtub, wake-offset bathtub, width
// insensitivity) and then frozen.
constexpr double kOopGain = 45.0;      // out-of-plane moment per unit U_n*V_t
constexpr double kYaw1pGain = 120.0;   // once-per-rev skew loading per unit u_inf^2
constexpr double kGravAmp = 10500.0;   // in-plane gravity amplitude
constexpr double kIpAeroGain = 7.0;    // in-plane aero share
constexpr double kFaGain = 1470.0;     // tower fore-aft per unit U_d^2
constexpr double kSsGain = 400.0;      // tower side-side per unit U_d^2
constexpr double kPitchSlope = 0.03;   // mean-load scaling per degree of pitch offset
constexpr double kTipSpeedRatio = 7.5;
constexpr double kOmegaMin = 0.628;    // [rad/s]
constexpr double kOmegaMax = 1.005;    // [rad/s]
constexpr double kDiscTurbShare = 0.8; // rotor-coherent share of point turbulence

std::uint64_t case_seed(const SurrogateInputs& in, double duration_s, double sample_rate_hz,
                        std::uint64_t seed) {
    Fnv1a64 h;
    auto a = in.as_array();
    a[2] = std::fabs(a[2]);  // mirrored yaw shares the realization: loads use |sin|
    h.update(std::span<const double>(a.data(), a.size()));
    const double d[2] = {duration_s, sample_rate_hz};
    h.update(std::span<const double>(d, 2));
    return mix_seed(h.digest(), seed);
}

}  // namespace

LoadCase surrogate_load_case(const SurrogateInputs& in, const TurbineSpec& spec,
                             std::uint64_t seed, double duration_s, double sample_rate_hz) {
    if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("surrogate_load_case: duration and rate must be positive");
    }
    if (!(in.wind_speed > 0.0) || !(in.ti >= 0.0) || !(in.w_d >= 0.0) || in.w_d >= 1.0 ||
        !(in.sigma_d > 0.0)) {
        throw std::invalid_argument("surrogate_load_case: inputs outside the physical range");
    }
    const double dt = 1.0 / sample_rate_hz;
    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz)) + 1;

    const double radius = spec.radius();
    const double r_e = 0.7 * radius;  // representative blade element
    const double omega =
        std::clamp(kTipSpeedRatio * in.wind_speed / radius, kOmegaMin, kOmegaMax);
    const double gamma = deg2rad(in.yaw);
    const double cos_g = std::cos(gamma);
    const double sin_g = std::fabs(std::sin(gamma));  // fatigue is symmetric in yaw sign
    const double pitch_f = 1.0 + kPitchSlope * in.pitch;

    InflowWakeSpec wake;
    wake.u_inf = in.wind_speed;
    wake.w_d = in.w_d;
    wake.sigma_d = in.sigma_d;
    wake.delta_c = in.delta_c;
    wake.diameter = spec.rotor_diameter;
    wake.hub_height = spec.hub_height;

    // Steady disc-averaged inflow for the tower channels: hub plus a ring of
    // eight samples at the blade-element radius.
    double u_disc = inflow_wake_speed(wake, 0.0, spec.hub_height);
    for (int k = 0; k < 8; ++k) {
        const double a = deg2rad(45.0 * k);
        u_disc += inflow_wake_speed(wake, r_e * std::sin(a), spec.hub_height + r_e * std::cos(a));
    }
    u_disc /= 9.0;

    // Coherent longitudinal turbulence: OU process with std ti * u_inf.
    const double sigma_u = in.ti * in.wind_speed;
    const double tau_u = 8.0;
    const double rho_step = std::exp(-dt / tau_u);
    const double innovation = sigma_u * std::sqrt(1.0 - rho_step * rho_step);
    NormalSampler normal(case_seed(in, duration_s, sample_rate_hz, seed));
    double u_turb = sigma_u * normal();

    LoadCase out;
    out.dt = dt;
    for (auto& ch : out.channels) ch.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double psi = omega * t;
        const double sin_psi = std::sin(psi);
        const double cos_psi = std::cos(psi);

        const double y_e = r_e * sin_psi;
        const double z_e = spec.hub_height + r_e * cos_psi;
        const double u_elem = inflow_wake_speed(wake, y_e, z_e) + u_turb;

        const double u_n = u_elem * cos_g;
        const double v_t = omega * r_e + u_elem * sin_g * cos_psi;
        const double q = u_n * v_t;

        out.channels[0][k] =
            pitch_f * (kOopGain * q +
                       kYaw1pGain * in.wind_speed * in.wind_speed * sin_g * cos_psi);
        out.channels[1][k] = kGravAmp * sin_psi + pitch_f * kIpAeroGain * q;

        const double u_d = u_disc + kDiscTurbShare * u_turb;
        out.channels[2][k] = pitch_f * kFaGain * u_d * u_d * cos_g * cos_g;
        out.channels[3][k] = pitch_f * kSsGain * u_d * u_d * (0.25 + 0.5 * sin_g);

        u_turb = rho_step * u_turb + innovation * normal();
    }
    return out;
}

SurrogateCaseResult evaluate_surrogate_case(const SurrogateInputs& in, const TurbineSpec& spec,
                                            int n_seeds, const LutBuildMeta& meta) {
    if (n_seeds < 1) throw std::invalid_argument("evaluate_surrogate_case: need >= 1 seed");
    SurrogateCaseResult acc;
    for (int s = 0; s < n_seeds; ++s) {
        const std::uint64_t seed = mix_seed(meta.base_seed, static_cast<std::uint64_t>(s));
        const LoadCase lc =
            surrogate_load_case(in, spec, seed, meta.duration_s, meta.sample_rate_hz);
        for (std::size_t c = 0; c < kLutChannelCount; ++c) {
            const auto& series = lc.channels[c];
            const double m = c < 2 ? spec.wohler_blade : spec.wohler_tower;
            const auto cycles = rainflow(series);
            acc.del[c] += damage_equivalent_load(cycles, m, meta.duration_s, meta.f_eq_hz);
            double mean = 0.0;
            for (double v : series) mean += v;
            acc.mean[c] += mean / static_cast<double>(series.size());
        }
    }
    for (std::size_t c = 0; c < kLutChannelCount; ++c) {
        acc.del[c] /= n_seeds;
        acc.mean[c] /= n_seeds;
    }
    return acc;
}

int seed_count(double ti, const SeedSchedule& schedule, double duration_s) {
    if (!(ti >= 0.0)) throw std::invalid_argument("seed_count: negative TI");
    if (!(duration_s > 0.0)) throw std::invalid_argument("seed_count: duration must be positive");
    const double raw =
        ti * ti * 2.0 * schedule.tau_s / (schedule.epsilon * schedule.epsilon * duration_s);
    int n = std::max(1, static_cast<int>(std::ceil(raw)));
    for (const auto& [sched_ti, sched_n] : schedule.table) {
        if (std::fabs(ti - sched_ti) < 1e-9) n = std::max(n, sched_n);
    }
    return n;
}

namespace {

struct NodeTask {
    std::array<std::size_t, kLutAxisCount> idx;
    SurrogateInputs inputs;
    int seeds = 0;
};

}  // namespace

LutBuildPlan LutBuildPlan::make(const LutAxes& axes, const LutBuildMeta& meta) {
    axes.validate();
    LutBuildPlan plan;
    plan.nodes_total = axes.node_count();

    std::size_t base = 1;  // speed x TI x yaw x pitch combinations
    for (std::size_t i = 0; i < 4; ++i) base *= axes.values[i].size();
    const std::size_t wake_combos = axes.values[5].size() * axes.values[6].size();

    std::size_t zero_wd = 0;
    std::size_t nonzero_wd = 0;
    for (double wd : axes.values[4]) (wd == 0.0 ? zero_wd : nonzero_wd) += 1;
    plan.nodes_wake_free = base * zero_wd;
    plan.nodes_distinct = base * (zero_wd > 0 ? 1 : 0) + base * nonzero_wd * wake_combos;

    std::size_t per_ti = plan.nodes_distinct / axes.values[1].size();
    plan.series_total = 0;
    for (double ti : axes.values[1]) {
        plan.series_total +=
            per_ti * static_cast<std::size_t>(seed_count(ti, meta.seeds, meta.duration_s));
    }
    return plan;
}

FatigueLut build_lut(const LutAxes& axes, const TurbineSpec& spec, const LutBuildMeta& meta,
                     int workers, const std::function<void(std::size_t, std::size_t)>& progress) {
    axes.validate();
    spec.validate();
    if (workers < 1) workers = 1;

    // Enumerate distinct nodes: W_d = 0 nodes are computed once per
    // (speed, TI, yaw, pitch) at the first wake-shape combination.
    std::vector<NodeTask> tasks;
    std::array<std::size_t, kLutAxisCount> idx{};
    const std::size_t total = axes.node_count();
    for (std::size_t flat = 0; flat < total; ++flat) {
        const bool wake_free = axes.values[4][idx[4]] == 0.0;
        const bool canonical = !wake_free || (idx[5] == 0 && idx[6] == 0);
        if (canonical) {
            NodeTask task;
            task.idx = idx;
            task.inputs.wind_speed = axes.values[0][idx[0]];
            task.inputs.ti = axes.values[1][idx[1]];
            task.inputs.yaw = axes.values[2][idx[2]];
            task.inputs.pitch = axes.values[3][idx[3]];
            task.inputs.w_d = axes.values[4][idx[4]];
            task.inputs.sigma_d = axes.values[5][idx[5]];
            task.inputs.delta_c = axes.values[6][idx[6]];
            task.seeds = seed_count(task.inputs.ti, meta.seeds, meta.duration_s);
            tasks.push_back(task);
        }
        for (std::size_t i = kLutAxisCount; i-- > 0;) {
            if (++idx[i] < axes.values[i].size()) break;
            idx[i] = 0;
        }
    }

    std::vector<double> values(total * kLutValuesPerNode, 0.0);
    FatigueLut shape(axes, std::vector<double>(total * kLutValuesPerNode, 0.0), meta);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    auto worker_fn = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) return;
            const NodeTask& task = tasks[k];
            const SurrogateCaseResult res =
                evaluate_surrogate_case(task.inputs, spec, task.seeds, meta);
            const std::size_t base = shape.flat_index(task.idx) * kLutValuesPerNode;
            for (std::size_t c = 0; c < kLutChannelCount; ++c) {
                values[base + c] = res.del[c];
                values[base + kLutChannelCount + c] = res.mean[c];
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) progress(d, tasks.size());
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
        for (auto& t : pool) t.join();
    }

    // Replicate the canonical wake-free values across the degenerate
    // (sigma_d, delta_c) combinations.
    idx = {};
    for (std::size_t flat = 0; flat < total; ++flat) {
        const bool wake_free = axes.values[4][idx[4]] == 0.0;
        if (wake_free && !(idx[5] == 0 && idx[6] == 0)) {
            auto src_idx = idx;
            src_idx[5] = 0;
            src_idx[6] = 0;
            const std::size_t src = shape.flat_index(src_idx) * kLutValuesPerNode;
            const std::size_t dst = flat * kLutValuesPerNode;
            for (std::size_t v = 0; v < kLutValuesPerNode; ++v) values[dst + v] = values[src + v];
        }
        for (std::size_t i = kLutAxisCount; i-- > 0;) {
            if (++idx[i] < axes.values[i].size()) break;
            idx[i] = 0;
        }
    }

    return FatigueLut(axes, std::move(values), meta);
}

}  // namespace wfc
