#include "wfc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wfc {

namespace {

using nlohmann::json;

// Fixed seed for the open-loop table: the table is a property of the
// scenario, shared by every run against it.
constexpr std::uint64_t kOpenLoopTableSeed = 7;

double invert_power(double p_obs, const TurbineSpec& spec, double rho, bool apply_eta) {
    auto f = [&](double u) {
        const double d = turbine_power(u, 0.0, spec, rho, apply_eta) - p_obs;
        return d * d;
    };
    return golden_section_min(f, spec.cut_in, spec.cut_out, 1e-3);
}

// Truth-side fatigue bookkeeping for one window: LUT query per turbine at
// the window-mean state, damage-weighted by data completeness.
std::vector<std::array<double, kLutChannelCount>> tally_window_del(
    const Scenario& sc, const MeasurementWindow& window, const FatigueLut& lut) {
    const std::size_t n = sc.layout.size();
    ControlState control;
    control.yaw.resize(n);
    control.pitch_offset.assign(n, 0.0);
    control.available.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        control.yaw[k] = window.turbines[k].yaw_mean;
        control.available[k] = window.turbines[k].completeness >= 0.5 ? 1 : 0;
    }
    SolveOptions opts;
    opts.apply_eta = sc.plant.apply_eta;
    opts.deficit_exponent = sc.plant.deficit_exponent;
    const FarmSolution sol =
        solve_farm(sc.layout, sc.ambient, control, sc.plant.kappa_true, sc.turbine, opts);

    std::vector<std::array<double, kLutChannelCount>> del(n);
    for (std::size_t k = 0; k < n; ++k) {
        del[k].fill(0.0);
        const double weight = window.turbines[k].completeness;
        if (weight <= 0.0) continue;
        const DominantWake wake = dominant_wake_at(sol.field, k, sc.layout.positions[k],
                                                   sc.turbine.hub_height,
                                                   sc.turbine.rotor_diameter);
        const LutQueryResult q = lut.interpolate({sc.ambient.speed, sol.turbines[k].i_rotor,
                                                  window.turbines[k].yaw_mean, 0.0, wake.w_d,
                                                  wake.sigma_d, wake.delta_c});
        for (std::size_t c = 0; c < kLutChannelCount; ++c) del[k][c] = q.del[c];
    }
    return del;
}

json kappa_to_json(const WakeParams& k) {
    return json{{"k_a", k.k_a}, {"k_b", k.k_b}, {"alpha", k.alpha}, {"beta", k.beta}};
}

WakeParams kappa_from_json(const json& j) {
    return {j.at("k_a").get<double>(), j.at("k_b").get<double>(), j.at("alpha").get<double>(),
            j.at("beta").get<double>()};
}

}  // namespace

std::string to_string(ControlMode mode) {
    switch (mode) {
        case ControlMode::greedy: return "greedy";
        case ControlMode::open_loop: return "ol";
        case ControlMode::closed_loop: return "cl";
    }
    throw std::invalid_argument("unknown control mode");
}

ControlMode control_mode_from_string(const std::string& name) {
    if (name == "greedy") return ControlMode::greedy;
    if (name == "ol" || name == "open-loop") return ControlMode::open_loop;
    if (name == "cl" || name == "closed-loop") return ControlMode::closed_loop;
    throw std::invalid_argument("unknown control mode: " + name);
}

void Scenario::validate() const {
    turbine.validate();
    layout.validate(turbine.rotor_diameter);
    plant.validate();
    if (!(duration_s > 0.0)) throw std::invalid_argument("Scenario: duration must be positive");
    if (!(ambient.speed > 0.0)) throw std::invalid_argument("Scenario: ambient speed must be positive");
    if (ambient.ti < 0.0) throw std::invalid_argument("Scenario: ambient TI must be >= 0");
}

std::vector<double> RunReport::window_powers() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.farm_power_mean);
    return out;
}

RunReport run_scenario(const Scenario& scenario, const LoopConfig& config, const FatigueLut* lut,
                       std::uint64_t seed) {
    scenario.validate();
    if (!(config.t_s > 0.0)) throw std::invalid_argument("LoopConfig: t_s must be positive");
    const double windows_exact = scenario.duration_s / config.t_s;
    const auto n_windows = static_cast<std::size_t>(std::llround(windows_exact));
    if (n_windows == 0 || std::abs(windows_exact - static_cast<double>(n_windows)) > 1e-9) {
        throw std::invalid_argument("LoopConfig: t_s must divide the scenario duration");
    }
    const double steps_exact = config.t_s / scenario.plant.dt;
    const auto steps_per_window = static_cast<std::size_t>(std::llround(steps_exact));
    if (steps_per_window == 0 ||
        std::abs(steps_exact - static_cast<double>(steps_per_window)) > 1e-9) {
        throw std::invalid_argument("LoopConfig: plant dt must divide t_s");
    }
    if (config.optimizer.weights.load > 0.0 && (lut == nullptr || lut->empty())) {
        throw std::invalid_argument("run_scenario: load weight requires a fatigue table");
    }

    const std::size_t n = scenario.layout.size();
    // The controller and the plant see the same drivetrain efficiency model.
    YawOptimizerConfig opt_config = config.optimizer;
    opt_config.apply_eta = scenario.plant.apply_eta;

    Plant plant(scenario.layout, scenario.ambient, scenario.turbine, scenario.plant, seed);

    const double first_control = std::max(scenario.plant.spin_up_s, config.t_s);

    // Open-loop set points come from one offline optimization with the
    // controller's uncalibrated parameters and full availability.
    std::vector<double> ol_table;
    if (config.mode == ControlMode::open_loop) {
        ol_table = optimize_yaw(scenario.layout, scenario.ambient, scenario.controller_kappa,
                                scenario.turbine, std::vector<int>(n, 1), lut, opt_config,
                                kOpenLoopTableSeed)
                       .yaw;
    }

    RunReport report;
    report.scenario_name = scenario.name;
    report.mode = to_string(config.mode);
    report.seed = seed;
    report.t_s = config.t_s;
    report.duration_s = scenario.duration_s;
    report.weights = config.optimizer.weights;
    report.turbine_del.assign(n, {});

    WakeParams kappa = scenario.controller_kappa;
    std::vector<double> targets(n, 0.0);
    double u_prev = 0.0;
    bool have_estimate = false;
    bool ol_dispatched = false;

    std::vector<std::array<double, kLutChannelCount>> damage_sum(
        n, std::array<double, kLutChannelCount>{});
    std::vector<PlantSample> samples;
    samples.reserve(steps_per_window);

    for (std::size_t w = 0; w < n_windows; ++w) {
        const double t0 = static_cast<double>(w) * config.t_s;
        const double t1 = t0 + config.t_s;

        samples.clear();
        double farm_power_sum = 0.0;
        for (std::size_t s = 0; s < steps_per_window; ++s) {
            PlantSample sample = plant.step();
            for (double p : sample.power) farm_power_sum += p;
            samples.push_back(std::move(sample));
        }

        LoopRecord record;
        record.window = w;
        record.t_start = t0;
        record.t_end = t1;
        record.farm_power_mean = farm_power_sum / static_cast<double>(steps_per_window);
        MeasurementWindow window = averaged_window(samples, t0, t1);
        record.turbines = window.turbines;
        record.availability.assign(n, 1);
        record.kappa = kappa;

        report.energy_j += record.farm_power_mean * config.t_s;

        if (lut != nullptr && !lut->empty()) {
            record.window_del = tally_window_del(scenario, window, *lut);
            for (std::size_t k = 0; k < n; ++k) {
                const double weight = window.turbines[k].completeness;
                for (std::size_t c = 0; c < kLutChannelCount; ++c) {
                    const double m =
                        c < 2 ? scenario.turbine.wohler_blade : scenario.turbine.wohler_tower;
                    damage_sum[k][c] += weight * std::pow(record.window_del[k][c], m);
                }
            }
        }

        const bool control_due = t1 >= first_control - 1e-9 && t1 < scenario.duration_s - 1e-9;
        if (control_due) {
            switch (config.mode) {
                case ControlMode::greedy:
                    record.dispatched = true;  // greedy holds gamma = 0
                    break;
                case ControlMode::open_loop:
                    if (!ol_dispatched) {
                        targets = ol_table;
                        plant.set_targets(targets);
                        ol_dispatched = true;
                        record.dispatched = true;
                    }
                    break;
                case ControlMode::closed_loop:
                    try {
                        record.availability =
                            availability_flags(window, config.availability_threshold);
                        if (!have_estimate) {
                            double p_max = 0.0;
                            for (std::size_t k = 0; k < n; ++k) {
                                if (record.availability[k] == 1) {
                                    p_max = std::max(p_max, window.turbines[k].power_mean);
                                }
                            }
                            u_prev = invert_power(p_max, scenario.turbine, scenario.ambient.rho,
                                                  scenario.plant.apply_eta);
                            have_estimate = true;
                        }
                        AmbientState est_ambient = scenario.ambient;
                        est_ambient.speed = u_prev;
                        const auto upstream = upstream_set(scenario.layout, est_ambient, kappa,
                                                           scenario.turbine, record.availability);
                        const EstimateResult est = estimate_background(
                            window, upstream, scenario.turbine, scenario.ambient.rho,
                            scenario.plant.apply_eta, config.estimate_tol);
                        u_prev = est.u_b;
                        est_ambient.speed = est.u_b;
                        record.estimated = true;
                        record.u_b = est.u_b;
                        record.estimate_rms = est.rms;

                        CalibrationOptions cal_options;
                        cal_options.lambda = config.lambda;
                        cal_options.apply_eta = scenario.plant.apply_eta;
                        const CalibrationResult cal =
                            calibrate(scenario.layout, est_ambient, window, record.availability,
                                      kappa, scenario.turbine, cal_options);
                        kappa = cal.kappa;
                        record.calibrated = !cal.degenerate;
                        record.kappa = kappa;

                        const OptimizeResult opt = optimize_yaw(
                            scenario.layout, est_ambient, kappa, scenario.turbine,
                            record.availability, lut, opt_config, mix_seed(seed, w + 1));
                        targets = opt.yaw;
                        plant.set_targets(targets);
                        record.dispatched = true;
                        record.objective = opt.gains.objective;
                    } catch (const std::exception& e) {
                        // Fail safe: log and keep the previous set points.
                        record.error = e.what();
                    }
                    break;
            }
        }
        record.targets = targets;
        report.records.push_back(std::move(record));
    }

    if (lut != nullptr && !lut->empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t c = 0; c < kLutChannelCount; ++c) {
                const double m =
                    c < 2 ? scenario.turbine.wohler_blade : scenario.turbine.wohler_tower;
                report.turbine_del[k][c] =
                    std::pow(damage_sum[k][c] / static_cast<double>(n_windows), 1.0 / m);
                report.farm_del[c] += report.turbine_del[k][c];
            }
        }
    }
    report.final_kappa = kappa;
    return report;
}

std::string report_to_json(const RunReport& report) {
    json j;
    j["scenario"] = report.scenario_name;
    j["mode"] = report.mode;
    j["seed"] = report.seed;
    j["t_s"] = report.t_s;
    j["duration_s"] = report.duration_s;
    j["weights"] = {{"power", report.weights.power}, {"load", report.weights.load}};
    j["energy_j"] = report.energy_j;
    j["farm_del"] = report.farm_del;
    j["turbine_del"] = report.turbine_del;
    j["final_kappa"] = kappa_to_json(report.final_kappa);

    json records = json::array();
    for (const auto& r : report.records) {
        json jr;
        jr["window"] = r.window;
        jr["t_start"] = r.t_start;
        jr["t_end"] = r.t_end;
        jr["farm_power_mean_w"] = r.farm_power_mean;
        json turbines = json::array();
        for (const auto& t : r.turbines) {
            turbines.push_back({{"power_mean_w", t.power_mean},
                                {"yaw_mean_deg", t.yaw_mean},
                                {"completeness", t.completeness}});
        }
        jr["turbines"] = turbines;
        jr["availability"] = r.availability;
        jr["dispatched"] = r.dispatched;
        jr["targets_deg"] = r.targets;
        jr["estimated"] = r.estimated;
        jr["u_b_ms"] = r.u_b;
        jr["estimate_rms_w"] = r.estimate_rms;
        jr["calibrated"] = r.calibrated;
        jr["kappa"] = kappa_to_json(r.kappa);
        jr["objective"] = r.objective;
        jr["window_del"] = r.window_del;
        jr["error"] = r.error;
        records.push_back(std::move(jr));
    }
    j["windows"] = std::move(records);
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunReport report;
    report.scenario_name = j.at("scenario").get<std::string>();
    report.mode = j.at("mode").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.t_s = j.at("t_s").get<double>();
    report.duration_s = j.at("duration_s").get<double>();
    report.weights.power = j.at("weights").at("power").get<double>();
    report.weights.load = j.at("weights").at("load").get<double>();
    report.energy_j = j.at("energy_j").get<double>();
    report.farm_del = j.at("farm_del").get<std::array<double, kLutChannelCount>>();
    report.turbine_del =
        j.at("turbine_del").get<std::vector<std::array<double, kLutChannelCount>>>();
    report.final_kappa = kappa_from_json(j.at("final_kappa"));
    for (const auto& jr : j.at("windows")) {
        LoopRecord r;
        r.window = jr.at("window").get<std::size_t>();
        r.t_start = jr.at("t_start").get<double>();
        r.t_end = jr.at("t_end").get<double>();
        r.farm_power_mean = jr.at("farm_power_mean_w").get<double>();
        for (const auto& jt : jr.at("turbines")) {
            TurbineWindow t;
            t.power_mean = jt.at("power_mean_w").get<double>();
            t.yaw_mean = jt.at("yaw_mean_deg").get<double>();
            t.completeness = jt.at("completeness").get<double>();
            r.turbines.push_back(t);
        }
        r.availability = jr.at("availability").get<std::vector<int>>();
        r.dispatched = jr.at("dispatched").get<bool>();
        r.targets = jr.at("targets_deg").get<std::vector<double>>();
        r.estimated = jr.at("estimated").get<bool>();
        r.u_b = jr.at("u_b_ms").get<double>();
        r.estimate_rms = jr.at("estimate_rms_w").get<double>();
        r.calibrated = jr.at("calibrated").get<bool>();
        r.kappa = kappa_from_json(jr.at("kappa"));
        r.objective = jr.at("objective").get<double>();
        r.window_del =
            jr.at("window_del").get<std::vector<std::array<double, kLutChannelCount>>>();
        r.error = jr.at("error").get<std::string>();
        report.records.push_back(std::move(r));
    }
    return report;
}

std::string report_hash(const RunReport& report) {
    Fnv1a64 hash;
    hash.update(report_to_json(report));
    return hash.hex();
}

void write_report(const RunReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string text = report_to_json(report);
    {
        std::ofstream out(fs::path(dir) / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("write_report: cannot open report.json");
        out << text;
    }
    std::ofstream csv(fs::path(dir) / "windows.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("write_report: cannot open windows.csv");
    csv << "window,t_start_s,t_end_s,farm_power_mean_w,u_b_ms,k_a,k_b,alpha,beta";
    const std::size_t n = report.records.empty() ? 0 : report.records.front().turbines.size();
    for (std::size_t k = 0; k < n; ++k) {
        csv << ",power_" << k << "_w,yaw_" << k << "_deg,target_" << k << "_deg,completeness_"
            << k;
    }
    csv << "\n";
    std::ostringstream row;
    row.precision(17);
    for (const auto& r : report.records) {
        row.str("");
        row << r.window << "," << r.t_start << "," << r.t_end << "," << r.farm_power_mean << ","
            << r.u_b << "," << r.kappa.k_a << "," << r.kappa.k_b << "," << r.kappa.alpha << ","
            << r.kappa.beta;
        for (std::size_t k = 0; k < n; ++k) {
            row << "," << r.turbines[k].power_mean << "," << r.turbines[k].yaw_mean << ","
                << r.targets[k] << "," << r.turbines[k].completeness;
        }
        csv << row.str() << "\n";
    }
}

RunReport load_report(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path path(dir);
    if (fs::is_directory(path)) path /= "report.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_report: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return report_from_json(buf.str());
}

GainSummary report_gains(const RunReport& a, const RunReport& b, std::size_t block_length,
                         std::size_t resamples, double level, std::uint64_t seed) {
    if (a.records.size() != b.records.size() ||
        std::abs(a.duration_s - b.duration_s) > 1e-9) {
        throw std::invalid_argument("report_gains: runs cover different horizons");
    }
    const std::vector<double> pa = a.window_powers();
    const std::vector<double> pb = b.window_powers();
    const std::size_t n = pa.size();
    if (n < 2) throw std::invalid_argument("report_gains: need at least two windows");

    GainSummary summary;
    summary.windows = n;
    summary.energy_gain = (a.energy_j - b.energy_j) / b.energy_j;
    if (b.farm_del[0] > 0.0) {
        summary.del_gain = (a.farm_del[0] - b.farm_del[0]) / b.farm_del[0];
    }

    bool identical = pa == pb;
    if (!identical) {
        const WelchResult welch = welch_t_test(pa, pb);
        summary.welch_t = welch.t;
        summary.welch_dof = welch.dof;
        summary.welch_p = welch.p;
    }

    // Paired moving-block bootstrap of the relative mean-power gain: the
    // same window indices are drawn for both runs.
    const std::size_t block = std::min(block_length == 0 ? 1 : block_length, n / 2);
    const std::size_t n_starts = n - block + 1;
    const std::size_t blocks_per_sample = (n + block - 1) / block;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n_starts - 1);
    std::vector<double> gains(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        double sum_a = 0.0;
        double sum_b = 0.0;
        std::size_t taken = 0;
        for (std::size_t i = 0; i < blocks_per_sample && taken < n; ++i) {
            const std::size_t start = pick(rng);
            for (std::size_t j = 0; j < block && taken < n; ++j, ++taken) {
                sum_a += pa[start + j];
                sum_b += pb[start + j];
            }
        }
        gains[r] = sum_b > 0.0 ? sum_a / sum_b - 1.0 : 0.0;
    }
    std::sort(gains.begin(), gains.end());
    const double alpha = 1.0 - level;
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(gains.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, gains.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return gains[lo] * (1.0 - frac) + gains[hi] * frac;
    };
    summary.energy_gain_ci = {quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
    return summary;
}

}  // namespace wfc
