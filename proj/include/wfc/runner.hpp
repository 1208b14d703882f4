#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wfc/estimation.hpp"
#include "wfc/lut.hpp"
#include "wfc/optimizer.hpp"
#include "wfc/plant.hpp"
#include "wfc/stats.hpp"
#include "wfc/types.hpp"

namespace wfc {

enum class ControlMode { greedy, open_loop, closed_loop };

[[nodiscard]] std::string to_string(ControlMode mode);
[[nodiscard]] ControlMode control_mode_from_string(const std::string& name);

/// Everything the emulated experiment needs: the plant truth, the machine,
/// and the controller's (possibly mismatched) starting wake parameters.
struct Scenario {
    std::string name;
    FarmLayout layout;
    TurbineSpec turbine;
    AmbientState ambient;
    double duration_s = 3600.0;
    PlantConfig plant;               // includes kappa_true
    WakeParams controller_kappa{};   // controller warm start / open-loop table basis

    void validate() const;
};

struct LoopConfig {
    double t_s = 600.0;                   // sampling/control period [s]
    ControlMode mode = ControlMode::closed_loop;
    double lambda = 2.0;                  // calibration ridge weight
    double availability_threshold = 0.10; // missing-data fraction that drops a turbine
    double estimate_tol = 1e-3;           // [m/s]
    YawOptimizerConfig optimizer;
};

/// One sampling window of the experiment log.
struct LoopRecord {
    std::size_t window = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    double farm_power_mean = 0.0;  // [W], every turbine and step
    std::vector<TurbineWindow> turbines;
    std::vector<int> availability;           // B flags (closed loop), else all ones
    bool dispatched = false;
    std::vector<double> targets;             // set points in force after this window
    bool estimated = false;
    double u_b = 0.0;                        // background estimate [m/s]
    double estimate_rms = 0.0;               // [W]
    bool calibrated = false;
    WakeParams kappa;                        // controller parameters after this window
    double objective = 0.0;                  // optimizer objective (when dispatched)
    std::vector<std::array<double, kLutChannelCount>> window_del;  // truth-side LUT query
    std::string error;                       // first failure in this window, if any
};

struct RunReport {
    std::string scenario_name;
    std::string mode;
    std::uint64_t seed = 0;
    double t_s = 0.0;
    double duration_s = 0.0;
    ObjectiveWeights weights;
    std::vector<LoopRecord> records;
    double energy_j = 0.0;
    std::vector<std::array<double, kLutChannelCount>> turbine_del;
    std::array<double, kLutChannelCount> farm_del{};
    WakeParams final_kappa;

    [[nodiscard]] std::vector<double> window_powers() const;  // farm means, one per window
};

/// Run one scenario under the given control mode. The fatigue table, when
/// provided, feeds both the load-aware objective (if weights.load > 0) and
/// the truth-side per-window fatigue tally.
[[nodiscard]] RunReport run_scenario(const Scenario& scenario, const LoopConfig& config,
                                     const FatigueLut* lut, std::uint64_t seed);

[[nodiscard]] std::string report_to_json(const RunReport& report);
[[nodiscard]] RunReport report_from_json(const std::string& text);

/// FNV-1a hex digest of the serialized report.
[[nodiscard]] std::string report_hash(const RunReport& report);

/// Writes report.json and windows.csv into the directory (created if needed).
void write_report(const RunReport& report, const std::string& dir);
[[nodiscard]] RunReport load_report(const std::string& dir);

struct GainSummary {
    double energy_gain = 0.0;      // (E_a - E_b) / E_b
    double del_gain = 0.0;         // farm blade-root out-of-plane tally change
    BootstrapCi energy_gain_ci;    // paired moving-block bootstrap
    double welch_t = 0.0;
    double welch_dof = 0.0;
    double welch_p = 1.0;
    std::size_t windows = 0;
};

/// Compare run A against baseline run B window by window.
[[nodiscard]] GainSummary report_gains(const RunReport& a, const RunReport& b,
                                       std::size_t block_length = 1,
                                       std::size_t resamples = 1000, double level = 0.95,
                                       std::uint64_t seed = 1);

}  // namespace wfc
