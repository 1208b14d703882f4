#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfc/flow.hpp"
#include "wfc/types.hpp"
#include "wfc/util.hpp"

namespace wfc {

// Scheduled shutdown of one turbine over [t_start, t_end).
struct OutageInterval {
    std::size_t turbine = 0;
    double t_start = 0.0;
    double t_end = 0.0;
};

struct PlantConfig {
    WakeParams kappa_true{};         // truth wake parameters
    double dt = 0.5;                 // emulator timestep [s]
    double spin_up_s = 900.0;        // no control actions before this time
    double noise_std = 0.03;         // multiplicative power noise, std fraction
    double noise_tau_s = 30.0;       // noise correlation time [s]
    double yaw_deadband_deg = 0.5;   // on-off actuation deadband
    double deficit_exponent = 1.0;   // truth-side wake shape perturbation
    bool apply_eta = true;
    std::vector<OutageInterval> outages;

    void validate() const;
};

// One emulator step: values held over [t, t + dt).
struct PlantSample {
    double t = 0.0;
    std::vector<double> power;      // noisy electrical power [W]
    std::vector<double> yaw;        // actual yaw [deg]
    std::vector<int> available;
};

// Quasi-static virtual plant: steady wake model re-solved whenever yaw or
// availability changes, correlated multiplicative power noise on top, and
// rate-limited on-off yaw actuation toward dispatched targets.
class Plant {
  public:
    Plant(FarmLayout layout, AmbientState ambient, TurbineSpec spec, PlantConfig config,
          std::uint64_t seed);

    void set_targets(std::span<const double> targets);

    // Advance the clock by one dt; the returned sample covers the elapsed
    // interval, with yaw actuation and availability applied at its start.
    PlantSample step();

    [[nodiscard]] double time() const { return clock_; }
    [[nodiscard]] const std::vector<double>& actual_yaw() const { return yaw_; }
    [[nodiscard]] const std::vector<double>& targets() const { return target_; }
    [[nodiscard]] const std::vector<int>& availability() const { return available_; }
    [[nodiscard]] const FarmLayout& layout() const { return layout_; }
    [[nodiscard]] const AmbientState& ambient() const { return ambient_; }
    [[nodiscard]] const TurbineSpec& spec() const { return spec_; }
    [[nodiscard]] const PlantConfig& config() const { return config_; }

    // Current truth solution (no noise) at actual yaws and availability.
    [[nodiscard]] const FarmSolution& truth();

  private:
    void refresh_availability();
    void actuate();

    FarmLayout layout_;
    AmbientState ambient_;
    TurbineSpec spec_;
    PlantConfig config_;
    double clock_ = 0.0;
    std::vector<double> yaw_;
    std::vector<double> target_;
    std::vector<int> available_;
    std::vector<double> noise_;     // OU state per turbine, unit marginal std
    double noise_rho_ = 0.0;
    NormalSampler normal_;
    FarmSolution truth_;
    bool truth_dirty_ = true;
};

// Per-turbine means over samples with start times in [t_start, t_end).
// Power and yaw are averaged over the steps the turbine was available;
// completeness is the available fraction of all steps.
[[nodiscard]] MeasurementWindow averaged_window(std::span<const PlantSample> history,
                                                double t_start, double t_end);

// B_k = 0 iff completeness_k < 1 - threshold (strict).
[[nodiscard]] std::vector<int> availability_flags(const MeasurementWindow& window,
                                                  double threshold = 0.10);

}  // namespace wfc
