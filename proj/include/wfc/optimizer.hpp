#pragma once

#include <cstdint>
#include <vector>

#include "wfc/flow.hpp"
#include "wfc/lut.hpp"
#include "wfc/pattern_search.hpp"
#include "wfc/types.hpp"

namespace wfc {

/// Objective weights: minimize -w_power * P_GAIN + w_load * DEL_GAIN.
struct ObjectiveWeights {
    double power = 1.0;
    double load = 0.0;
};

struct YawOptimizerConfig {
    ObjectiveWeights weights;
    double yaw_bound = 30.0;  // [deg], symmetric box
    int starts = 5;           // first start is gamma = 0, the rest random
    bool apply_eta = true;
    bool parallel_starts = false;
    PatternSearchOptions search{8.0, 0.1, 1e-6, 0.5, 200000};
};

struct GainBreakdown {
    double power_gain = 0.0;  // sum over available turbines of P_k / P_k(0)
    double load_gain = 0.0;   // sum over available turbines of DEL_k / DEL_k(yaw=0)
    double objective = 0.0;
    int excluded_power_terms = 0;  // zero-power baselines skipped
};

/// Reusable farm-objective context. Thrust and rotor turbulence are frozen
/// at the zero-yaw solve with the given availability, which also supplies
/// the per-turbine power normalizers.
class YawObjective {
  public:
    YawObjective(const FarmLayout& layout, const AmbientState& ambient, const WakeParams& kappa,
                 const TurbineSpec& spec, std::vector<int> availability,
                 const FatigueLut* lut, const YawOptimizerConfig& config);

    [[nodiscard]] GainBreakdown evaluate(const std::vector<double>& yaw) const;
    [[nodiscard]] const FarmSolution& baseline() const { return baseline_; }
    [[nodiscard]] const std::vector<int>& availability() const { return availability_; }
    [[nodiscard]] std::size_t size() const { return layout_->size(); }

  private:
    const FarmLayout* layout_;
    AmbientState ambient_;
    WakeParams kappa_;
    const TurbineSpec* spec_;
    std::vector<int> availability_;
    const FatigueLut* lut_;
    YawOptimizerConfig config_;
    FarmSolution baseline_;
    std::vector<FrozenOperatingPoint> frozen_;
    std::vector<double> power_denominator_;
};

/// P_GAIN at the given yaw vector (power term of the objective).
[[nodiscard]] double power_gain(const YawObjective& objective, const std::vector<double>& yaw);

/// DEL_GAIN at the given yaw vector. Requires a fatigue table.
[[nodiscard]] double del_gain(const YawObjective& objective, const std::vector<double>& yaw);

struct OptimizeResult {
    std::vector<double> yaw;  // [deg], zero where unavailable
    GainBreakdown gains;
    int evaluations = 0;
    int winning_start = 0;
};

/// Multi-start bounded pattern search over the available turbines' yaw
/// angles. Deterministic for a given seed; the zero start guarantees the
/// result is never worse than holding gamma = 0.
[[nodiscard]] OptimizeResult optimize_yaw(const FarmLayout& layout, const AmbientState& ambient,
                                          const WakeParams& kappa, const TurbineSpec& spec,
                                          const std::vector<int>& availability,
                                          const FatigueLut* lut,
                                          const YawOptimizerConfig& config, std::uint64_t seed);

}  // namespace wfc
