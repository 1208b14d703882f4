#pragma once

#include <vector>

#include "wfc/pattern_search.hpp"
#include "wfc/types.hpp"

namespace wfc {

/// Available turbines whose modeled rotor-average deficit from all other
/// turbines stays below `threshold` at the zero-yaw operating point.
/// Throws std::runtime_error when the set is empty.
[[nodiscard]] std::vector<std::size_t> upstream_set(const FarmLayout& layout,
                                                    const AmbientState& ambient,
                                                    const WakeParams& kappa,
                                                    const TurbineSpec& spec,
                                                    const std::vector<int>& availability,
                                                    double threshold = 1e-3);

struct EstimateResult {
    double u_b = 0.0;   // [m/s]
    double rms = 0.0;   // residual power RMS at the optimum [W]
};

/// Background wind speed from the power balance of unwaked turbines:
/// least-squares inversion of the yaw-aware power model over the upstream
/// set, solved by golden-section search on [cut_in, cut_out].
[[nodiscard]] EstimateResult estimate_background(const MeasurementWindow& window,
                                                 const std::vector<std::size_t>& upstream,
                                                 const TurbineSpec& spec, double rho,
                                                 bool apply_eta = true, double tol = 1e-3);

struct CalibrationOptions {
    double lambda = 2.0;  // ridge weight; powers enter the data term in MW
    WakeParamBounds bounds;
    bool apply_eta = true;
    SimplexOptions search{0.2, 1e-14, 1e-10, 40000};
};

struct CalibrationResult {
    WakeParams kappa;
    double objective_before = 0.0;
    double objective_after = 0.0;
    double rms_before = 0.0;  // [W]
    double rms_after = 0.0;   // [W]
    bool degenerate = false;  // nothing waked: kappa returned unchanged
};

/// Ridge-regularized wake-parameter fit to one window of per-turbine mean
/// powers at the measured yaw angles. Warm-started at kappa_prev; the
/// returned parameters never score worse than the warm start.
[[nodiscard]] CalibrationResult calibrate(const FarmLayout& layout, const AmbientState& ambient,
                                          const MeasurementWindow& window,
                                          const std::vector<int>& availability,
                                          const WakeParams& kappa_prev, const TurbineSpec& spec,
                                          const CalibrationOptions& options = {});

}  // namespace wfc
