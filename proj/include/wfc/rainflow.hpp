#pragma once

#include <span>
#include <vector>

namespace wfc {

/// One counted load cycle: full cycles have count 1, residual half cycles 0.5.
struct Cycle {
    double range = 0.0;
    double mean = 0.0;
    double count = 0.0;
};

/// Local extrema (reversals) of a load series, endpoints included.
[[nodiscard]] std::vector<double> extract_reversals(std::span<const double> series);

/// Rainflow cycle counting (the three-point stack rule with half-cycle
/// residuals, as standardized for fatigue analysis). The summed cycle count
/// times two equals the reversal count minus one.
[[nodiscard]] std::vector<Cycle> rainflow(std::span<const double> series);

/// Damage-equivalent load: DEL = (sum_i n_i R_i^m / n_eq)^(1/m) with
/// n_eq = f_eq * duration. Returns 0 for an empty cycle set.
[[nodiscard]] double damage_equivalent_load(std::span<const Cycle> cycles, double wohler_m,
                                            double duration_s, double f_eq_hz = 1.0);

}  // namespace wfc
