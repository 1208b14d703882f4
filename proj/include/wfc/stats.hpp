#pragma once

#include <cstdint>
#include <span>

namespace wfc {

struct BootstrapCi {
    double low = 0.0;
    double high = 0.0;
};

// Moving-block bootstrap percentile CI of the series mean. All contiguous
// blocks of the given length are candidates; each resample concatenates
// uniformly drawn blocks and is trimmed to the original length.
[[nodiscard]] BootstrapCi block_bootstrap_ci(std::span<const double> series,
                                             std::size_t block_length = 20,
                                             std::size_t resamples = 1000, double level = 0.95,
                                             std::uint64_t seed = 1);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom; two-sided p from the Student-t distribution.
[[nodiscard]] WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace wfc
