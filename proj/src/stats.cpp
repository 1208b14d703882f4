#include "wfc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "wfc/util.hpp"

namespace wfc {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void mean_and_var(std::span<const double> x, double& mean, double& var) {
    mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size() - 1);
}

}  // namespace

BootstrapCi block_bootstrap_ci(std::span<const double> series, std::size_t block_length,
                               std::size_t resamples, double level, std::uint64_t seed) {
    const std::size_t n = series.size();
    if (block_length == 0) throw std::invalid_argument("block_bootstrap_ci: zero block length");
    if (n < 2 * block_length) {
        throw std::invalid_argument("block_bootstrap_ci: need at least two blocks of data");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("block_bootstrap_ci: level must be in (0,1)");
    }
    if (resamples < 2) throw std::invalid_argument("block_bootstrap_ci: too few resamples");

    const std::size_t n_starts = n - block_length + 1;
    const std::size_t blocks_per_sample = (n + block_length - 1) / block_length;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n_starts - 1);

    std::vector<double> means(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        double sum = 0.0;
        std::size_t taken = 0;
        for (std::size_t b = 0; b < blocks_per_sample && taken < n; ++b) {
            const std::size_t start = pick(rng);
            for (std::size_t j = 0; j < block_length && taken < n; ++j, ++taken) {
                sum += series[start + j];
            }
        }
        means[r] = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = 1.0 - level;
    return {quantile_sorted(means, alpha / 2.0), quantile_sorted(means, 1.0 - alpha / 2.0)};
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_t_test: both series need at least two samples");
    }
    double ma = 0.0, va = 0.0, mb = 0.0, vb = 0.0;
    mean_and_var(a, ma, va);
    mean_and_var(b, mb, vb);
    if (va == 0.0 && vb == 0.0) {
        throw std::runtime_error("welch_t_test: both series have zero variance");
    }
    const double sa = va / static_cast<double>(a.size());
    const double sb = vb / static_cast<double>(b.size());
    WelchResult res;
    res.t = (ma - mb) / std::sqrt(sa + sb);
    res.dof = (sa + sb) * (sa + sb) /
              (sa * sa / static_cast<double>(a.size() - 1) +
               sb * sb / static_cast<double>(b.size() - 1));
    res.p = student_t_two_sided_p(res.t, res.dof);
    return res;
}

}  // namespace wfc
