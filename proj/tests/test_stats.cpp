#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wfc/stats.hpp"

using namespace wfc;

TEST_SUITE("stats") {

TEST_CASE("bootstrap input validation") {
    const std::vector<double> x(50, 1.0);
    CHECK_THROWS_AS((void)block_bootstrap_ci(x, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)block_bootstrap_ci(x, 26), std::invalid_argument);
    CHECK_THROWS_AS((void)block_bootstrap_ci(x, 20, 1000, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)block_bootstrap_ci(x, 20, 1000, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)block_bootstrap_ci(x, 20, 1), std::invalid_argument);
}

TEST_CASE("constant series gives a zero-width interval at the constant") {
    const std::vector<double> x(64, 3.25);
    const auto ci = block_bootstrap_ci(x, 8);
    CHECK(ci.low == 3.25);
    CHECK(ci.high == 3.25);
}

TEST_CASE("resampled means stay inside the attainable range") {
    // Blocks of two from {1,2,3,4} can only produce means in [1.5, 3.5].
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto ci = block_bootstrap_ci(x, 2, 500, 0.95, 7);
    CHECK(ci.low <= ci.high);
    CHECK(ci.low >= 1.5);
    CHECK(ci.high <= 3.5);
}

TEST_CASE("iid series: percentile width tracks the analytic interval") {
    // Block length 1 on white noise should reproduce the classic
    // 2 * 1.96 sigma / sqrt(n) width.
    const std::size_t n = 400;
    const double analytic = 2.0 * 1.959963985 / std::sqrt(static_cast<double>(n));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double width_sum = 0.0;
    int covered = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> x(n);
        for (auto& v : x) v = gauss(rng);
        const auto ci = block_bootstrap_ci(x, 1, 1000, 0.95,
                                           static_cast<std::uint64_t>(trial + 1));
        const double width = ci.high - ci.low;
        CHECK(width / analytic > 0.7);
        CHECK(width / analytic < 1.3);
        width_sum += width;
        if (ci.low <= 0.0 && 0.0 <= ci.high) ++covered;
    }
    CHECK(std::abs(width_sum / trials / analytic - 1.0) < 0.15);
    CHECK(covered >= 85);  // nominal 95% coverage, percentile method bias allowed
}

TEST_CASE("autocorrelated series: long blocks widen the interval") {
    // AR(1) with phi = 0.9; single-sample blocks ignore the correlation and
    // understate the uncertainty of the mean.
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 2000;

    int wider = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> x(n);
        double state = 0.0;
        for (auto& v : x) {
            state = 0.9 * state + gauss(rng);
            v = state;
        }
        const auto narrow = block_bootstrap_ci(x, 1, 500, 0.95, 101);
        const auto wide = block_bootstrap_ci(x, 20, 500, 0.95, 101);
        if (wide.high - wide.low > narrow.high - narrow.low) ++wider;
    }
    CHECK(wider == trials);
}

TEST_CASE("welch reference values") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> b{2.0, 4.0, 6.0, 8.0, 10.0};
    const auto r = welch_t_test(a, b);
    CHECK(r.t == doctest::Approx(-1.8973665961010275).epsilon(1e-12));
    CHECK(r.dof == doctest::Approx(5.882352941176471).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.10753119493062718).epsilon(1e-9));

    const std::vector<double> c{0.5, 1.1, -0.3, 0.9, 1.4, 0.2, 0.7};
    const std::vector<double> d{1.9, 2.3, 1.2, 2.8};
    const auto r2 = welch_t_test(c, d);
    CHECK(r2.t == doctest::Approx(-3.5094739619615094).epsilon(1e-12));
    CHECK(r2.dof == doctest::Approx(5.491349480968858).epsilon(1e-12));
    CHECK(r2.p == doctest::Approx(0.014663853114240165).epsilon(1e-9));
}

TEST_CASE("identical samples give t = 0 and p = 1") {
    const std::vector<double> a{3.0, 1.0, 4.0, 1.0, 5.0};
    const auto r = welch_t_test(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("welch input validation") {
    const std::vector<double> one{1.0};
    const std::vector<double> ok{1.0, 2.0, 3.0};
    const std::vector<double> flat{2.0, 2.0, 2.0};
    CHECK_THROWS_AS((void)welch_t_test(one, ok), std::invalid_argument);
    CHECK_THROWS_AS((void)welch_t_test(ok, one), std::invalid_argument);
    CHECK_THROWS_AS((void)welch_t_test(flat, flat), std::runtime_error);
    // One degenerate side is fine: the statistic is still defined.
    const auto r = welch_t_test(flat, ok);
    CHECK(std::isfinite(r.t));
    CHECK(r.p > 0.0);
}

TEST_CASE("welch detects a one-sigma shift in fifty samples") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int rejected = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> a(50), b(50);
        for (auto& v : a) v = gauss(rng);
        for (auto& v : b) v = gauss(rng) + 1.0;
        if (welch_t_test(a, b).p < 0.01) ++rejected;
    }
    CHECK(rejected >= 95);
}

TEST_CASE("welch keeps its size under unequal variances") {
    // Equal means, sigma 1 vs sigma 3, unequal sample sizes: the classic
    // Behrens-Fisher setting the test is built for.
    std::mt19937_64 rng(37);
    std::normal_distribution<double> narrow(0.0, 1.0);
    std::normal_distribution<double> spread(0.0, 3.0);
    int rejected = 0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> a(30), b(20);
        for (auto& v : a) v = narrow(rng);
        for (auto& v : b) v = spread(rng);
        if (welch_t_test(a, b).p < 0.05) ++rejected;
    }
    CHECK(rejected >= 30);
    CHECK(rejected <= 70);
}

}  // TEST_SUITE
