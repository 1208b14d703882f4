#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wfc/flow.hpp"
#include "wfc/plant.hpp"

using namespace wfc;
using namespace wfc::test;

namespace {

PlantConfig quiet_config() {
    PlantConfig config;
    config.noise_std = 0.0;
    return config;
}

}  // namespace

TEST_SUITE("plant") {

TEST_CASE("plant config validation") {
    PlantConfig config;
    config.dt = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = PlantConfig{};
    config.noise_std = -0.1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = PlantConfig{};
    config.noise_tau_s = 0.0;  // with noise_std > 0
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = PlantConfig{};
    config.outages.push_back({0, 100.0, 100.0});
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = PlantConfig{};
    config.outages.push_back({7, 0.0, 100.0});
    CHECK_THROWS_AS(Plant(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(),
                          config, 1),
                    std::invalid_argument);
}

TEST_CASE("yaw actuation honors rate limit and deadband") {
    // 10 deg/s at dt = 0.5 s allows 5 deg per step.
    Plant plant(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(),
                quiet_config(), 1);
    const std::vector<double> targets{8.0, 0.3};
    plant.set_targets(targets);

    (void)plant.step();
    CHECK(plant.actual_yaw()[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(plant.actual_yaw()[1] == 0.0);  // 0.3 deg inside the 0.5 deg deadband

    (void)plant.step();
    CHECK(plant.actual_yaw()[0] == doctest::Approx(8.0).epsilon(1e-12));

    (void)plant.step();
    CHECK(plant.actual_yaw()[0] == doctest::Approx(8.0).epsilon(1e-12));

    plant.set_targets(std::vector<double>{-3.0, 0.0});
    (void)plant.step();
    CHECK(plant.actual_yaw()[0] == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(plant.set_targets(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("noise-free samples equal the steady solve") {
    Plant plant(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(),
                quiet_config(), 1);
    const auto first = plant.step();
    const auto& truth = plant.truth();
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(first.power[k] == truth.turbines[k].power);
    }
    // Nothing moves, so the cached solve keeps byte-identical powers.
    const auto second = plant.step();
    CHECK(second.power == first.power);
    CHECK(second.t == doctest::Approx(0.5));
    CHECK(plant.time() == doctest::Approx(1.0));
}

TEST_CASE("power noise is correlated, centered, and seed-deterministic") {
    PlantConfig config;  // default 3% noise, tau 30 s
    Plant a(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(), config, 42);
    Plant b(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(), config, 42);
    Plant c(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(), config, 43);

    const double clean = a.truth().turbines[0].power;
    std::vector<double> factors;
    bool differs_from_c = false;
    for (int i = 0; i < 4000; ++i) {
        const auto sa = a.step();
        const auto sb = b.step();
        const auto sc = c.step();
        CHECK(sa.power == sb.power);
        differs_from_c = differs_from_c || sa.power != sc.power;
        factors.push_back(sa.power[0] / clean);
    }
    CHECK(differs_from_c);

    const double mean =
        std::accumulate(factors.begin(), factors.end(), 0.0) / factors.size();
    CHECK(std::abs(mean - 1.0) < 0.02);

    double var = 0.0;
    for (double f : factors) var += (f - mean) * (f - mean);
    var /= factors.size();
    CHECK(std::sqrt(var) == doctest::Approx(config.noise_std).epsilon(0.35));

    // Lag-1 autocorrelation of an OU process at dt = 0.5, tau = 30.
    double lag = 0.0;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        lag += (factors[i] - mean) * (factors[i - 1] - mean);
    }
    lag /= (factors.size() - 1) * var;
    CHECK(lag == doctest::Approx(std::exp(-0.5 / 30.0)).epsilon(0.05));
}

TEST_CASE("outage parks the turbine and frees the downstream flow") {
    PlantConfig config = quiet_config();
    config.outages.push_back({0, 1.0, 3.0});
    Plant plant(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(), config, 9);
    const TurbineSpec spec = reference_turbine();
    const double free_power = turbine_power(8.0, 0.0, spec, 1.225, true);

    const auto before = plant.step();  // t = 0: both on
    CHECK(before.available == std::vector<int>{1, 1});
    CHECK(before.power[1] < 0.7 * free_power);  // deep wake at 5 D
    const auto still_on = plant.step();  // t = 0.5
    CHECK(still_on.available == std::vector<int>{1, 1});

    std::vector<PlantSample> during;
    for (int i = 0; i < 4; ++i) during.push_back(plant.step());  // t = 1, 1.5, 2, 2.5
    for (const auto& s : during) {
        CHECK(s.available == std::vector<int>{0, 1});
        CHECK(s.power[0] == 0.0);
        CHECK(s.power[1] == doctest::Approx(free_power).epsilon(1e-12));
    }

    const auto after = plant.step();  // t = 3: restored
    CHECK(after.available == std::vector<int>{1, 1});
    CHECK(after.power[0] == doctest::Approx(free_power).epsilon(1e-12));
    CHECK(after.power[1] < 0.7 * free_power);
}

TEST_CASE("parked turbines hold yaw until restored") {
    PlantConfig config = quiet_config();
    config.outages.push_back({0, 0.0, 2.0});
    Plant plant(column_layout(2, 5.0), west_wind(8.0, 0.06), reference_turbine(), config, 9);
    plant.set_targets(std::vector<double>{10.0, 0.0});

    for (int i = 0; i < 4; ++i) (void)plant.step();  // t = 0 .. 1.5, all parked
    CHECK(plant.actual_yaw()[0] == 0.0);

    (void)plant.step();  // t = 2: restored, first move
    CHECK(plant.actual_yaw()[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("averaged window reduces sample history exactly") {
    std::vector<PlantSample> history(4);
    for (std::size_t i = 0; i < 4; ++i) {
        auto& s = history[i];
        s.t = 0.5 * static_cast<double>(i);
        s.power = {1000.0 * (i + 1.0), 500.0};
        s.yaw = {10.0 + static_cast<double>(i), -5.0};
        s.available = {1, i < 2 ? 1 : 0};
    }

    SUBCASE("half-open interval membership") {
        const auto w = averaged_window(history, 0.0, 1.0);  // t = 0 and 0.5 only
        CHECK(w.turbines[0].power_mean == doctest::Approx(1500.0));
        CHECK(w.turbines[0].yaw_mean == doctest::Approx(10.5));
        CHECK(w.turbines[0].completeness == 1.0);
        CHECK(w.turbines[1].completeness == 1.0);
    }

    SUBCASE("partial availability averages available steps only") {
        const auto w = averaged_window(history, 0.0, 2.0);
        CHECK(w.turbines[0].power_mean == doctest::Approx(2500.0));
        CHECK(w.turbines[1].completeness == doctest::Approx(0.5));
        CHECK(w.turbines[1].power_mean == doctest::Approx(500.0));
        CHECK(w.turbines[1].yaw_mean == doctest::Approx(-5.0));
    }

    SUBCASE("fully parked turbine reports zero power") {
        const auto w = averaged_window(history, 1.0, 2.0);
        CHECK(w.turbines[1].completeness == 0.0);
        CHECK(w.turbines[1].power_mean == 0.0);
        CHECK(w.turbines[1].yaw_mean == doctest::Approx(-5.0));
    }

    CHECK_THROWS_AS((void)averaged_window(history, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)averaged_window(history, 5.0, 6.0), std::runtime_error);
}

TEST_CASE("availability flags use a strict completeness cut") {
    MeasurementWindow window;
    window.t_start = 0.0;
    window.t_end = 600.0;
    window.turbines.resize(4);
    window.turbines[0].completeness = 1.0;
    window.turbines[1].completeness = 0.95;
    window.turbines[2].completeness = 0.90;  // exactly at the cut: stays in
    window.turbines[3].completeness = 0.85;
    CHECK(availability_flags(window) == std::vector<int>{1, 1, 1, 0});
    CHECK(availability_flags(window, 0.2) == std::vector<int>{1, 1, 1, 1});
    CHECK_THROWS_AS((void)availability_flags(window, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)availability_flags(window, 1.0), std::invalid_argument);
}

TEST_CASE("emulated history feeds the estimator round trip") {
    PlantConfig config = quiet_config();
    Plant plant(column_layout(2, 5.0), west_wind(9.4, 0.06), reference_turbine(), config, 5);
    std::vector<PlantSample> history;
    for (int i = 0; i < 40; ++i) history.push_back(plant.step());

    const auto window = averaged_window(history, 0.0, 20.0);
    CHECK(window.turbines[0].completeness == 1.0);
    CHECK(window.turbines[0].power_mean ==
          doctest::Approx(plant.truth().turbines[0].power).epsilon(1e-12));
}

}  // TEST_SUITE
