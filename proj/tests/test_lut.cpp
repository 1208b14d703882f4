#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wfc/lut.hpp"
#include "wfc/surrogate.hpp"

using namespace wfc;

namespace {

// Multi-affine per-slot test payload: exact under multilinear interpolation.
double slot_value(const std::array<double, kLutAxisCount>& at, std::size_t slot) {
    const std::array<double, kLutAxisCount> gains{1.0, 40.0, 0.3, 2.0, 6.0, 1.5, 0.8};
    double v = 10.0 + 3.0 * static_cast<double>(slot);
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        v += gains[i] * (static_cast<double>(slot) + 1.0) * at[i];
    }
    return v;
}

FatigueLut make_affine_lut() {
    LutAxes axes;
    axes.values[0] = {6.0, 9.0, 12.0};
    axes.values[1] = {0.03, 0.10, 0.20};
    axes.values[2] = {-20.0, 0.0, 20.0};
    axes.values[3] = {0.0, 2.0};
    axes.values[4] = {0.0, 0.3, 0.6};
    axes.values[5] = {1.0, 1.6};
    axes.values[6] = {-1.0, 0.0, 1.0};

    std::vector<double> values(axes.node_count() * kLutValuesPerNode);
    std::array<std::size_t, kLutAxisCount> idx{};
    for (std::size_t flat = 0; flat < axes.node_count(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t i = kLutAxisCount; i-- > 0;) {
            idx[i] = rem % axes.values[i].size();
            rem /= axes.values[i].size();
        }
        std::array<double, kLutAxisCount> at{};
        for (std::size_t i = 0; i < kLutAxisCount; ++i) at[i] = axes.values[i][idx[i]];
        for (std::size_t s = 0; s < kLutValuesPerNode; ++s) {
            values[flat * kLutValuesPerNode + s] = slot_value(at, s);
        }
    }
    return FatigueLut(std::move(axes), std::move(values), LutBuildMeta{});
}

}  // namespace

TEST_SUITE("lut") {

TEST_CASE("full default grid combinatorics match the published table") {
    const LutAxes axes = LutAxes::full_default();
    CHECK(axes.values[0].size() == 12);
    CHECK(axes.values[1].size() == 3);
    CHECK(axes.values[2].size() == 7);
    CHECK(axes.values[3].size() == 7);
    CHECK(axes.values[4].size() == 3);
    CHECK(axes.values[5].size() == 3);
    CHECK(axes.values[6].size() == 5);
    CHECK(axes.node_count() == 79380);
    CHECK(axes.values[4][0] == 0.0);  // wake-free plane present

    const LutBuildPlan plan = LutBuildPlan::make(axes, LutBuildMeta{});
    CHECK(plan.nodes_total == 79380);
    CHECK(plan.nodes_wake_free == 1764);           // 12*3*7*7 collapsed representatives
    CHECK(plan.nodes_distinct == 54684);           // 52,920 waked + 1,764
    CHECK(plan.series_total == 382788);            // 18,228 per TI level x {3,6,12}
    CHECK(plan.nodes_total * 7 == 555660);         // uncollapsed series, 7 = avg seeds
}

TEST_CASE("axis validation") {
    LutAxes axes = LutAxes::full_default();
    axes.values[2] = {};
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
    axes = LutAxes::full_default();
    axes.values[0] = {8.0, 8.0};
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
    axes = LutAxes::full_default();
    axes.values[6] = {1.0, -1.0};
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
}

TEST_CASE("node queries return stored values exactly") {
    const FatigueLut lut = make_affine_lut();
    const auto& ax = lut.axes();
    const std::array<std::size_t, kLutAxisCount> idx{1, 2, 0, 1, 2, 0, 2};
    std::array<double, kLutAxisCount> at{};
    for (std::size_t i = 0; i < kLutAxisCount; ++i) at[i] = ax.values[i][idx[i]];

    const auto node = lut.node_values(idx);
    const auto q = lut.interpolate(at);
    CHECK_FALSE(q.clamped);
    for (std::size_t c = 0; c < kLutChannelCount; ++c) {
        CHECK(q.del[c] == doctest::Approx(node[c]).epsilon(1e-15));
        CHECK(q.mean[c] == doctest::Approx(node[kLutChannelCount + c]).epsilon(1e-15));
        CHECK(node[c] == doctest::Approx(slot_value(at, c)).epsilon(1e-15));
    }
}

TEST_CASE("midpoints along one axis average the adjacent nodes") {
    const FatigueLut lut = make_affine_lut();
    const auto& ax = lut.axes();
    for (std::size_t axis = 0; axis < kLutAxisCount; ++axis) {
        std::array<std::size_t, kLutAxisCount> idx{1, 1, 1, 0, 1, 0, 1};
        std::array<double, kLutAxisCount> at{};
        for (std::size_t i = 0; i < kLutAxisCount; ++i) at[i] = ax.values[i][idx[i]];

        std::array<std::size_t, kLutAxisCount> hi = idx;
        hi[axis] = idx[axis] + 1;
        REQUIRE(hi[axis] < ax.values[axis].size());
        at[axis] = 0.5 * (ax.values[axis][idx[axis]] + ax.values[axis][hi[axis]]);

        const auto lo_node = lut.node_values(idx);
        const auto hi_node = lut.node_values(hi);
        const auto q = lut.interpolate(at);
        for (std::size_t c = 0; c < kLutChannelCount; ++c) {
            CHECK(q.del[c] == doctest::Approx(0.5 * (lo_node[c] + hi_node[c])).epsilon(1e-13));
        }
    }
}

TEST_CASE("interior points reproduce a multi-affine payload") {
    const FatigueLut lut = make_affine_lut();
    const std::array<double, kLutAxisCount> at{7.3, 0.17, -4.0, 1.1, 0.25, 1.27, 0.4};
    const auto q = lut.interpolate(at);
    CHECK_FALSE(q.clamped);
    for (std::size_t c = 0; c < kLutChannelCount; ++c) {
        CHECK(q.del[c] == doctest::Approx(slot_value(at, c)).epsilon(1e-12));
        CHECK(q.mean[c] == doctest::Approx(slot_value(at, kLutChannelCount + c)).epsilon(1e-12));
    }
}

TEST_CASE("out-of-range queries clamp to the boundary and raise the flag") {
    const FatigueLut lut = make_affine_lut();
    std::array<double, kLutAxisCount> edge{12.0, 0.03, 20.0, 0.0, 0.6, 1.0, -1.0};
    std::array<double, kLutAxisCount> outside{30.0, 0.001, 45.0, -3.0, 0.9, 0.2, -7.0};
    const auto qe = lut.interpolate(edge);
    const auto qo = lut.interpolate(outside);
    CHECK_FALSE(qe.clamped);
    CHECK(qo.clamped);
    for (std::size_t c = 0; c < kLutChannelCount; ++c) {
        CHECK(qo.del[c] == doctest::Approx(qe.del[c]).epsilon(1e-13));
        CHECK(qo.mean[c] == doctest::Approx(qe.mean[c]).epsilon(1e-13));
    }
}

TEST_CASE("save/load round trip preserves payload and provenance") {
    const FatigueLut lut = make_affine_lut();
    const std::string path =
        (std::filesystem::temp_directory_path() / "wfc_lut_roundtrip.bin").string();
    lut.save(path);
    const FatigueLut back = FatigueLut::load(path);
    std::remove(path.c_str());

    CHECK(back.values() == lut.values());
    CHECK(back.provenance_hash() == lut.provenance_hash());
    CHECK(back.meta().duration_s == lut.meta().duration_s);
    CHECK(back.meta().base_seed == lut.meta().base_seed);
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        CHECK(back.axes().values[i] == lut.axes().values[i]);
    }
}

TEST_CASE("corrupted payloads are rejected at load") {
    const FatigueLut lut = make_affine_lut();
    const std::string path =
        (std::filesystem::temp_directory_path() / "wfc_lut_corrupt.bin").string();
    lut.save(path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-9, std::ios::end);
        const char byte = 0x5a;
        f.write(&byte, 1);
    }
    CHECK_THROWS_AS((void)FatigueLut::load(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("provenance hash tracks the payload") {
    const FatigueLut a = make_affine_lut();
    auto values = a.values();
    values[42] += 1e-9;
    const FatigueLut b(a.axes(), std::move(values), a.meta());
    CHECK(a.provenance_hash() != b.provenance_hash());
}

TEST_CASE("csv dump has one row per node") {
    const FatigueLut lut = make_affine_lut();
    std::ostringstream out;
    lut.dump_csv(out);
    const std::string text = out.str();
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == lut.node_count() + 1);
    CHECK(text.rfind("wind_speed,ti,yaw,pitch,w_d,sigma_d,delta_c,", 0) == 0);
}

TEST_CASE("wake-free nodes are filled from one representative") {
    LutAxes axes;
    axes.values[0] = {8.0};
    axes.values[1] = {0.06};
    axes.values[2] = {0.0};
    axes.values[3] = {0.0};
    axes.values[4] = {0.0, 0.4};
    axes.values[5] = {1.0, 1.4};
    axes.values[6] = {-0.5, 0.5};

    LutBuildMeta meta;
    const LutBuildPlan plan = LutBuildPlan::make(axes, meta);
    CHECK(plan.nodes_total == 8);
    CHECK(plan.nodes_wake_free == 1);
    CHECK(plan.nodes_distinct == 5);

    const TurbineSpec spec = test::reference_turbine();
    const FatigueLut lut = build_lut(axes, spec, meta, 2);

    const auto rep = lut.node_values({0, 0, 0, 0, 0, 0, 0});
    for (std::size_t s5 : {std::size_t{0}, std::size_t{1}}) {
        for (std::size_t s6 : {std::size_t{0}, std::size_t{1}}) {
            const auto other = lut.node_values({0, 0, 0, 0, 0, s5, s6});
            CHECK(other == rep);
        }
    }
    // A real wake changes the loads.
    const auto waked = lut.node_values({0, 0, 0, 0, 1, 0, 0});
    CHECK(waked[0] != rep[0]);

    // Interpolating across the degenerate axes at W_d = 0 stays constant.
    const auto q = lut.interpolate({8.0, 0.06, 0.0, 0.0, 0.0, 1.23, 0.11});
    CHECK(q.del[0] == doctest::Approx(rep[0]).epsilon(1e-13));
}

TEST_CASE("payload is independent of the worker count") {
    LutAxes axes;
    axes.values[0] = {8.0, 10.0};
    axes.values[1] = {0.06};
    axes.values[2] = {-10.0, 10.0};
    axes.values[3] = {0.0};
    axes.values[4] = {0.0, 0.4};
    axes.values[5] = {1.2};
    axes.values[6] = {0.0};

    const TurbineSpec spec = test::reference_turbine();
    LutBuildMeta meta;
    const FatigueLut serial = build_lut(axes, spec, meta, 1);
    const FatigueLut parallel = build_lut(axes, spec, meta, 4);
    CHECK(serial.values() == parallel.values());
    CHECK(serial.provenance_hash() == parallel.provenance_hash());
}

}  // TEST_SUITE
