#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wfc {

inline constexpr std::size_t kLutAxisCount = 7;
inline constexpr std::size_t kLutChannelCount = 4;
inline constexpr std::size_t kLutValuesPerNode = 2 * kLutChannelCount;  // DELs then means

inline constexpr std::array<const char*, kLutAxisCount> kLutAxisNames = {
    "wind_speed", "ti", "yaw", "pitch", "w_d", "sigma_d", "delta_c"};

inline constexpr std::array<const char*, kLutChannelCount> kLutChannelNames = {
    "blade_root_oop", "blade_root_ip", "tower_fa", "tower_ss"};

/// Grid axes of the fatigue table. Units: wind speed m/s, TI as a fraction,
/// yaw and pitch in degrees, W_d deficit fraction, sigma_d in 2*sigma/D,
/// delta_c in rotor diameters.
struct LutAxes {
    std::array<std::vector<double>, kLutAxisCount> values;

    [[nodiscard]] const std::vector<double>& axis(std::size_t i) const { return values[i]; }
    [[nodiscard]] std::size_t node_count() const;
    void validate() const;

    /// Full default grid: 12 speeds x 3 TI x 7 yaw x 7 pitch x 3 W_d x
    /// 3 sigma_d x 5 delta_c.
    static LutAxes full_default();
};

/// Per-TI seed counts and the parameters of the variance-based fallback
/// seeds = ceil(TI^2 * 2 tau / (eps^2 * duration)).
struct SeedSchedule {
    std::vector<std::pair<double, int>> table = {{0.03, 3}, {0.10, 6}, {0.20, 12}};
    double epsilon = 0.01;  // target standard-error fraction
    double tau_s = 8.0;     // turbulence integral time scale [s]
};

struct LutBuildMeta {
    double duration_s = 600.0;
    double sample_rate_hz = 10.0;
    double f_eq_hz = 1.0;
    std::uint64_t base_seed = 1;
    SeedSchedule seeds;
};

struct LutQueryResult {
    std::array<double, kLutChannelCount> del{};
    std::array<double, kLutChannelCount> mean{};
    bool clamped = false;  // some query coordinate fell outside the grid
};

/// Dense 7-D fatigue table with multilinear interpolation and edge clamping.
class FatigueLut {
  public:
    FatigueLut() = default;
    FatigueLut(LutAxes axes, std::vector<double> values, LutBuildMeta meta);

    [[nodiscard]] const LutAxes& axes() const { return axes_; }
    [[nodiscard]] const LutBuildMeta& meta() const { return meta_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::size_t node_count() const { return axes_.node_count(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }

    [[nodiscard]] std::size_t flat_index(const std::array<std::size_t, kLutAxisCount>& idx) const;
    [[nodiscard]] std::array<double, kLutValuesPerNode>
    node_values(const std::array<std::size_t, kLutAxisCount>& idx) const;

    [[nodiscard]] LutQueryResult interpolate(const std::array<double, kLutAxisCount>& at) const;

    /// FNV-1a hash over axes and payload; stored in the file header.
    [[nodiscard]] std::string provenance_hash() const;

    void save(const std::string& path) const;
    static FatigueLut load(const std::string& path);
    void dump_csv(std::ostream& out) const;

  private:
    LutAxes axes_;
    std::vector<double> values_;  // node-major, kLutValuesPerNode per node
    LutBuildMeta meta_;
};

}  // namespace wfc
