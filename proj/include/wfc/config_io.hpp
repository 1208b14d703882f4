#pragma once

#include <string>

#include "wfc/lut.hpp"
#include "wfc/runner.hpp"
#include "wfc/types.hpp"

namespace wfc {

/// Turbine description file: `key = value` lines plus [ct_curve] and
/// [cp_curve] sections holding `speed coefficient` pairs. An optional
/// [layout] section of `id x y` rows is written to *layout when given.
[[nodiscard]] TurbineSpec load_turbine_spec(const std::string& path,
                                            FarmLayout* layout = nullptr);

/// Layout CSV with header `id,x,y`; ids must cover 0..n-1.
[[nodiscard]] FarmLayout load_layout_csv(const std::string& path);

/// Window statistics CSV with header
/// `turbine,power_mean_w,yaw_mean_deg,completeness`.
[[nodiscard]] MeasurementWindow load_measurements_csv(const std::string& path);

/// Scenario JSON; turbine and layout entries are file references resolved
/// relative to the scenario file's directory.
[[nodiscard]] Scenario load_scenario(const std::string& path);

/// Grid axes JSON: one array of strictly increasing values per axis name.
[[nodiscard]] LutAxes load_lut_axes(const std::string& path);

}  // namespace wfc
