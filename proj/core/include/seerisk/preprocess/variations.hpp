#pragma once

#include <span>
#include <string>
#include <string_view>

#include "seerisk/domain/lag_window.hpp"

namespace seerisk {

inline constexpr double kDefaultChangeCap = 10.0;

/// (curr - prev) / |prev|, clipped to [-cap, cap]. A zero baseline yields 0
/// when curr is also zero and sign(curr) * cap otherwise. NaN if either side
/// is missing.
double relative_change(double prev, double curr, double cap = kDefaultChangeCap);

/// "vbp_<column>_lag<from>_lag<to>".
std::string variation_name(std::string_view column, int from_lag, int to_lag);

/// Appends window-1 relative-change features per listed column, one per pair
/// of adjacent lags, oldest pair first. Throws ConfigError when a column is
/// not a numeric lag column or variations were already appended.
void compute_variations(LagWindowSet& set, std::span<const std::string> columns,
                        double cap = kDefaultChangeCap);

}  // namespace seerisk
