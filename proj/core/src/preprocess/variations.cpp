#include "seerisk/preprocess/variations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seerisk/common.hpp"

namespace seerisk {

double relative_change(double prev, double curr, double cap) {
  if (std::isnan(prev) || std::isnan(curr)) return std::numeric_limits<double>::quiet_NaN();
  double change;
  if (prev != 0.0) {
    change = (curr - prev) / std::abs(prev);
  } else if (curr == 0.0) {
    change = 0.0;
  } else {
    change = curr > 0 ? cap : -cap;
  }
  return std::clamp(change, -cap, cap);
}

std::string variation_name(std::string_view column, int from_lag, int to_lag) {
  return "vbp_" + std::string(column) + "_lag" + std::to_string(from_lag) + "_lag" +
         std::to_string(to_lag);
}

void compute_variations(LagWindowSet& set, std::span<const std::string> columns, double cap) {
  if (!(cap > 0)) throw ConfigError("variation cap must be positive");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    auto i = set.numeric_index(c);
    if (!i) throw ConfigError("variation column '" + c + "' is not a numeric panel column");
    idx.push_back(*i);
  }
  std::vector<std::string> names;
  for (const auto& c : columns) {
    for (int lag = set.window; lag > 1; --lag) {
      names.push_back(variation_name(c, lag, lag - 1));
      if (set.derived_index(names.back())) {
        throw ConfigError("variation feature '" + names.back() + "' already present");
      }
    }
  }
  for (auto& row : set.rows) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      for (int lag = set.window; lag > 1; --lag) {
        row.derived.push_back(
            relative_change(set.numeric_at(row, lag, idx[k]), set.numeric_at(row, lag - 1, idx[k]), cap));
      }
    }
  }
  set.derived_columns.insert(set.derived_columns.end(), names.begin(), names.end());
}

}  // namespace seerisk
