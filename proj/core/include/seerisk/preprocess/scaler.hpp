#pragma once

#include <string_view>
#include <vector>

#include "seerisk/common.hpp"

namespace seerisk {

enum class ScalerKind { standardize, minmax, lognormal };

std::string_view to_string(ScalerKind kind);
ScalerKind scaler_kind_from_string(std::string_view text);

/// Per-column statistics fitted on training rows. Only the vectors relevant
/// to `kind` are populated; lognormal is stateless.
struct ScalerSpec {
  ScalerKind kind = ScalerKind::lognormal;
  std::size_t columns = 0;
  std::vector<double> mean;
  std::vector<double> stddev;  // population
  std::vector<double> min;
  std::vector<double> max;
  /// Columns with zero spread; they scale to 0.
  std::vector<std::size_t> constant_columns;

  friend bool operator==(const ScalerSpec&, const ScalerSpec&) = default;
};

inline constexpr double kMinMaxClipLow = -0.5;
inline constexpr double kMinMaxClipHigh = 1.5;

/// sign(x) * ln(1 + |x|): odd, strictly increasing, defined everywhere.
double signed_log1p(double x);

/// Standardize and minmax need at least two rows; NaN input is rejected.
ScalerSpec fit_scaler(const Matrix& train, ScalerKind kind);

void apply_scaler_inplace(const ScalerSpec& spec, Matrix& m);
Matrix apply_scaler(const ScalerSpec& spec, Matrix m);

}  // namespace seerisk
