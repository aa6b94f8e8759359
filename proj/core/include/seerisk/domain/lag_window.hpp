#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seerisk/domain/panel.hpp"

namespace seerisk {

/// Features of `window` consecutive periods of one entity, labelled with the
/// risk class of the period that follows them.
struct SupervisedRow {
  std::string entity_id;
  PeriodIndex target_period;
  /// 1..5; 0 for scoring rows whose outcome is not yet known.
  int target_risk = 0;
  /// [lag position][numeric column]; position 0 is the oldest period. NaN = missing.
  std::vector<double> numeric;
  /// [lag position][categorical column]; empty string = missing.
  std::vector<std::string> categorical;
  /// Engineered features appended by preprocessing, aligned with
  /// LagWindowSet::derived_columns.
  std::vector<double> derived;
};

struct WindowStats {
  std::size_t candidates = 0;
  std::size_t emitted = 0;
  std::size_t dropped_missing_target = 0;
  std::size_t dropped_sparse = 0;
};

struct LagWindowSet {
  int window = 3;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> derived_columns;
  std::vector<SupervisedRow> rows;
  WindowStats stats;

  /// Value of numeric column `col` at period t - lag (lag in 1..window).
  double numeric_at(const SupervisedRow& row, int lag, std::size_t col) const {
    return row.numeric[static_cast<std::size_t>(window - lag) * numeric_columns.size() + col];
  }
  const std::string& categorical_at(const SupervisedRow& row, int lag, std::size_t col) const {
    return row.categorical[static_cast<std::size_t>(window - lag) * categorical_columns.size() + col];
  }

  std::optional<std::size_t> numeric_index(std::string_view name) const;
  std::optional<std::size_t> categorical_index(std::string_view name) const;
  std::optional<std::size_t> derived_index(std::string_view name) const;

  std::vector<int> targets() const;
};

/// "<column>_lag<k>" for the value at t - k.
std::string lagged_name(std::string_view column, int lag);

/// Emits one row per period t whose entity also filed the `window` strictly
/// consecutive periods before it. Rows are ordered by (entity_id, target
/// period). Rows without a target label, or with more than
/// `max_missing_fraction` of their lagged numeric cells missing, are dropped
/// and counted in `stats`.
LagWindowSet build_lag_windows(const PanelDataset& data, int window = 3,
                               double max_missing_fraction = 0.2);

struct IneligibleEntity {
  std::string entity_id;
  std::string reason;
};

struct ScoringWindows {
  LagWindowSet windows;
  std::vector<IneligibleEntity> ineligible;
};

inline constexpr std::string_view kInsufficientHistory = "insufficient history";
inline constexpr std::string_view kTooManyMissing = "too many missing values";

/// One unlabelled row per entity built from its trailing `window` consecutive
/// periods, targeting the period after its last filing.
ScoringWindows build_scoring_windows(const PanelDataset& data, int window = 3,
                                     double max_missing_fraction = 0.2);

}  // namespace seerisk
