#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "seerisk/common.hpp"

namespace seerisk {

/// counts[i][j]: samples of actual class i+1 predicted as class j+1.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};
  std::uint64_t n = 0;

  std::uint64_t row_sum(std::size_t i) const;
  std::uint64_t col_sum(std::size_t j) const;
  std::uint64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws DataError naming the index of the first label outside 1..5, or on
/// a length mismatch.
ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

using PerClass = std::array<std::optional<double>, kNumClasses>;

struct MetricsReport {
  ConfusionMatrix confusion;
  /// correct / predicted-in-class; null when nothing was predicted in the class.
  PerClass precision{};
  /// correct / actual-in-class; null when the class has no support.
  PerClass recall{};
  double accuracy = 0;
  ClassCounts support{};
  /// 100 * counts[i][j] / row_sum(i); rows without support are all zero.
  std::array<std::array<double, kNumClasses>, kNumClasses> row_pct{};
};

/// Throws DataError when the matrix is empty.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

/// Integer percentages of one row that sum to exactly 100 (largest
/// remainder, ties to the lower column); all zero for an empty row.
std::array<int, kNumClasses> integer_row_percentages(const std::array<std::uint64_t, kNumClasses>& row);

nlohmann::json metrics_to_json(const MetricsReport& report);

/// Rows are actual classes 1..5, cells integer percents, zero cells blank,
/// followed by per-class precision/recall and overall accuracy.
std::string render_metrics_table(const MetricsReport& report);

}  // namespace seerisk
