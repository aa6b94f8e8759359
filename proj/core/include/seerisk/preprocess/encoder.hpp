#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seerisk/common.hpp"
#include "seerisk/domain/lag_window.hpp"

namespace seerisk {

struct CategoricalEncoding {
  std::string column;
  /// Sorted, duplicate-free; the group has one extra trailing "unknown" slot.
  std::vector<std::string> categories;

  std::size_t width() const noexcept { return categories.size() + 1; }
  std::size_t unknown_slot() const noexcept { return categories.size(); }
  /// Slot of a non-empty token; unseen tokens map to the unknown slot.
  std::size_t slot(std::string_view token) const;

  friend bool operator==(const CategoricalEncoding&, const CategoricalEncoding&) = default;
};

/// One-hot vocabulary per categorical source column, shared by all its lags.
struct EncoderSpec {
  std::vector<CategoricalEncoding> columns;

  /// Encoded width of one lag: sum of (|categories| + 1).
  std::size_t width_per_lag() const noexcept;

  friend bool operator==(const EncoderSpec&, const EncoderSpec&) = default;
};

inline constexpr std::string_view kUnknownCategory = "<unknown>";

/// Categories are the distinct tokens observed in `rows` (any lag), sorted.
/// Throws DataError naming a column that has no observed value.
EncoderSpec fit_encoder(const LagWindowSet& set, std::span<const std::size_t> rows);

struct EncodedCategoricals {
  /// Groups ordered by (column, lag descending); each group is width() wide.
  Matrix values;
  std::vector<OneHotGroup> groups;
  std::size_t missing_cells = 0;
  std::size_t unknown_cells = 0;
};

/// Missing tokens encode as an all-zero group and are counted. Throws
/// ConfigError when the row layout does not match the spec's columns.
EncodedCategoricals apply_encoding(const EncoderSpec& spec, const LagWindowSet& set,
                                   std::span<const std::size_t> rows);

}  // namespace seerisk
