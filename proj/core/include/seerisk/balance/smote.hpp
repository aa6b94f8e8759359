#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seerisk/common.hpp"

namespace seerisk {

inline constexpr std::size_t kDefaultSmoteNeighbors = 5;

/// Provenance of one synthetic row: parent + u * (neighbor - parent).
struct SmoteDraw {
  std::size_t parent = 0;
  std::size_t neighbor = 0;
  double u = 0;
};

struct SmoteResult {
  Matrix rows;
  std::vector<SmoteDraw> draws;
};

/// Indices of the k nearest rows to `row` by Euclidean distance, excluding
/// itself; ties go to the lower index.
std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t row, std::size_t k);

/// Synthesizes `n_new` rows from one class. Each picks a uniform parent, one
/// of its k nearest same-class neighbours (k capped at class size - 1) and
/// u ~ U[0, 1). One-hot groups are re-snapped to their argmax afterwards.
/// Throws DataError when the class has fewer than two rows.
SmoteResult smote_oversample(const Matrix& class_rows, std::size_t n_new, std::size_t k,
                             std::uint64_t seed, std::span<const OneHotGroup> groups = {});

/// Uniform sample of `n_keep` of `class_size` row positions, without
/// replacement, returned in ascending order.
std::vector<std::size_t> random_undersample(std::size_t class_size, std::size_t n_keep,
                                            std::uint64_t seed);

/// Sets each group to 1 at its largest entry (lowest column on ties), 0 elsewhere.
void snap_onehot(std::span<double> row, std::span<const OneHotGroup> groups);

struct RebalancePolicy {
  /// Per-class targets for classes 1..5; nullopt = uniform round(n / 5).
  std::optional<std::array<std::size_t, kNumClasses>> targets;
  std::size_t k = kDefaultSmoteNeighbors;
  std::uint64_t seed = 0;
  /// Lets single-member classes grow by exact duplication instead of failing.
  bool allow_duplication_fallback = false;

  friend bool operator==(const RebalancePolicy&, const RebalancePolicy&) = default;
};

struct RebalanceResult {
  Matrix x;
  std::vector<int> y;
  /// Rows [0, n_original) are surviving real rows in input order; the rest
  /// are synthetic, grouped by class.
  std::size_t n_original = 0;
  ClassCounts before{};
  ClassCounts after{};
};

std::array<std::size_t, kNumClasses> rebalance_targets(const RebalancePolicy& policy,
                                                       std::size_t n_rows);

/// Brings every class to its target: SMOTE for classes below, random
/// undersampling for classes above. Meant for training rows only.
RebalanceResult rebalance(const Matrix& x, std::span<const int> y, const RebalancePolicy& policy,
                          std::span<const OneHotGroup> groups = {});

}  // namespace seerisk
