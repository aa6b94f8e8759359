#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seerisk {

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratify = true;

  /// Throws ConfigError unless 0 < train_fraction < 1.
  void validate() const;
  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct TrainTestSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Train size is floor(fraction * n). With stratification each class gets
/// floor(fraction * n_c) seats and the leftover seats go to the largest
/// fractional remainders (ties to the lower class); members are drawn
/// uniformly under the seed. Throws DataError if either side would be empty.
TrainTestSplit stratified_split(std::span<const int> labels, const SplitSpec& spec);

/// Seats per class for a stratified split of the given class sizes.
std::vector<std::size_t> stratified_train_counts(std::span<const std::size_t> class_sizes,
                                                 double train_fraction);

}  // namespace seerisk
