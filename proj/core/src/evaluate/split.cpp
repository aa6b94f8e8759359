#include "seerisk/evaluate/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seerisk/common.hpp"

namespace seerisk {

namespace {

// floor(fraction * n) with a small allowance so that 0.7 * 10 is 7, not 6.
std::size_t seats(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1, got " +
                      format_double(train_fraction));
  }
}

std::vector<std::size_t> stratified_train_counts(std::span<const std::size_t> class_sizes,
                                                 double train_fraction) {
  std::size_t n = std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  std::size_t total = seats(train_fraction, n);
  std::vector<std::size_t> counts(class_sizes.size());
  std::vector<double> remainder(class_sizes.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    double exact = train_fraction * static_cast<double>(class_sizes[c]);
    counts[c] = std::min(seats(train_fraction, class_sizes[c]), class_sizes[c]);
    remainder[c] = exact - static_cast<double>(counts[c]);
    assigned += counts[c];
  }
  std::vector<std::size_t> order(class_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (assigned < total) {
    bool placed = false;
    for (auto c : order) {
      if (assigned == total) break;
      if (counts[c] < class_sizes[c]) {
        ++counts[c];
        ++assigned;
        placed = true;
      }
    }
    if (!placed) break;
  }
  return counts;
}

TrainTestSplit stratified_split(std::span<const int> labels, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = labels.size();
  const std::size_t n_train = seats(spec.train_fraction, n);
  if (n_train == 0 || n_train == n) {
    throw DataError("a " + format_double(spec.train_fraction) + " split of " + std::to_string(n) +
                    " rows leaves the train or test side empty");
  }

  std::vector<bool> in_train(n, false);
  if (spec.stratify) {
    std::vector<std::vector<std::size_t>> members(kNumClasses);
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_valid_risk(labels[i])) {
        throw DataError("row " + std::to_string(i) + " has risk label " + std::to_string(labels[i]));
      }
      members[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    }
    std::vector<std::size_t> sizes(kNumClasses);
    for (std::size_t c = 0; c < sizes.size(); ++c) sizes[c] = members[c].size();
    auto counts = stratified_train_counts(sizes, spec.train_fraction);
    for (std::size_t c = 0; c < members.size(); ++c) {
      Rng rng(mix_seed(spec.seed, 300 + c));
      rng.shuffle(members[c]);
      for (std::size_t k = 0; k < counts[c]; ++k) in_train[members[c][k]] = true;
    }
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    Rng rng(mix_seed(spec.seed, 300));
    rng.shuffle(all);
    for (std::size_t k = 0; k < n_train; ++k) in_train[all[k]] = true;
  }

  TrainTestSplit out;
  out.train.reserve(n_train);
  out.test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.train : out.test).push_back(i);
  return out;
}

}  // namespace seerisk
