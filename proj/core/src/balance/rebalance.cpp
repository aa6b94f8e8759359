#include <algorithm>
#include <cmath>

#include "seerisk/balance/smote.hpp"

namespace seerisk {

std::array<std::size_t, kNumClasses> rebalance_targets(const RebalancePolicy& policy,
                                                       std::size_t n_rows) {
  if (policy.targets) {
    for (std::size_t t : *policy.targets) {
      if (t < 1) throw ConfigError("rebalance targets must be at least 1");
    }
    return *policy.targets;
  }
  const auto uniform = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_rows) / static_cast<double>(kNumClasses)));
  std::array<std::size_t, kNumClasses> t;
  t.fill(std::max<std::size_t>(uniform, 1));
  return t;
}

RebalanceResult rebalance(const Matrix& x, std::span<const int> y, const RebalancePolicy& policy,
                          std::span<const OneHotGroup> groups) {
  if (x.rows() != y.size()) throw ConfigError("rebalance: feature and label counts differ");
  if (policy.k == 0) throw ConfigError("rebalance: k must be at least 1");
  RebalanceResult out;
  out.before = class_histogram(y);
  const auto targets = rebalance_targets(policy, y.size());

  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i] - 1)].push_back(i);
  for (int c = 0; c < kNumClasses; ++c) {
    if (members[static_cast<std::size_t>(c)].empty()) {
      throw DataError("rebalance: class " + std::to_string(c + 1) + " has no training rows");
    }
  }

  // Surviving real rows, in input order.
  std::vector<bool> keep(y.size(), false);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& m = members[static_cast<std::size_t>(c)];
    const std::size_t target = targets[static_cast<std::size_t>(c)];
    if (m.size() <= target) {
      for (std::size_t i : m) keep[i] = true;
    } else {
      for (std::size_t pos : random_undersample(m.size(), target,
                                                mix_seed(policy.seed, 100 + static_cast<unsigned>(c)))) {
        keep[m[pos]] = true;
      }
    }
  }
  out.x = Matrix(0, x.cols());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!keep[i]) continue;
    out.x.append_row(x.row(i));
    out.y.push_back(y[i]);
  }
  out.n_original = out.y.size();

  for (int c = 0; c < kNumClasses; ++c) {
    const auto& m = members[static_cast<std::size_t>(c)];
    const std::size_t target = targets[static_cast<std::size_t>(c)];
    if (m.size() >= target) continue;
    const std::size_t n_new = target - m.size();
    if (m.size() == 1) {
      if (!policy.allow_duplication_fallback) {
        throw DataError("rebalance: class " + std::to_string(c + 1) +
                        " has a single row; SMOTE needs two (enable allow_duplication_fallback)");
      }
      for (std::size_t s = 0; s < n_new; ++s) {
        out.x.append_row(x.row(m[0]));
        out.y.push_back(c + 1);
      }
      continue;
    }
    Matrix cls = x.select_rows(m);
    auto synth = smote_oversample(cls, n_new, policy.k, mix_seed(policy.seed, 200 + static_cast<unsigned>(c)),
                                  groups);
    for (std::size_t s = 0; s < synth.rows.rows(); ++s) {
      out.x.append_row(synth.rows.row(s));
      out.y.push_back(c + 1);
    }
  }
  out.after = class_histogram(out.y);
  return out;
}

}  // namespace seerisk
