#include "seerisk/balance/smote.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace seerisk {

std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t row, std::size_t k) {
  const std::size_t n = points.rows();
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n);
  auto x = points.row(row);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == row) continue;
    auto p = points.row(j);
    double d = 0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      double t = p[c] - x[c];
      d += t * t;
    }
    dist.emplace_back(d, j);
  }
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

void snap_onehot(std::span<double> row, std::span<const OneHotGroup> groups) {
  for (const auto& g : groups) {
    if (g.empty()) continue;
    std::size_t best = g.front();
    for (std::size_t c : g) {
      if (row[c] > row[best]) best = c;
    }
    for (std::size_t c : g) row[c] = c == best ? 1.0 : 0.0;
  }
}

SmoteResult smote_oversample(const Matrix& class_rows, std::size_t n_new, std::size_t k,
                             std::uint64_t seed, std::span<const OneHotGroup> groups) {
  const std::size_t n = class_rows.rows();
  if (n < 2) {
    throw DataError("SMOTE needs at least 2 rows in a class, got " + std::to_string(n) +
                    "; enable the duplication fallback to grow single-member classes");
  }
  if (k == 0) throw ConfigError("SMOTE neighbour count must be at least 1");
  const std::size_t k_eff = std::min(k, n - 1);

  SmoteResult out;
  out.rows = Matrix(n_new, class_rows.cols());
  out.draws.reserve(n_new);
  std::unordered_map<std::size_t, std::vector<std::size_t>> knn_cache;
  Rng rng(seed);
  for (std::size_t s = 0; s < n_new; ++s) {
    const std::size_t parent = rng.uniform_index(n);
    auto it = knn_cache.find(parent);
    if (it == knn_cache.end()) it = knn_cache.emplace(parent, nearest_neighbors(class_rows, parent, k_eff)).first;
    const std::size_t neighbor = it->second[rng.uniform_index(it->second.size())];
    const double u = rng.uniform01();

    auto x = class_rows.row(parent);
    auto nn = class_rows.row(neighbor);
    auto dst = out.rows.row(s);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = x[c] + u * (nn[c] - x[c]);
    snap_onehot(dst, groups);
    out.draws.push_back({parent, neighbor, u});
  }
  return out;
}

std::vector<std::size_t> random_undersample(std::size_t class_size, std::size_t n_keep,
                                            std::uint64_t seed) {
  if (n_keep > class_size) {
    throw DataError("cannot keep " + std::to_string(n_keep) + " rows of a class with " +
                    std::to_string(class_size));
  }
  std::vector<std::size_t> idx(class_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first n_keep slots become the sample.
  for (std::size_t i = 0; i < n_keep; ++i) {
    std::size_t j = i + rng.uniform_index(class_size - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n_keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace seerisk
