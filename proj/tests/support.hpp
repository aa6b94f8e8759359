#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "seerisk/balance/smote.hpp"
#include "seerisk/common.hpp"
#include "seerisk/domain/panel.hpp"
#include "seerisk/learn/tree.hpp"

namespace seerisk::testing {

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int distinct = 0) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) {
    v = distinct > 0 ? static_cast<double>(rng.uniform_index(static_cast<std::size_t>(distinct)))
                     : rng.uniform01() * 10.0 - 5.0;
  }
  return m;
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n, int classes = kNumClasses) {
  std::vector<int> y(n);
  for (auto& v : y) v = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(classes)));
  return y;
}

// Brute-force Gini split: every column, every midpoint, recomputing the
// child histograms from scratch. Gains are compared as doubles with a tiny
// tolerance, so ties resolve the same way as the exact implementation.
struct OracleSplit {
  std::size_t column = 0;
  double threshold = 0;
  double gain = 0;
};

inline double oracle_gini(const std::vector<double>& counts) {
  double n = 0;
  for (double c : counts) n += c;
  double s = 1;
  for (double c : counts) s -= (c / n) * (c / n);
  return s;
}

inline std::optional<OracleSplit> oracle_best_split(const Matrix& x, std::span<const int> y,
                                                    std::span<const std::size_t> rows,
                                                    std::span<const std::size_t> columns,
                                                    std::size_t min_leaf) {
  std::vector<double> parent(kNumClasses, 0);
  for (auto r : rows) parent[static_cast<std::size_t>(y[r] - 1)] += 1;
  const double n = static_cast<double>(rows.size());
  const double g0 = oracle_gini(parent);
  std::optional<OracleSplit> best;
  for (auto c : columns) {
    std::vector<double> values;
    for (auto r : rows) values.push_back(x(r, c));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double t = values[i] + (values[i + 1] - values[i]) / 2;
      std::vector<double> left(kNumClasses, 0), right(kNumClasses, 0);
      double nl = 0, nr = 0;
      for (auto r : rows) {
        if (x(r, c) <= t) {
          left[static_cast<std::size_t>(y[r] - 1)] += 1;
          nl += 1;
        } else {
          right[static_cast<std::size_t>(y[r] - 1)] += 1;
          nr += 1;
        }
      }
      if (nl < static_cast<double>(min_leaf) || nr < static_cast<double>(min_leaf)) continue;
      const double gain = g0 - (nl / n) * oracle_gini(left) - (nr / n) * oracle_gini(right);
      if (gain <= 1e-12) continue;
      if (!best || gain > best->gain + 1e-12) best = OracleSplit{c, t, gain};
    }
  }
  return best;
}

// O(n^2) k nearest neighbours: full distance table, stable sort by (distance, index).
inline std::vector<std::size_t> oracle_knn(const Matrix& points, std::size_t row, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t j = 0; j < points.rows(); ++j) {
    if (j == row) continue;
    double s = 0;
    for (std::size_t c = 0; c < points.cols(); ++c) {
      const double diff = points(row, c) - points(j, c);
      s += diff * diff;
    }
    d.emplace_back(s, j);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, d.size()); ++i) out.push_back(d[i].second);
  return out;
}

// entity_id, period, nature (categorical), assets, members (count), risk.
inline ColumnSchema tiny_schema() {
  using K = ColumnKind;
  return ColumnSchema({{"entity_id", K::identifier, {}, false},
                       {"period", K::period, {}, false},
                       {"nature", K::categorical, {}, true},
                       {"assets", K::continuous, {}, true},
                       {"members", K::count, {}, true},
                       {"risk", K::target, {}, true}});
}

/// One record per listed period, values derived from the period so lags are checkable.
inline void add_entity(PanelDataset& data, const std::string& id, std::initializer_list<const char*> periods,
                       std::optional<int> label = 2, const std::string& nature = "coop") {
  for (const char* text : periods) {
    auto p = parse_period(text);
    auto rec = data.blank_record(id, p);
    rec.values[2] = nature;
    rec.values[3] = static_cast<double>(p.value());
    rec.values[4] = 10.0;
    rec.risk_label = label;
    data.records.push_back(std::move(rec));
  }
}

}  // namespace seerisk::testing
