#include "seerisk/learn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seerisk {

__extension__ using u128 = unsigned __int128;

double gini(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) throw DataError("gini of an empty count vector");
  double sum_sq = 0;
  for (auto c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(n);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

int majority_class(const ClassCounts& counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return static_cast<int>(best) + 1;
}

std::size_t FeaturesPerSplit::resolve(std::size_t n_features) const {
  std::size_t k = n_features;
  switch (mode) {
    case Mode::all: break;
    case Mode::sqrt:
      k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features))));
      break;
    case Mode::fixed: k = count; break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n_features, 1));
}

std::string FeaturesPerSplit::to_string() const {
  switch (mode) {
    case Mode::all: return "all";
    case Mode::sqrt: return "sqrt";
    case Mode::fixed: return std::to_string(count);
  }
  return "?";
}

FeaturesPerSplit FeaturesPerSplit::parse(const std::string& text) {
  if (text == "all") return all();
  if (text == "sqrt") return sqrt();
  try {
    std::size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos == text.size() && v >= 1) return fixed(static_cast<std::size_t>(v));
  } catch (const std::exception&) {
  }
  throw ConfigError("features_per_split must be 'all', 'sqrt' or a positive integer, got '" + text + "'");
}

void TreeParams::validate() const {
  if (max_depth && *max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (min_samples_leaf > min_samples_split) {
    throw ConfigError("min_samples_leaf must not exceed min_samples_split");
  }
  if (features_per_split.mode == FeaturesPerSplit::Mode::fixed && features_per_split.count < 1) {
    throw ConfigError("features_per_split must be >= 1");
  }
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
  if (nodes_.empty()) throw DataError("decision tree has no nodes");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    const auto& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= n_features_ || node.left <= i || node.right <= i ||
        node.left >= n || node.right >= n) {
      throw DataError("decision tree node " + std::to_string(i) + " is malformed");
    }
  }
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes_[i];
}

void DecisionTree::accumulate_importance(std::span<double> out) const {
  std::vector<double> local(n_features_, 0.0);
  auto weighted = [](const ClassCounts& c) {
    std::uint64_t n = 0;
    for (auto v : c) n += v;
    return n == 0 ? 0.0 : static_cast<double>(n) * gini(c);
  };
  double total = 0;
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    double dec = weighted(node.counts) - weighted(nodes_[static_cast<std::size_t>(node.left)].counts) -
                 weighted(nodes_[static_cast<std::size_t>(node.right)].counts);
    local[static_cast<std::size_t>(node.feature)] += dec;
    total += dec;
  }
  if (total <= 0) return;
  for (std::size_t f = 0; f < n_features_; ++f) out[f] += local[f] / total;
}

namespace detail {

ColumnMajor::ColumnMajor(const Matrix& m)
    : rows(m.rows()), cols(m.cols()), data(m.rows() * m.cols()), ranks(m.rows() * m.cols()), distinct(m.cols()) {
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      if (std::isnan(row[c])) {
        throw DataError("feature matrix has NaN at row " + std::to_string(r) + ", column " + std::to_string(c));
      }
      data[c * rows + r] = row[c];
    }
  }
  std::vector<std::uint32_t> order(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    const double* v = column(c);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [v](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });
    auto& values = distinct[c];
    std::uint32_t* rank = ranks.data() + c * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      double value = v[order[i]];
      if (values.empty() || value != values.back()) values.push_back(value);
      rank[order[i]] = static_cast<std::uint32_t>(values.size() - 1);
    }
  }
}

}  // namespace detail

namespace {

/// Split quality as the exact rational (sum l^2 / nl + sum r^2 / nr); larger
/// means lower weighted Gini. Stored as numerator / denominator.
struct Score {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

bool better(const Score& a, const Score& b) {
  return static_cast<u128>(a.num) * b.den > static_cast<u128>(b.num) * a.den;
}

/// A distinct training row and how many times the bootstrap drew it.
struct WeightedRow {
  std::uint32_t row;
  std::uint32_t weight;
};

class SplitFinder {
 public:
  SplitFinder(const detail::ColumnMajor& x, std::span<const int> y) : x_(x), y_(y) {}

  std::optional<Split> find(std::span<const WeightedRow> rows, std::span<const std::size_t> columns,
                            std::size_t min_leaf) {
    std::uint64_t n = 0;
    ClassCounts total{};
    for (const auto& r : rows) {
      total[cls(r.row)] += r.weight;
      n += r.weight;
    }
    if (n < 2) return std::nullopt;
    std::uint64_t parent_sq = 0;
    for (auto c : total) parent_sq += c * c;

    Scan scan{total, parent_sq, n, min_leaf, Score{parent_sq, n}, std::nullopt};
    for (std::size_t col : columns) {
      const auto& values = x_.distinct[col];
      if (values.size() < 2) continue;
      if (values.size() <= rows.size()) {
        scan_by_counting(scan, col, rows);
      } else {
        scan_by_sorting(scan, col, rows);
      }
    }
    auto best = scan.best;
    if (best) {
      double s = static_cast<double>(scan.best_score.num) / static_cast<double>(scan.best_score.den);
      double p = static_cast<double>(parent_sq) / static_cast<double>(n);
      best->gain = (s - p) / static_cast<double>(n);
    }
    return best;
  }

 private:
  struct Scan {
    ClassCounts total;
    std::uint64_t parent_sq;
    std::uint64_t n;
    std::size_t min_leaf;
    Score best_score;
    std::optional<Split> best;
  };

  // Running left/right class counts and their sums of squares.
  struct Sweep {
    ClassCounts left{};
    ClassCounts right{};
    std::uint64_t a = 0;  // sum of squares, left
    std::uint64_t b = 0;  // sum of squares, right
    std::uint64_t nl = 0;

    void move_left(std::size_t k, std::uint64_t w) {
      a += 2 * left[k] * w + w * w;
      left[k] += w;
      b -= 2 * right[k] * w - w * w;
      right[k] -= w;
      nl += w;
    }
  };

  std::size_t cls(std::uint32_t row) const { return static_cast<std::size_t>(y_[row] - 1); }

  // Candidate threshold between distinct values lo_rank < hi_rank, with the
  // sweep holding everything up to lo_rank on the left.
  static void consider(Scan& scan, const Sweep& sw, std::size_t col, const std::vector<double>& values,
                       std::uint32_t lo_rank, std::uint32_t hi_rank) {
    const std::uint64_t nl = sw.nl, nr = scan.n - sw.nl;
    if (nl < scan.min_leaf || nr < scan.min_leaf) return;
    Score s{sw.a * nr + sw.b * nl, nl * nr};
    if (!better(s, scan.best_score)) return;
    scan.best_score = s;
    double lo = values[lo_rank], hi = values[hi_rank];
    double t = std::midpoint(lo, hi);
    if (t >= hi) t = lo;
    scan.best = Split{col, t, 0.0, static_cast<std::size_t>(nl), static_cast<std::size_t>(nr)};
  }

  void scan_by_counting(Scan& scan, std::size_t col, std::span<const WeightedRow> rows) {
    const auto& values = x_.distinct[col];
    const std::uint32_t* rank = x_.rank_column(col);
    hist_.assign(values.size(), {});
    for (const auto& r : rows) hist_[rank[r.row]][cls(r.row)] += r.weight;
    Sweep sw;
    sw.right = scan.total;
    sw.b = scan.parent_sq;
    bool have_prev = false;
    std::uint32_t prev = 0;
    for (std::uint32_t v = 0; v < values.size(); ++v) {
      const auto& h = hist_[v];
      if ((h[0] | h[1] | h[2] | h[3] | h[4]) == 0) continue;
      if (have_prev) consider(scan, sw, col, values, prev, v);
      for (std::size_t k = 0; k < kNumClasses; ++k) {
        if (h[k]) sw.move_left(k, h[k]);
      }
      have_prev = true;
      prev = v;
    }
  }

  void scan_by_sorting(Scan& scan, std::size_t col, std::span<const WeightedRow> rows) {
    const auto& values = x_.distinct[col];
    const std::uint32_t* rank = x_.rank_column(col);
    // rank in the high word; weight and class below.
    keys_.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      keys_[i] = (static_cast<std::uint64_t>(rank[rows[i].row]) << 32) |
                 (static_cast<std::uint64_t>(rows[i].weight) << 3) | cls(rows[i].row);
    }
    sort_by_rank(values.size());
    Sweep sw;
    sw.right = scan.total;
    sw.b = scan.parent_sq;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      sw.move_left(keys_[i] & 7u, (keys_[i] & 0xFFFFFFFFu) >> 3);
      if (i + 1 == keys_.size()) break;
      auto lo = static_cast<std::uint32_t>(keys_[i] >> 32), hi = static_cast<std::uint32_t>(keys_[i + 1] >> 32);
      if (lo != hi) consider(scan, sw, col, values, lo, hi);
    }
  }

  // Only grouping by rank matters to the sweep, so an LSD radix pass over
  // the rank bits replaces a comparison sort.
  void sort_by_rank(std::size_t n_ranks) {
    if (keys_.size() < 64) {
      std::sort(keys_.begin(), keys_.end());
      return;
    }
    buffer_.resize(keys_.size());
    for (unsigned shift = 32; shift < 64 && (n_ranks - 1) >> (shift - 32) != 0; shift += 8) {
      std::array<std::size_t, 257> offset{};
      for (auto k : keys_) ++offset[((k >> shift) & 0xFF) + 1];
      for (std::size_t d = 1; d < offset.size(); ++d) offset[d] += offset[d - 1];
      for (auto k : keys_) buffer_[offset[(k >> shift) & 0xFF]++] = k;
      keys_.swap(buffer_);
    }
  }

  const detail::ColumnMajor& x_;
  std::span<const int> y_;
  std::vector<std::array<std::uint32_t, kNumClasses>> hist_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> buffer_;
};

class TreeBuilder {
 public:
  TreeBuilder(const detail::ColumnMajor& x, std::span<const int> y, const TreeParams& params, Rng& rng)
      : x_(x), y_(y), params_(params), rng_(rng), finder_(x, y) {
    n_candidates_ = params.features_per_split.resolve(x.cols);
    pool_.resize(x.cols);
  }

  DecisionTree build(const std::vector<std::size_t>& rows) {
    std::vector<std::uint32_t> draws(x_.rows, 0);
    for (auto r : rows) {
      if (r >= x_.rows) throw ConfigError("row index out of range: " + std::to_string(r));
      ++draws[r];
    }
    for (std::size_t r = 0; r < draws.size(); ++r) {
      if (draws[r]) rows_.push_back({static_cast<std::uint32_t>(r), draws[r]});
    }
    grow(0, rows_.size(), 0);
    return DecisionTree(std::move(nodes_), x_.cols);
  }

 private:
  std::int32_t grow(std::size_t begin, std::size_t end, int depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    ClassCounts counts{};
    std::uint64_t n = 0;
    for (std::size_t i = begin; i < end; ++i) {
      counts[static_cast<std::size_t>(y_[rows_[i].row] - 1)] += rows_[i].weight;
      n += rows_[i].weight;
    }
    nodes_[static_cast<std::size_t>(id)].counts = counts;

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || n < params_.min_samples_split || (params_.max_depth && depth >= *params_.max_depth)) {
      return id;
    }
    std::span<const WeightedRow> node_rows(rows_.data() + begin, end - begin);
    auto split = finder_.find(node_rows, sample_columns(), params_.min_samples_leaf);
    if (!split) return id;

    const double* v = x_.column(split->column);
    const double t = split->threshold;
    auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](const WeightedRow& r) { return v[r.row] <= t; });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());

    const std::int32_t left = grow(begin, mid, depth + 1);
    const std::int32_t right = grow(mid, end, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = static_cast<int>(split->column);
    node.threshold = t;
    node.left = left;
    node.right = right;
    return id;
  }

  std::span<const std::size_t> sample_columns() {
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    if (n_candidates_ >= pool_.size()) return pool_;
    for (std::size_t i = 0; i < n_candidates_; ++i) {
      std::size_t j = i + rng_.uniform_index(pool_.size() - i);
      std::swap(pool_[i], pool_[j]);
    }
    std::sort(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(n_candidates_));
    return {pool_.data(), n_candidates_};
  }

  const detail::ColumnMajor& x_;
  std::span<const int> y_;
  const TreeParams& params_;
  Rng& rng_;
  SplitFinder finder_;
  std::size_t n_candidates_ = 1;
  std::vector<std::size_t> pool_;
  std::vector<WeightedRow> rows_;
  std::vector<TreeNode> nodes_;
};

void check_labels(const detail::ColumnMajor& x, std::span<const int> y) {
  if (x.rows != y.size()) {
    throw ConfigError("feature rows (" + std::to_string(x.rows) + ") and labels (" +
                      std::to_string(y.size()) + ") differ");
  }
  for (int label : y) {
    if (!is_valid_risk(label)) throw DataError("training label out of range 1..5: " + std::to_string(label));
  }
}

}  // namespace

std::optional<Split> best_split(const Matrix& x, std::span<const int> y,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_columns,
                                std::size_t min_samples_leaf) {
  detail::ColumnMajor cm(x);
  check_labels(cm, y);
  std::vector<std::size_t> cols(candidate_columns.begin(), candidate_columns.end());
  std::sort(cols.begin(), cols.end());
  std::vector<std::size_t> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<WeightedRow> weighted;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (sorted[i] >= cm.rows) throw ConfigError("row index out of range: " + std::to_string(sorted[i]));
    weighted.push_back({static_cast<std::uint32_t>(sorted[i]), static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  SplitFinder finder(cm, y);
  return finder.find(weighted, cols, std::max<std::size_t>(min_samples_leaf, 1));
}

DecisionTree detail::fit_tree(const ColumnMajor& x, std::span<const int> y, const TreeParams& params,
                              Rng& rng, std::vector<std::size_t> rows) {
  params.validate();
  check_labels(x, y);
  if (rows.empty()) throw DataError("cannot fit a decision tree on zero rows");
  TreeBuilder builder(x, y, params, rng);
  return builder.build(rows);
}

DecisionTree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& params, Rng& rng,
                      std::span<const std::size_t> rows) {
  std::vector<std::size_t> r(rows.begin(), rows.end());
  if (r.empty()) {
    r.resize(x.rows());
    std::iota(r.begin(), r.end(), std::size_t{0});
  }
  return detail::fit_tree(detail::ColumnMajor(x), y, params, rng, std::move(r));
}

}  // namespace seerisk
