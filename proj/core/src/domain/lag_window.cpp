#include "seerisk/domain/lag_window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "seerisk/common.hpp"

namespace seerisk {

std::string lagged_name(std::string_view column, int lag) {
  return std::string(column) + "_lag" + std::to_string(lag);
}

namespace {

std::optional<std::size_t> index_in(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

struct Layout {
  std::vector<std::size_t> numeric;      // schema indices
  std::vector<std::size_t> categorical;  // schema indices
};

Layout make_layout(const ColumnSchema& schema, LagWindowSet& set) {
  Layout layout;
  for (std::size_t i : schema.feature_indices()) {
    if (schema[i].kind == ColumnKind::categorical) {
      layout.categorical.push_back(i);
      set.categorical_columns.push_back(schema[i].name);
    } else {
      layout.numeric.push_back(i);
      set.numeric_columns.push_back(schema[i].name);
    }
  }
  return layout;
}

/// Record indices per entity, sorted by period; entity map is ordered by id.
std::map<std::string, std::vector<std::size_t>> group_by_entity(const PanelDataset& data) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    groups[data.records[i].entity_id].push_back(i);
  }
  for (auto& [id, idx] : groups) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return data.records[a].period < data.records[b].period;
    });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      if (data.records[idx[k]].period == data.records[idx[k - 1]].period) {
        throw DataError("entity '" + id + "' has two records for period " +
                        format_period(data.records[idx[k]].period));
      }
    }
  }
  return groups;
}

/// Fills the lag blocks from records idx[first .. first+window). Returns the
/// fraction of missing numeric cells.
double fill_lags(const PanelDataset& data, const Layout& layout, const std::vector<std::size_t>& idx,
                 std::size_t first, int window, SupervisedRow& row) {
  const std::size_t nn = layout.numeric.size();
  const std::size_t nc = layout.categorical.size();
  row.numeric.assign(static_cast<std::size_t>(window) * nn, std::numeric_limits<double>::quiet_NaN());
  row.categorical.assign(static_cast<std::size_t>(window) * nc, std::string());
  std::size_t missing = 0;
  for (int pos = 0; pos < window; ++pos) {
    const auto& rec = data.records[idx[first + static_cast<std::size_t>(pos)]];
    for (std::size_t c = 0; c < nn; ++c) {
      const auto& v = rec.values[layout.numeric[c]];
      if (const auto* d = std::get_if<double>(&v); d && std::isfinite(*d)) {
        row.numeric[static_cast<std::size_t>(pos) * nn + c] = *d;
      } else {
        ++missing;
      }
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (const auto* s = std::get_if<std::string>(&rec.values[layout.categorical[c]])) {
        row.categorical[static_cast<std::size_t>(pos) * nc + c] = *s;
      }
    }
  }
  const std::size_t cells = static_cast<std::size_t>(window) * nn;
  return cells == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(cells);
}

void check_window(int window) {
  if (window < 1) throw ConfigError("lag window must be at least 1, got " + std::to_string(window));
}

}  // namespace

std::optional<std::size_t> LagWindowSet::numeric_index(std::string_view name) const {
  return index_in(numeric_columns, name);
}
std::optional<std::size_t> LagWindowSet::categorical_index(std::string_view name) const {
  return index_in(categorical_columns, name);
}
std::optional<std::size_t> LagWindowSet::derived_index(std::string_view name) const {
  return index_in(derived_columns, name);
}

std::vector<int> LagWindowSet::targets() const {
  std::vector<int> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(r.target_risk);
  return y;
}

LagWindowSet build_lag_windows(const PanelDataset& data, int window, double max_missing_fraction) {
  check_window(window);
  LagWindowSet set;
  set.window = window;
  const Layout layout = make_layout(data.schema, set);
  const auto w = static_cast<std::size_t>(window);

  for (const auto& [id, idx] : group_by_entity(data)) {
    std::size_t run_start = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (j > 0 && data.records[idx[j]].period != data.records[idx[j - 1]].period.next()) {
        run_start = j;
      }
      if (j - run_start < w) continue;
      ++set.stats.candidates;
      const auto& target = data.records[idx[j]];
      if (!target.risk_label) {
        ++set.stats.dropped_missing_target;
        continue;
      }
      if (!is_valid_risk(*target.risk_label)) {
        throw DataError("entity '" + id + "' period " + format_period(target.period) +
                        " has risk label " + std::to_string(*target.risk_label));
      }
      SupervisedRow row;
      row.entity_id = id;
      row.target_period = target.period;
      row.target_risk = *target.risk_label;
      if (fill_lags(data, layout, idx, j - w, window, row) > max_missing_fraction) {
        ++set.stats.dropped_sparse;
        continue;
      }
      set.rows.push_back(std::move(row));
    }
  }
  set.stats.emitted = set.rows.size();
  return set;
}

ScoringWindows build_scoring_windows(const PanelDataset& data, int window,
                                     double max_missing_fraction) {
  check_window(window);
  ScoringWindows out;
  auto& set = out.windows;
  set.window = window;
  const Layout layout = make_layout(data.schema, set);
  const auto w = static_cast<std::size_t>(window);

  for (const auto& [id, idx] : group_by_entity(data)) {
    std::size_t run = 1;
    while (run < idx.size() && run < w &&
           data.records[idx[idx.size() - run]].period ==
               data.records[idx[idx.size() - run - 1]].period.next()) {
      ++run;
    }
    if (run < w) {
      out.ineligible.push_back({id, std::string(kInsufficientHistory)});
      continue;
    }
    ++set.stats.candidates;
    SupervisedRow row;
    row.entity_id = id;
    row.target_period = data.records[idx.back()].period.next();
    if (fill_lags(data, layout, idx, idx.size() - w, window, row) > max_missing_fraction) {
      ++set.stats.dropped_sparse;
      out.ineligible.push_back({id, std::string(kTooManyMissing)});
      continue;
    }
    set.rows.push_back(std::move(row));
  }
  set.stats.emitted = set.rows.size();
  return out;
}

}  // namespace seerisk
