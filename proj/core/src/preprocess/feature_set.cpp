#include "seerisk/preprocess/feature_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seerisk {

std::string_view to_string(FeatureVariant v) {
  switch (v) {
    case FeatureVariant::M1: return "M1";
    case FeatureVariant::M2: return "M2";
    case FeatureVariant::M3: return "M3";
  }
  return "?";
}

FeatureVariant feature_variant_from_string(std::string_view text) {
  for (auto v : {FeatureVariant::M1, FeatureVariant::M2, FeatureVariant::M3}) {
    if (to_string(v) == text) return v;
  }
  throw ConfigError("unknown feature variant '" + std::string(text) + "' (M1|M2|M3)");
}

std::string_view to_string(ImputationPolicy p) {
  return p == ImputationPolicy::median ? "median" : "zero";
}

ImputationPolicy imputation_policy_from_string(std::string_view text) {
  if (text == "median") return ImputationPolicy::median;
  if (text == "zero") return ImputationPolicy::zero;
  throw ConfigError("unknown imputation policy '" + std::string(text) + "' (median|zero)");
}

std::vector<OneHotGroup> FeatureMatrix::onehot_groups() const {
  std::vector<OneHotGroup> groups;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    int g = columns[c].group;
    if (g < 0) continue;
    if (static_cast<std::size_t>(g) >= groups.size()) groups.resize(static_cast<std::size_t>(g) + 1);
    groups[static_cast<std::size_t>(g)].push_back(c);
  }
  std::erase_if(groups, [](const OneHotGroup& g) { return g.empty(); });
  return groups;
}

void prepare_features(LagWindowSet& set, const FeatureSetConfig& config, const MacroTable* macro) {
  if (config.variant == FeatureVariant::M1) return;
  compute_variations(set, config.variation_columns, config.cap);
  if (config.variant == FeatureVariant::M3) {
    if (!macro) throw ConfigError("feature set M3 requires a macro indicator table");
    enrich_macro(set, *macro);
  }
}

namespace {

bool is_camels(const FeatureSetConfig& config, const std::string& column) {
  return std::find(config.camels_columns.begin(), config.camels_columns.end(), column) !=
         config.camels_columns.end();
}

bool has_prefix(const std::vector<std::string>& names, std::string_view prefix) {
  return std::any_of(names.begin(), names.end(),
                     [&](const std::string& n) { return n.starts_with(prefix); });
}

double median_of(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lo + (hi - lo) / 2;
}

double numeric_value(const LagWindowSet& set, const SupervisedRow& row, const NumericSource& s) {
  return s.derived ? row.derived[s.index] : set.numeric_at(row, s.lag, s.index);
}

void check_layout(const LagWindowSet& set, const FittedPreprocessor& f) {
  if (!f.fitted) throw ConfigError("preprocessor has not been fitted");
  if (set.window != f.window || set.numeric_columns != f.numeric_columns ||
      set.categorical_columns != f.categorical_columns) {
    throw ConfigError("rows do not match the column layout the preprocessor was fitted on");
  }
  for (const auto& s : f.numeric_sources) {
    if (s.derived && (s.index >= set.derived_columns.size() ||
                      set.derived_columns[s.index] != f.derived_columns[s.index])) {
      throw ConfigError("rows lack derived feature '" + f.derived_columns[s.index] + "'");
    }
  }
}

/// Raw (unscaled, unimputed) numeric block for the given rows.
Matrix numeric_block(const LagWindowSet& set, std::span<const std::size_t> rows,
                     const std::vector<NumericSource>& sources) {
  Matrix m(rows.size(), sources.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = set.rows[rows[i]];
    for (std::size_t c = 0; c < sources.size(); ++c) m(i, c) = numeric_value(set, row, sources[c]);
  }
  return m;
}

}  // namespace

FittedPreprocessor fit_preprocessor(const LagWindowSet& set, std::span<const std::size_t> train_rows,
                                    const FeatureSetConfig& config) {
  if (train_rows.empty()) throw DataError("cannot fit preprocessing on zero training rows");
  const bool want_vbp = config.variant != FeatureVariant::M1;
  const bool want_m3 = config.variant == FeatureVariant::M3;
  if (want_vbp && !has_prefix(set.derived_columns, "vbp_")) {
    throw ConfigError("feature set " + std::string(to_string(config.variant)) +
                      " needs variation features; rows have none");
  }
  if (want_m3 && !has_prefix(set.derived_columns, "macro_")) {
    throw ConfigError("feature set M3 needs macro enrichment; rows have none");
  }

  FittedPreprocessor f;
  f.config = config;
  f.window = set.window;
  f.numeric_columns = set.numeric_columns;
  f.categorical_columns = set.categorical_columns;
  f.derived_columns = set.derived_columns;
  f.encoder = fit_encoder(set, train_rows);

  // Column order keeps each smaller variant a prefix of the larger ones:
  // base one-hots, base numerics, variations, rating one-hots, rating
  // numerics, macro indicators.
  std::vector<NumericSource> base_num, camels_num, vbp, macro;
  std::vector<ColumnInfo> base_num_info, camels_num_info, vbp_info, macro_info;
  std::size_t base_vars = 0, camels_vars = 0;

  for (std::size_t c = 0; c < set.numeric_columns.size(); ++c) {
    const auto& name = set.numeric_columns[c];
    const bool camels = is_camels(config, name);
    if (camels && !want_m3) continue;
    (camels ? camels_vars : base_vars)++;
    for (int lag = set.window; lag >= 1; --lag) {
      (camels ? camels_num : base_num).push_back({false, c, lag});
      (camels ? camels_num_info : base_num_info).push_back({lagged_name(name, lag), name, lag, "numeric", -1});
    }
  }
  std::size_t vbp_vars = 0, macro_vars = 0;
  for (std::size_t d = 0; d < set.derived_columns.size(); ++d) {
    const auto& name = set.derived_columns[d];
    if (want_vbp && name.starts_with("vbp_")) {
      vbp.push_back({true, d, 0});
      vbp_info.push_back({name, name.substr(4, name.rfind("_lag", name.rfind("_lag") - 1) - 4), 0,
                          "variation", -1});
      ++vbp_vars;
    } else if (want_m3 && name.starts_with("macro_")) {
      macro.push_back({true, d, 0});
      auto lag_pos = name.rfind("_lag");
      macro_info.push_back({name, name.substr(0, lag_pos), std::stoi(name.substr(lag_pos + 4)), "macro", -1});
      ++macro_vars;
    }
  }
  vbp_vars /= static_cast<std::size_t>(std::max(1, set.window - 1));
  macro_vars /= static_cast<std::size_t>(set.window);

  // One-hot groups from apply_encoding are ordered (column, lag descending).
  std::vector<ColumnInfo> base_cat_info, camels_cat_info;
  std::vector<std::size_t> base_groups, camels_groups;
  {
    std::size_t g = 0;
    for (const auto& enc : f.encoder.columns) {
      const bool camels = is_camels(config, enc.column);
      if (!camels || want_m3) (camels ? camels_vars : base_vars)++;
      for (int lag = set.window; lag >= 1; --lag, ++g) {
        if (camels && !want_m3) continue;
        (camels ? camels_groups : base_groups).push_back(g);
        auto& info = camels ? camels_cat_info : base_cat_info;
        for (std::size_t k = 0; k < enc.width(); ++k) {
          std::string cat = k < enc.categories.size() ? enc.categories[k] : std::string(kUnknownCategory);
          info.push_back({lagged_name(enc.column, lag) + "=" + cat, enc.column, lag, "onehot", -1});
        }
      }
    }
  }

  f.encoded_groups = base_groups;
  f.encoded_groups.insert(f.encoded_groups.end(), camels_groups.begin(), camels_groups.end());

  auto append = [&](std::vector<ColumnInfo>& dst, const std::vector<ColumnInfo>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };
  append(f.manifest, base_cat_info);
  append(f.manifest, base_num_info);
  append(f.manifest, vbp_info);
  append(f.manifest, camels_cat_info);
  append(f.manifest, camels_num_info);
  append(f.manifest, macro_info);

  // Group ids follow the order of one-hot columns in the manifest.
  {
    int group = -1;
    std::string last;
    for (auto& col : f.manifest) {
      if (col.transform != "onehot") continue;
      std::string key = lagged_name(col.source, col.lag);
      if (key != last) {
        ++group;
        last = key;
      }
      col.group = group;
    }
  }

  f.numeric_sources = base_num;
  f.numeric_sources.insert(f.numeric_sources.end(), vbp.begin(), vbp.end());
  f.numeric_sources.insert(f.numeric_sources.end(), camels_num.begin(), camels_num.end());
  f.numeric_sources.insert(f.numeric_sources.end(), macro.begin(), macro.end());
  f.base_variable_count = base_vars + vbp_vars + camels_vars + macro_vars;

  Matrix raw = numeric_block(set, train_rows, f.numeric_sources);
  f.impute_values.assign(raw.cols(), 0.0);
  if (config.imputation == ImputationPolicy::median) {
    std::vector<double> col;
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      col.clear();
      for (std::size_t r = 0; r < raw.rows(); ++r) {
        if (!std::isnan(raw(r, c))) col.push_back(raw(r, c));
      }
      f.impute_values[c] = median_of(col);
    }
  }
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      if (std::isnan(raw(r, c))) raw(r, c) = f.impute_values[c];
    }
  }
  f.scaler = fit_scaler(raw, config.scaler);
  f.fitted = true;
  return f;
}

FeatureMatrix materialize(const LagWindowSet& set, std::span<const std::size_t> rows,
                          const FittedPreprocessor& f) {
  check_layout(set, f);
  const auto& config = f.config;
  if (config.variant != FeatureVariant::M1 && !has_prefix(set.derived_columns, "vbp_")) {
    throw ConfigError("rows lack variation features required by " + std::string(to_string(config.variant)));
  }
  if (config.variant == FeatureVariant::M3 && !has_prefix(set.derived_columns, "macro_")) {
    throw ConfigError("rows lack macro enrichment required by M3");
  }

  FeatureMatrix fm;
  fm.columns = f.manifest;
  EncodedCategoricals enc = apply_encoding(f.encoder, set, rows);

  Matrix num = numeric_block(set, rows, f.numeric_sources);
  for (std::size_t r = 0; r < num.rows(); ++r) {
    for (std::size_t c = 0; c < num.cols(); ++c) {
      if (std::isnan(num(r, c))) {
        num(r, c) = f.impute_values[c];
        ++fm.imputed_cells;
      }
    }
  }
  apply_scaler_inplace(f.scaler, num);

  // Assembly plan: each output column reads either an encoded one-hot
  // column or a numeric-block column, following the manifest order.
  struct Source {
    bool onehot;
    std::size_t index;
  };
  std::vector<Source> plan;
  plan.reserve(f.manifest.size());
  {
    std::size_t next_group = 0, next_numeric = 0, within = 0;
    for (const auto& col : f.manifest) {
      if (col.transform == "onehot") {
        const auto& group = enc.groups[f.encoded_groups[next_group]];
        plan.push_back({true, group[within]});
        if (++within == group.size()) {
          within = 0;
          ++next_group;
        }
      } else {
        plan.push_back({false, next_numeric++});
      }
    }
  }

  fm.x = Matrix(rows.size(), f.manifest.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto out = fm.x.row(i);
    auto erow = enc.values.row(i);
    auto nrow = num.row(i);
    for (std::size_t c = 0; c < plan.size(); ++c) {
      out[c] = plan[c].onehot ? erow[plan[c].index] : nrow[plan[c].index];
    }
  }

  // Missing/unknown counts restricted to groups that are part of the matrix.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t g : f.encoded_groups) {
      double s = 0;
      for (std::size_t col : enc.groups[g]) s += enc.values(i, col);
      if (s == 0) ++fm.missing_categorical_cells;
      else if (enc.values(i, enc.groups[g].back()) == 1.0) ++fm.unknown_categorical_cells;
    }
  }

  fm.y.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto& row = set.rows[r];
    fm.y.push_back(row.target_risk);
    fm.entity_ids.push_back(row.entity_id);
    fm.target_periods.push_back(row.target_period);
  }
  return fm;
}

FeatureMatrix materialize(const LagWindowSet& set, const FittedPreprocessor& fitted) {
  std::vector<std::size_t> all(set.rows.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return materialize(set, all, fitted);
}

}  // namespace seerisk
