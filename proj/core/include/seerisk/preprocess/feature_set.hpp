#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seerisk/domain/lag_window.hpp"
#include "seerisk/preprocess/encoder.hpp"
#include "seerisk/preprocess/macro.hpp"
#include "seerisk/preprocess/scaler.hpp"
#include "seerisk/preprocess/variations.hpp"

namespace seerisk {

/// M1: lagged descriptive and chart-of-account columns.
/// M2: M1 plus variations between consecutive periods.
/// M3: M2 plus supervisory ratings and macroeconomic indicators.
enum class FeatureVariant { M1, M2, M3 };
enum class ImputationPolicy { median, zero };

std::string_view to_string(FeatureVariant v);
FeatureVariant feature_variant_from_string(std::string_view text);
std::string_view to_string(ImputationPolicy p);
ImputationPolicy imputation_policy_from_string(std::string_view text);

struct FeatureSetConfig {
  FeatureVariant variant = FeatureVariant::M3;
  ScalerKind scaler = ScalerKind::lognormal;
  double cap = kDefaultChangeCap;
  ImputationPolicy imputation = ImputationPolicy::median;
  std::vector<std::string> variation_columns = default_variation_columns();
  std::vector<std::string> camels_columns = default_camels_columns();

  friend bool operator==(const FeatureSetConfig&, const FeatureSetConfig&) = default;
};

/// Provenance of one feature-matrix column.
struct ColumnInfo {
  std::string name;
  std::string source;     // panel column, or indicator name for macro features
  int lag = 0;            // 0 when not tied to a single lag
  std::string transform;  // "onehot", "numeric", "variation", "macro"
  int group = -1;         // one-hot group id, -1 otherwise

  friend bool operator==(const ColumnInfo&, const ColumnInfo&) = default;
};

/// Where a numeric feature comes from in a LagWindowSet row.
struct NumericSource {
  bool derived = false;
  std::size_t index = 0;  // numeric column or derived column
  int lag = 0;            // only for lagged numerics

  friend bool operator==(const NumericSource&, const NumericSource&) = default;
};

/// Everything fitted on the training rows that is needed to turn any
/// compatible LagWindowSet into model inputs.
struct FittedPreprocessor {
  bool fitted = false;
  FeatureSetConfig config;
  int window = 3;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> derived_columns;

  EncoderSpec encoder;
  /// Encoder groups that make it into the matrix, in column order.
  std::vector<std::size_t> encoded_groups;
  std::vector<NumericSource> numeric_sources;
  std::vector<double> impute_values;
  ScalerSpec scaler;
  std::vector<ColumnInfo> manifest;
  /// Distinct variables before lag expansion and one-hot encoding.
  std::size_t base_variable_count = 0;

  friend bool operator==(const FittedPreprocessor&, const FittedPreprocessor&) = default;
};

struct FeatureMatrix {
  Matrix x;
  std::vector<ColumnInfo> columns;
  std::vector<int> y;
  std::vector<std::string> entity_ids;
  std::vector<PeriodIndex> target_periods;
  std::size_t imputed_cells = 0;
  std::size_t missing_categorical_cells = 0;
  std::size_t unknown_categorical_cells = 0;

  std::vector<OneHotGroup> onehot_groups() const;
};

/// Appends the engineered features the variant needs: variations for M2 and
/// M3, macro indicators for M3. Throws ConfigError if M3 has no macro table.
void prepare_features(LagWindowSet& set, const FeatureSetConfig& config, const MacroTable* macro);

/// Fits encoder, imputation values and scaler on `train_rows` only.
FittedPreprocessor fit_preprocessor(const LagWindowSet& set, std::span<const std::size_t> train_rows,
                                    const FeatureSetConfig& config);

FeatureMatrix materialize(const LagWindowSet& set, std::span<const std::size_t> rows,
                          const FittedPreprocessor& fitted);
FeatureMatrix materialize(const LagWindowSet& set, const FittedPreprocessor& fitted);

}  // namespace seerisk
