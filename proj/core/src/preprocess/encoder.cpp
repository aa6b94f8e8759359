#include "seerisk/preprocess/encoder.hpp"

#include <algorithm>
#include <set>

namespace seerisk {

std::size_t CategoricalEncoding::slot(std::string_view token) const {
  auto it = std::lower_bound(categories.begin(), categories.end(), token);
  if (it != categories.end() && *it == token) return static_cast<std::size_t>(it - categories.begin());
  return unknown_slot();
}

std::size_t EncoderSpec::width_per_lag() const noexcept {
  std::size_t w = 0;
  for (const auto& c : columns) w += c.width();
  return w;
}

EncoderSpec fit_encoder(const LagWindowSet& set, std::span<const std::size_t> rows) {
  if (rows.empty()) throw DataError("cannot fit encoder on zero rows");
  EncoderSpec spec;
  for (std::size_t c = 0; c < set.categorical_columns.size(); ++c) {
    std::set<std::string> seen;
    for (std::size_t r : rows) {
      for (int lag = 1; lag <= set.window; ++lag) {
        const auto& tok = set.categorical_at(set.rows[r], lag, c);
        if (!tok.empty()) seen.insert(tok);
      }
    }
    if (seen.empty()) {
      throw DataError("categorical column '" + set.categorical_columns[c] +
                      "' has no observed values in the fitting rows");
    }
    spec.columns.push_back({set.categorical_columns[c], {seen.begin(), seen.end()}});
  }
  return spec;
}

EncodedCategoricals apply_encoding(const EncoderSpec& spec, const LagWindowSet& set,
                                   std::span<const std::size_t> rows) {
  if (spec.columns.size() != set.categorical_columns.size()) {
    throw ConfigError("encoder covers " + std::to_string(spec.columns.size()) +
                      " categorical columns but rows carry " +
                      std::to_string(set.categorical_columns.size()));
  }
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    if (spec.columns[c].column != set.categorical_columns[c]) {
      throw ConfigError("row column '" + set.categorical_columns[c] + "' is absent from the encoder");
    }
  }
  EncodedCategoricals out;
  const std::size_t width = spec.width_per_lag() * static_cast<std::size_t>(set.window);
  out.values = Matrix(rows.size(), width, 0.0);

  std::size_t offset = 0;
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    const auto& enc = spec.columns[c];
    for (int lag = set.window; lag >= 1; --lag) {
      OneHotGroup group(enc.width());
      for (std::size_t k = 0; k < enc.width(); ++k) group[k] = offset + k;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& tok = set.categorical_at(set.rows[rows[i]], lag, c);
        if (tok.empty()) {
          ++out.missing_cells;
          continue;
        }
        std::size_t s = enc.slot(tok);
        if (s == enc.unknown_slot()) ++out.unknown_cells;
        out.values(i, offset + s) = 1.0;
      }
      out.groups.push_back(std::move(group));
      offset += enc.width();
    }
  }
  return out;
}

}  // namespace seerisk
