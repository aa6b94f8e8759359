#include "seerisk/preprocess/scaler.hpp"

#include <algorithm>
#include <cmath>

namespace seerisk {

std::string_view to_string(ScalerKind kind) {
  switch (kind) {
    case ScalerKind::standardize: return "standardize";
    case ScalerKind::minmax: return "minmax";
    case ScalerKind::lognormal: return "lognormal";
  }
  return "?";
}

ScalerKind scaler_kind_from_string(std::string_view text) {
  for (auto k : {ScalerKind::standardize, ScalerKind::minmax, ScalerKind::lognormal}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown scaler '" + std::string(text) + "' (standardize|minmax|lognormal)");
}

double signed_log1p(double x) { return std::copysign(std::log1p(std::abs(x)), x); }

ScalerSpec fit_scaler(const Matrix& train, ScalerKind kind) {
  ScalerSpec spec;
  spec.kind = kind;
  spec.columns = train.cols();
  if (kind == ScalerKind::lognormal) return spec;
  if (train.rows() < 2) {
    throw DataError("scaler '" + std::string(to_string(kind)) + "' needs at least 2 training rows");
  }
  const std::size_t n = train.rows();
  for (std::size_t c = 0; c < train.cols(); ++c) {
    double lo = train(0, c), hi = train(0, c), sum = 0;
    for (std::size_t r = 0; r < n; ++r) {
      double v = train(r, c);
      if (std::isnan(v)) throw DataError("scaler input has a missing value in column " + std::to_string(c));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (kind == ScalerKind::standardize) {
      double mean = sum / static_cast<double>(n);
      double ss = 0;
      for (std::size_t r = 0; r < n; ++r) {
        double d = train(r, c) - mean;
        ss += d * d;
      }
      double sd = std::sqrt(ss / static_cast<double>(n));
      spec.mean.push_back(mean);
      spec.stddev.push_back(sd);
      if (sd == 0) spec.constant_columns.push_back(c);
    } else {
      spec.min.push_back(lo);
      spec.max.push_back(hi);
      if (hi == lo) spec.constant_columns.push_back(c);
    }
  }
  return spec;
}

void apply_scaler_inplace(const ScalerSpec& spec, Matrix& m) {
  if (m.cols() != spec.columns) {
    throw ConfigError("scaler fitted on " + std::to_string(spec.columns) + " columns, got " +
                      std::to_string(m.cols()));
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      double& v = row[c];
      switch (spec.kind) {
        case ScalerKind::lognormal:
          v = signed_log1p(v);
          break;
        case ScalerKind::standardize:
          v = spec.stddev[c] == 0 ? 0.0 : (v - spec.mean[c]) / spec.stddev[c];
          break;
        case ScalerKind::minmax: {
          double range = spec.max[c] - spec.min[c];
          v = range == 0 ? 0.0
                         : std::clamp((v - spec.min[c]) / range, kMinMaxClipLow, kMinMaxClipHigh);
          break;
        }
      }
    }
  }
}

Matrix apply_scaler(const ScalerSpec& spec, Matrix m) {
  apply_scaler_inplace(spec, m);
  return m;
}

}  // namespace seerisk
