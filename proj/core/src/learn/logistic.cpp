#include "seerisk/learn/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace seerisk {

LogisticModel::LogisticModel(std::size_t n_features, LogisticParams params)
    : weights_(kNumClasses, n_features, 0.0), params_(params) {}

std::array<double, kNumClasses> LogisticModel::probabilities(std::span<const double> x) const {
  if (x.size() != weights_.cols()) {
    throw ConfigError("input has " + std::to_string(x.size()) + " features, model expects " +
                      std::to_string(weights_.cols()));
  }
  std::array<double, kNumClasses> z{};
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    auto w = weights_.row(k);
    double s = bias_[k];
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
    z[k] = s;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double total = 0;
  for (auto& v : z) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (auto& v : z) v /= total;
  return z;
}

int LogisticModel::predict(std::span<const double> x) const {
  auto p = probabilities(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()) + 1;
}

namespace {

void check(const LogisticModel& model, const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) throw ConfigError("logistic: feature and label counts differ");
  if (x.rows() == 0) throw DataError("logistic regression needs at least one row");
  if (x.cols() != model.n_features()) throw ConfigError("logistic: feature width mismatch");
  for (int label : y) {
    if (!is_valid_risk(label)) throw DataError("training label out of range 1..5: " + std::to_string(label));
  }
}

}  // namespace

double logistic_loss(const LogisticModel& model, const Matrix& x, std::span<const int> y, double l2) {
  check(model, x, y);
  double ce = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto p = model.probabilities(x.row(i));
    ce -= std::log(std::max(p[static_cast<std::size_t>(y[i] - 1)], 1e-300));
  }
  double reg = 0;
  for (double w : model.weights().data()) reg += w * w;
  return ce / static_cast<double>(x.rows()) + 0.5 * l2 * reg;
}

namespace {

/// Loss and gradient in a single pass over the rows.
double loss_and_gradient(const LogisticModel& model, const Matrix& x, std::span<const int> y,
                         double l2, LogisticGradient& g) {
  g.weights = Matrix(kNumClasses, x.cols(), 0.0);
  g.bias.fill(0.0);
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  double ce = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto xi = x.row(i);
    auto p = model.probabilities(xi);
    const auto yi = static_cast<std::size_t>(y[i] - 1);
    ce -= std::log(std::max(p[yi], 1e-300));
    p[yi] -= 1.0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      const double r = p[k] * inv_n;
      g.bias[k] += r;
      auto gw = g.weights.row(k);
      for (std::size_t j = 0; j < xi.size(); ++j) gw[j] += r * xi[j];
    }
  }
  const auto& w = model.weights().data();
  auto& gw = g.weights.data();
  double reg = 0;
  for (std::size_t j = 0; j < gw.size(); ++j) {
    gw[j] += l2 * w[j];
    reg += w[j] * w[j];
  }
  return ce * inv_n + 0.5 * l2 * reg;
}

}  // namespace

LogisticGradient logistic_gradient(const LogisticModel& model, const Matrix& x, std::span<const int> y,
                                   double l2) {
  check(model, x, y);
  LogisticGradient g;
  loss_and_gradient(model, x, y, l2, g);
  return g;
}

LogisticModel fit_logistic(const Matrix& x, std::span<const int> y, const LogisticParams& params,
                           std::vector<double>* loss_history) {
  if (!(params.learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (params.l2 < 0) throw ConfigError("l2 must be non-negative");
  LogisticModel model(x.cols(), params);
  check(model, x, y);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    LogisticGradient g;
    const double loss = loss_and_gradient(model, x, y, params.l2, g);
    if (!std::isfinite(loss)) {
      throw DataError("logistic loss became non-finite at epoch " + std::to_string(epoch) +
                      " (learning rate too high?)");
    }
    if (loss_history) loss_history->push_back(loss);
    auto& w = model.weights().data();
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= params.learning_rate * g.weights.data()[j];
    for (std::size_t k = 0; k < kNumClasses; ++k) model.bias()[k] -= params.learning_rate * g.bias[k];
  }
  for (double v : model.weights().data()) {
    if (!std::isfinite(v)) {
      throw DataError("logistic weights became non-finite at epoch " + std::to_string(params.epochs));
    }
  }
  return model;
}

}  // namespace seerisk
