#pragma once

#include <array>
#include <span>
#include <vector>

#include "seerisk/common.hpp"

namespace seerisk {

struct LogisticParams {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t epochs = 300;

  friend bool operator==(const LogisticParams&, const LogisticParams&) = default;
};

/// Multinomial logistic regression over the five risk classes.
class LogisticModel {
 public:
  LogisticModel() = default;
  LogisticModel(std::size_t n_features, LogisticParams params);

  std::size_t n_features() const noexcept { return weights_.cols(); }
  const LogisticParams& params() const noexcept { return params_; }
  Matrix& weights() noexcept { return weights_; }  // kNumClasses x n_features
  const Matrix& weights() const noexcept { return weights_; }
  std::array<double, kNumClasses>& bias() noexcept { return bias_; }
  const std::array<double, kNumClasses>& bias() const noexcept { return bias_; }

  /// Softmax class probabilities (numerically stabilized).
  std::array<double, kNumClasses> probabilities(std::span<const double> x) const;
  /// Most probable class; ties go to the lower class.
  int predict(std::span<const double> x) const;

  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;

 private:
  Matrix weights_;
  std::array<double, kNumClasses> bias_{};
  LogisticParams params_;
};

/// Mean cross-entropy plus (l2 / 2) * ||W||^2 (bias not penalized).
double logistic_loss(const LogisticModel& model, const Matrix& x, std::span<const int> y, double l2);

struct LogisticGradient {
  Matrix weights;
  std::array<double, kNumClasses> bias{};
};

LogisticGradient logistic_gradient(const LogisticModel& model, const Matrix& x, std::span<const int> y,
                                   double l2);

/// Full-batch gradient descent from zero weights for a fixed number of
/// epochs. Throws DataError naming the epoch if the loss becomes non-finite.
/// `loss_history`, when given, receives the loss before each update.
LogisticModel fit_logistic(const Matrix& x, std::span<const int> y, const LogisticParams& params,
                           std::vector<double>* loss_history = nullptr);

}  // namespace seerisk
