#pragma once

#include <string_view>
#include <variant>

#include "seerisk/learn/forest.hpp"
#include "seerisk/learn/logistic.hpp"

namespace seerisk {

enum class LearnerKind { random_forest, logistic };

std::string_view to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(std::string_view text);

/// A fitted model of either learner behind one prediction interface. For
/// the logistic model the vote fractions are the class probabilities.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(RandomForest forest) : model_(std::move(forest)) {}
  explicit Classifier(LogisticModel logistic) : model_(std::move(logistic)) {}

  LearnerKind kind() const noexcept {
    return std::holds_alternative<RandomForest>(model_) ? LearnerKind::random_forest : LearnerKind::logistic;
  }
  std::size_t n_features() const;

  const RandomForest* forest() const noexcept { return std::get_if<RandomForest>(&model_); }
  const LogisticModel* logistic() const noexcept { return std::get_if<LogisticModel>(&model_); }

  /// Throws ConfigError on a width mismatch.
  Vote predict(std::span<const double> x) const;
  std::vector<Vote> predict(const Matrix& x) const;
  std::vector<int> predict_labels(const Matrix& x) const;

  friend bool operator==(const Classifier&, const Classifier&) = default;

 private:
  std::variant<RandomForest, LogisticModel> model_;
};

}  // namespace seerisk
