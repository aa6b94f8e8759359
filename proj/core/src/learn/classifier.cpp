#include "seerisk/learn/classifier.hpp"

#include <algorithm>
#include <string>

namespace seerisk {

std::string_view to_string(LearnerKind kind) {
  return kind == LearnerKind::random_forest ? "random_forest" : "logistic";
}

LearnerKind learner_kind_from_string(std::string_view text) {
  if (text == "random_forest") return LearnerKind::random_forest;
  if (text == "logistic") return LearnerKind::logistic;
  throw ConfigError("unknown learner '" + std::string(text) + "' (expected random_forest or logistic)");
}

std::size_t Classifier::n_features() const {
  return std::visit([](const auto& m) { return m.n_features(); }, model_);
}

Vote Classifier::predict(std::span<const double> x) const {
  if (const auto* f = forest()) return f->predict(x);
  Vote v;
  v.fractions = std::get<LogisticModel>(model_).probabilities(x);
  v.label = static_cast<int>(std::max_element(v.fractions.begin(), v.fractions.end()) - v.fractions.begin()) + 1;
  return v;
}

std::vector<Vote> Classifier::predict(const Matrix& x) const {
  std::vector<Vote> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

std::vector<int> Classifier::predict_labels(const Matrix& x) const {
  std::vector<int> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)).label);
  return out;
}

}  // namespace seerisk
