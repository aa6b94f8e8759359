#include "seerisk/evaluate/confusion.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace seerisk {

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
  return std::accumulate(counts[i].begin(), counts[i].end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
  std::uint64_t s = 0;
  for (const auto& row : counts) s += row[j];
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) s += counts[i][i];
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DataError("confusion matrix needs equal lengths, got " + std::to_string(y_true.size()) +
                    " actual and " + std::to_string(y_pred.size()) + " predicted labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (!is_valid_risk(y_true[i]) || !is_valid_risk(y_pred[i])) {
      throw DataError("label out of range 1..5 at index " + std::to_string(i));
    }
    ++cm.counts[static_cast<std::size_t>(y_true[i] - 1)][static_cast<std::size_t>(y_pred[i] - 1)];
  }
  cm.n = y_true.size();
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.n == 0) throw DataError("metrics of an empty confusion matrix");
  MetricsReport r;
  r.confusion = cm;
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    auto rs = cm.row_sum(i);
    auto cs = cm.col_sum(i);
    r.support[i] = rs;
    if (cs > 0) r.precision[i] = static_cast<double>(cm.counts[i][i]) / static_cast<double>(cs);
    if (rs > 0) {
      r.recall[i] = static_cast<double>(cm.counts[i][i]) / static_cast<double>(rs);
      for (std::size_t j = 0; j < kNumClasses; ++j) {
        r.row_pct[i][j] = 100.0 * static_cast<double>(cm.counts[i][j]) / static_cast<double>(rs);
      }
    }
  }
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.n);
  return r;
}

std::array<int, kNumClasses> integer_row_percentages(const std::array<std::uint64_t, kNumClasses>& row) {
  std::array<int, kNumClasses> out{};
  std::uint64_t total = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  if (total == 0) return out;
  // Exact remainders: 100 * c = q * total + rem.
  std::array<std::uint64_t, kNumClasses> rem{};
  int assigned = 0;
  for (std::size_t j = 0; j < kNumClasses; ++j) {
    out[j] = static_cast<int>(100 * row[j] / total);
    rem[j] = 100 * row[j] % total;
    assigned += out[j];
  }
  std::array<std::size_t, kNumClasses> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < 100; ++k, ++assigned) ++out[order[k]];
  return out;
}

namespace {

nlohmann::json per_class_json(const PerClass& values) {
  auto arr = nlohmann::json::array();
  for (const auto& v : values) arr.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
  return arr;
}

std::string percent_cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * *v);
  return buf;
}

}  // namespace

nlohmann::json metrics_to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["n"] = report.confusion.n;
  j["counts"] = report.confusion.counts;
  j["row_pct"] = report.row_pct;
  auto rendered = nlohmann::json::array();
  for (const auto& row : report.confusion.counts) rendered.push_back(integer_row_percentages(row));
  j["row_pct_rounded"] = rendered;
  j["precision"] = per_class_json(report.precision);
  j["recall"] = per_class_json(report.recall);
  j["accuracy"] = report.accuracy;
  j["support"] = report.support;
  return j;
}

std::string render_metrics_table(const MetricsReport& report) {
  std::ostringstream out;
  char buf[64];
  out << "actual \\ predicted";
  for (int c = 1; c <= kNumClasses; ++c) {
    std::snprintf(buf, sizeof buf, "%6d", c);
    out << buf;
  }
  out << "   support\n";
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    std::snprintf(buf, sizeof buf, "%-18zu", i + 1);
    out << buf;
    auto pct = integer_row_percentages(report.confusion.counts[i]);
    for (std::size_t j = 0; j < kNumClasses; ++j) {
      if (report.confusion.counts[i][j] == 0) {
        out << "      ";
      } else {
        std::snprintf(buf, sizeof buf, "%5d%%", pct[j]);
        out << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "%10llu", static_cast<unsigned long long>(report.support[i]));
    out << buf << '\n';
  }
  out << "\nclass  precision  recall\n";
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    std::snprintf(buf, sizeof buf, "%-5zu  %9s  %6s\n", i + 1, percent_cell(report.precision[i]).c_str(),
                  percent_cell(report.recall[i]).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "\noverall accuracy  %.2f%%  (n = %llu)\n", 100.0 * report.accuracy,
                static_cast<unsigned long long>(report.confusion.n));
  out << buf;
  return out.str();
}

}  // namespace seerisk
