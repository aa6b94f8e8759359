#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seerisk/common.hpp"
#include "seerisk/domain/panel.hpp"
#include "seerisk/preprocess/macro.hpp"

namespace seerisk {

/// Class shares reported for the supervised population; they sum to 98.73%
/// and are renormalized before use.
inline constexpr std::array<double, kNumClasses> kReportedClassShares = {0.002, 0.466, 0.518, 0.001, 0.0003};

struct CohortSpec {
  std::size_t n_entities = 2600;
  PeriodIndex first_period = PeriodIndex::from_year_semester(2016, 1);
  PeriodIndex last_period = PeriodIndex::from_year_semester(2019, 1);
  std::array<double, kNumClasses> class_shares = kReportedClassShares;
  /// Chance that an entity skips a given period.
  double gap_probability = 0.03;
  /// Chance that an individual feature cell is blank.
  double missing_rate = 0.01;
  /// 1 = labels driven by the planted rule with little noise; 0 = pure noise.
  double signal_strength = 1.0;
  std::uint64_t seed = 0;
  /// Each class gets at least this many labels among records that can be a
  /// supervised target (those preceded by `window` consecutive filings).
  std::size_t min_class_members = 5;
  int window = 3;

  /// Throws ConfigError on a degenerate spec.
  void validate() const;
  /// Shares scaled to sum to one.
  std::array<double, kNumClasses> normalized_shares() const;
};

CohortSpec cohort_spec_from_json(const nlohmann::json& j);
nlohmann::json cohort_spec_to_json(const CohortSpec& spec);

struct GeneratedCohort {
  PanelDataset panel;
  MacroTable macro;
  /// Labels handed out by the generator, by class.
  ClassCounts label_histogram{};
};

/// Panel over the default schema plus a matching macro table. Entities are
/// simulated independently from per-entity seeds, so the output does not
/// depend on how the work is sharded.
GeneratedCohort generate_cohort(const CohortSpec& spec);

struct WindowCoverage {
  PeriodIndex first;
  /// Entities that filed every period of [first, first + 3].
  std::size_t entities = 0;
};

struct CohortSummary {
  ClassCounts histogram{};
  std::size_t entities = 0;
  std::size_t records = 0;
  std::size_t unlabelled_records = 0;
  std::size_t periods = 0;
  std::optional<PeriodIndex> first_period;
  std::optional<PeriodIndex> last_period;
  /// Blank share per feature column, in schema order.
  std::vector<std::pair<std::string, double>> missing_rates;
  double overall_missing_rate = 0;
  std::vector<WindowCoverage> window_coverage;
};

CohortSummary describe_cohort(const PanelDataset& data);
nlohmann::json summary_to_json(const CohortSummary& summary);
std::string render_summary(const CohortSummary& summary);

}  // namespace seerisk
