#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "seerisk/domain/lag_window.hpp"

namespace seerisk {

struct MacroIndicators {
  double cpi = 0;
  double unemployment_rate = 0;  // fraction
  double gdp = 0;

  friend bool operator==(const MacroIndicators&, const MacroIndicators&) = default;
};

/// Macroeconomic indicators per semester.
class MacroTable {
 public:
  void set(PeriodIndex period, MacroIndicators values) { entries_[period] = values; }
  const MacroIndicators* find(PeriodIndex period) const;
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<PeriodIndex, MacroIndicators>& entries() const noexcept { return entries_; }

  friend bool operator==(const MacroTable&, const MacroTable&) = default;

 private:
  std::map<PeriodIndex, MacroIndicators> entries_;
};

/// Columns: period, cpi, unemployment_rate, gdp.
MacroTable read_macro_csv(std::istream& in);
MacroTable read_macro_csv(const std::filesystem::path& path);
void write_macro_csv(std::ostream& out, const MacroTable& table);

/// "macro_<indicator>_lag<k>" in (indicator, lag) order, oldest lag first.
std::vector<std::string> macro_feature_names(int window);

/// Appends 3 * window indicator values per row. Throws DataError listing
/// every lag period the table does not cover.
void enrich_macro(LagWindowSet& set, const MacroTable& macro);

}  // namespace seerisk
