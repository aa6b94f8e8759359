#include "seerisk/preprocess/macro.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "seerisk/common.hpp"
#include "seerisk/domain/csv.hpp"

namespace seerisk {

const MacroIndicators* MacroTable::find(PeriodIndex period) const {
  auto it = entries_.find(period);
  return it == entries_.end() ? nullptr : &it->second;
}

MacroTable read_macro_csv(std::istream& in) {
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) throw DataError("macro CSV is empty");
  const std::vector<std::string> expected = {"period", "cpi", "unemployment_rate", "gdp"};
  int pos[4] = {-1, -1, -1, -1};
  for (std::size_t f = 0; f < fields.size(); ++f) {
    for (int k = 0; k < 4; ++k) {
      if (fields[f] == expected[static_cast<std::size_t>(k)]) pos[k] = static_cast<int>(f);
    }
  }
  for (int k = 0; k < 4; ++k) {
    if (pos[k] < 0) throw DataError("macro CSV lacks column '" + expected[static_cast<std::size_t>(k)] + "'");
  }
  MacroTable table;
  std::size_t line = 1;
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    auto field = [&](int k) -> const std::string& {
      auto p = static_cast<std::size_t>(pos[k]);
      if (p >= fields.size()) throw DataError("macro CSV line " + std::to_string(line) + " is short");
      return fields[p];
    };
    auto number = [&](int k) {
      const std::string& s = field(k);
      double v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("macro CSV line " + std::to_string(line) + ": bad number '" + s + "'");
      }
      return v;
    };
    PeriodIndex p = parse_period(field(0));
    if (table.find(p)) throw DataError("macro CSV repeats period " + field(0));
    table.set(p, {number(1), number(2), number(3)});
  }
  return table;
}

MacroTable read_macro_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open macro CSV " + path.string());
  return read_macro_csv(in);
}

void write_macro_csv(std::ostream& out, const MacroTable& table) {
  csv::write_record(out, {"period", "cpi", "unemployment_rate", "gdp"});
  for (const auto& [p, m] : table.entries()) {
    csv::write_record(out, {format_period(p), format_double(m.cpi),
                            format_double(m.unemployment_rate), format_double(m.gdp)});
  }
}

std::vector<std::string> macro_feature_names(int window) {
  std::vector<std::string> names;
  for (const char* ind : {"cpi", "unemployment_rate", "gdp"}) {
    for (int lag = window; lag >= 1; --lag) names.push_back(lagged_name(std::string("macro_") + ind, lag));
  }
  return names;
}

void enrich_macro(LagWindowSet& set, const MacroTable& macro) {
  const auto names = macro_feature_names(set.window);
  for (const auto& n : names) {
    if (set.derived_index(n)) throw ConfigError("macro feature '" + n + "' already present");
  }
  std::set<PeriodIndex> missing;
  for (const auto& row : set.rows) {
    for (int lag = set.window; lag >= 1; --lag) {
      auto p = row.target_period.offset(-lag);
      if (!macro.find(p)) missing.insert(p);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (auto p : missing) {
      if (!list.empty()) list += ", ";
      list += std::to_string(p.value()) + " (" + format_period(p) + ")";
    }
    throw DataError("macro table is missing periods: " + list);
  }
  for (auto& row : set.rows) {
    const std::size_t base = row.derived.size();
    row.derived.resize(base + names.size());
    std::size_t k = base;
    for (int ind = 0; ind < 3; ++ind) {
      for (int lag = set.window; lag >= 1; --lag) {
        const auto* m = macro.find(row.target_period.offset(-lag));
        row.derived[k++] = ind == 0 ? m->cpi : ind == 1 ? m->unemployment_rate : m->gdp;
      }
    }
  }
  set.derived_columns.insert(set.derived_columns.end(), names.begin(), names.end());
}

}  // namespace seerisk
