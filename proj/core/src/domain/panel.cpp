#include "seerisk/domain/panel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "seerisk/common.hpp"
#include "seerisk/domain/csv.hpp"

namespace seerisk {

EntityPeriodRecord PanelDataset::blank_record(std::string entity_id, PeriodIndex period) const {
  EntityPeriodRecord r;
  r.entity_id = std::move(entity_id);
  r.period = period;
  r.values.resize(schema.size());
  return r;
}

std::vector<Violation> validate_dataset(const PanelDataset& data) {
  std::vector<Violation> out;
  const auto& schema = data.schema;
  std::map<std::pair<std::string, int>, int> seen;

  for (const auto& rec : data.records) {
    auto add = [&](const std::string& column, std::string message) {
      out.push_back({rec.entity_id, rec.period, column, std::move(message)});
    };
    if (rec.entity_id.empty()) add(schema[schema.identifier_index()].name, "empty identifier");
    if (rec.period.value() < 0) add(schema[schema.period_index()].name, "negative period index");
    if (++seen[{rec.entity_id, rec.period.value()}] == 2) {
      add(schema[schema.period_index()].name, "duplicate (entity, period) pair");
    }
    const auto& target = schema[schema.target_index()];
    if (rec.risk_label) {
      if (!is_valid_risk(*rec.risk_label)) {
        add(target.name, "risk label " + std::to_string(*rec.risk_label) + " outside 1..5");
      }
    } else if (!target.nullable) {
      add(target.name, "missing risk label");
    }
    if (rec.values.size() != schema.size()) {
      add("", "record has " + std::to_string(rec.values.size()) + " cells, schema has " +
                  std::to_string(schema.size()));
      continue;
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& col = schema[i];
      if (!is_feature(col.kind)) continue;
      const auto& v = rec.values[i];
      if (is_missing(v)) {
        if (!col.nullable) add(col.name, "missing value in non-nullable column");
        continue;
      }
      if (col.kind == ColumnKind::categorical) {
        const auto* token = std::get_if<std::string>(&v);
        if (!token) {
          add(col.name, "categorical column holds a number");
        } else if (!col.categories.empty() &&
                   std::find(col.categories.begin(), col.categories.end(), *token) ==
                       col.categories.end()) {
          add(col.name, "category '" + *token + "' not allowed");
        }
        continue;
      }
      const auto* num = std::get_if<double>(&v);
      if (!num) {
        add(col.name, "non-numeric value '" + std::get<std::string>(v) + "'");
      } else if (!std::isfinite(*num)) {
        add(col.name, "non-finite value");
      } else if (col.kind == ColumnKind::count && (*num < 0 || std::floor(*num) != *num)) {
        add(col.name, "count must be a non-negative integer, got " + format_double(*num));
      }
    }
  }
  return out;
}

namespace {

std::optional<double> parse_number(const std::string& text) {
  double v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

PanelDataset read_panel_csv(std::istream& in, const ColumnSchema& schema) {
  PanelDataset data{schema, {}};
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) throw DataError("panel CSV is empty (no header row)");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);

  // Map file column -> schema column.
  std::vector<std::size_t> to_schema(fields.size());
  std::vector<bool> present(schema.size(), false);
  for (std::size_t f = 0; f < fields.size(); ++f) {
    auto idx = schema.find(fields[f]);
    if (!idx) throw DataError("panel CSV column '" + fields[f] + "' is not in the schema");
    if (present[*idx]) throw DataError("panel CSV repeats column '" + fields[f] + "'");
    present[*idx] = true;
    to_schema[f] = *idx;
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (!present[i]) throw DataError("panel CSV lacks schema column '" + schema[i].name + "'");
  }

  std::size_t line = 1;
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != to_schema.size()) {
      throw DataError("panel CSV line " + std::to_string(line) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(to_schema.size()));
    }
    EntityPeriodRecord rec;
    rec.values.resize(schema.size());
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const std::size_t c = to_schema[f];
      const auto& col = schema[c];
      std::string& text = fields[f];
      switch (col.kind) {
        case ColumnKind::identifier:
          rec.entity_id = std::move(text);
          break;
        case ColumnKind::period:
          try {
            rec.period = parse_period(text);
          } catch (const DataError& e) {
            throw DataError("panel CSV line " + std::to_string(line) + ": " + e.what());
          }
          break;
        case ColumnKind::target:
          if (!text.empty()) {
            int label = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), label);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
              throw DataError("panel CSV line " + std::to_string(line) + ": risk label '" + text +
                              "' is not an integer");
            }
            rec.risk_label = label;
          }
          break;
        case ColumnKind::categorical:
          if (!text.empty()) rec.values[c] = std::move(text);
          break;
        case ColumnKind::continuous:
        case ColumnKind::count:
          if (!text.empty()) {
            if (auto v = parse_number(text)) {
              rec.values[c] = *v;
            } else {
              rec.values[c] = std::move(text);  // reported by validate_dataset
            }
          }
          break;
      }
    }
    data.records.push_back(std::move(rec));
  }
  return data;
}

PanelDataset read_panel_csv(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open panel CSV " + path.string());
  return read_panel_csv(in, schema);
}

void write_panel_csv(std::ostream& out, const PanelDataset& data) {
  const auto& schema = data.schema;
  std::vector<std::string> fields(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) fields[i] = schema[i].name;
  csv::write_record(out, fields);
  for (const auto& rec : data.records) {
    for (std::size_t i = 0; i < schema.size(); ++i) {
      switch (schema[i].kind) {
        case ColumnKind::identifier: fields[i] = rec.entity_id; break;
        case ColumnKind::period: fields[i] = format_period(rec.period); break;
        case ColumnKind::target:
          fields[i] = rec.risk_label ? std::to_string(*rec.risk_label) : std::string();
          break;
        default: {
          const auto& v = rec.values[i];
          if (const auto* d = std::get_if<double>(&v)) {
            fields[i] = format_double(*d);
          } else if (const auto* s = std::get_if<std::string>(&v)) {
            fields[i] = *s;
          } else {
            fields[i].clear();
          }
        }
      }
    }
    csv::write_record(out, fields);
  }
}

}  // namespace seerisk
