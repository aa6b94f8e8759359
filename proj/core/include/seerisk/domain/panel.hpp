#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seerisk/domain/period.hpp"
#include "seerisk/domain/schema.hpp"

namespace seerisk {

/// Missing, numeric, or category token.
using CellValue = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const CellValue& v) { return std::holds_alternative<std::monostate>(v); }

/// One entity's filing for one semester. `values` is aligned with the schema
/// columns; the identifier, period and target slots are left empty because
/// they live in the dedicated fields.
struct EntityPeriodRecord {
  std::string entity_id;
  PeriodIndex period;
  std::vector<CellValue> values;
  std::optional<int> risk_label;
};

struct PanelDataset {
  ColumnSchema schema;
  std::vector<EntityPeriodRecord> records;

  /// A record with the right number of empty cells for this schema.
  EntityPeriodRecord blank_record(std::string entity_id, PeriodIndex period) const;
};

struct Violation {
  std::string entity_id;
  std::optional<PeriodIndex> period;
  std::string column;
  std::string message;
};

/// Empty iff every value matches its column kind, labels are in 1..5 and
/// each (entity, period) pair occurs once.
std::vector<Violation> validate_dataset(const PanelDataset& data);

PanelDataset read_panel_csv(std::istream& in, const ColumnSchema& schema);
PanelDataset read_panel_csv(const std::filesystem::path& path, const ColumnSchema& schema);

/// Header in schema order; numbers use the shortest round-trip representation.
void write_panel_csv(std::ostream& out, const PanelDataset& data);

}  // namespace seerisk
