#include <gtest/gtest.h>

#include <sstream>

#include "seerisk/domain/csv.hpp"
#include "seerisk/domain/panel.hpp"
#include "seerisk/domain/period.hpp"
#include "seerisk/domain/schema.hpp"
#include "support.hpp"

namespace seerisk {
namespace {

using testing::add_entity;
using testing::tiny_schema;

TEST(Period, ParsesSemesterCounter) {
  EXPECT_EQ(parse_period("2016-1").value(), 4032);
  EXPECT_EQ(parse_period("2016-2").value(), 4033);
  EXPECT_EQ(parse_period("2017-1"), parse_period("2016-2").next());
  EXPECT_THROW(parse_period("2016-3"), DataError);
  EXPECT_THROW(parse_period("16-1"), DataError);
  EXPECT_THROW(parse_period("2016/1"), DataError);
}

TEST(Period, FormatInvertsParse) {
  for (int v = 4000; v < 4050; ++v) {
    PeriodIndex p(v);
    EXPECT_EQ(parse_period(format_period(p)), p);
  }
}

TEST(Csv, QuotedFieldsRoundTrip) {
  std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  std::ostringstream out;
  csv::write_record(out, fields);
  std::istringstream in(out.str());
  std::vector<std::string> back;
  ASSERT_TRUE(csv::read_record(in, back));
  EXPECT_EQ(back, fields);
  EXPECT_FALSE(csv::read_record(in, back));
}

TEST(Csv, ToleratesCrlf) {
  std::istringstream in("a,b\r\nc,d\r\n");
  std::vector<std::string> f;
  ASSERT_TRUE(csv::read_record(in, f));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b"}));
  ASSERT_TRUE(csv::read_record(in, f));
  EXPECT_EQ(f, (std::vector<std::string>{"c", "d"}));
}

TEST(Schema, RequiresOneOfEachStructuralColumn) {
  using K = ColumnKind;
  EXPECT_THROW(ColumnSchema({{"id", K::identifier}, {"period", K::period}}), ConfigError);
  EXPECT_THROW(ColumnSchema({{"id", K::identifier}, {"id2", K::identifier}, {"p", K::period}, {"r", K::target}}),
               ConfigError);
  EXPECT_NO_THROW(tiny_schema());
}

TEST(Schema, JsonRoundTrip) {
  auto s = default_schema();
  EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
}

TEST(Schema, DefaultCoversVariableList) {
  auto s = default_schema();
  for (const auto& [label, column] : appendix_a_variables()) {
    EXPECT_TRUE(s.find(column).has_value()) << label;
  }
  for (const auto& c : default_variation_columns()) EXPECT_TRUE(s.find(c).has_value()) << c;
  for (const auto& c : default_camels_columns()) EXPECT_TRUE(s.find(c).has_value()) << c;
}

TEST(Validate, WellFormedIsClean) {
  PanelDataset d{tiny_schema(), {}};
  add_entity(d, "A", {"2016-1", "2016-2", "2017-1"});
  EXPECT_TRUE(validate_dataset(d).empty());
}

TEST(Validate, LabelOutOfRange) {
  PanelDataset d{tiny_schema(), {}};
  add_entity(d, "A", {"2016-1"}, 6);
  auto v = validate_dataset(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].column, "risk");
  EXPECT_NE(v[0].message.find("1..5"), std::string::npos);
}

TEST(Validate, DuplicatePair) {
  PanelDataset d{tiny_schema(), {}};
  add_entity(d, "A", {"2016-1", "2016-1"});
  auto v = validate_dataset(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("duplicate"), std::string::npos);
}

TEST(Validate, KindMismatches) {
  PanelDataset d{tiny_schema(), {}};
  add_entity(d, "A", {"2016-1"});
  d.records[0].values[3] = std::string("abc");
  d.records[0].values[4] = 2.5;
  EXPECT_EQ(validate_dataset(d).size(), 2u);
}

TEST(PanelCsv, RoundTrip) {
  PanelDataset d{tiny_schema(), {}};
  add_entity(d, "A", {"2016-1", "2016-2"}, 3, "with,comma");
  add_entity(d, "B", {"2017-1"}, std::nullopt);
  d.records[1].values[3] = CellValue{};
  std::ostringstream out;
  write_panel_csv(out, d);
  std::istringstream in(out.str());
  auto back = read_panel_csv(in, tiny_schema());
  ASSERT_EQ(back.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.records[i].entity_id, d.records[i].entity_id);
    EXPECT_EQ(back.records[i].period, d.records[i].period);
    EXPECT_EQ(back.records[i].risk_label, d.records[i].risk_label);
    EXPECT_EQ(back.records[i].values, d.records[i].values);
  }
}

TEST(PanelCsv, HeaderErrors) {
  std::istringstream missing("entity_id,period,nature,assets,risk\n");
  EXPECT_THROW(read_panel_csv(missing, tiny_schema()), DataError);
  std::istringstream extra("entity_id,period,nature,assets,members,risk,bogus\n");
  EXPECT_THROW(read_panel_csv(extra, tiny_schema()), DataError);
  std::istringstream ragged("entity_id,period,nature,assets,members,risk\nA,2016-1,x\n");
  EXPECT_THROW(read_panel_csv(ragged, tiny_schema()), DataError);
}

TEST(PanelCsv, ColumnOrderIsFree) {
  std::istringstream in("risk,members,assets,nature,period,entity_id\n4,3,1.5,coop,2016-2,Z\n");
  auto d = read_panel_csv(in, tiny_schema());
  ASSERT_EQ(d.records.size(), 1u);
  EXPECT_EQ(d.records[0].entity_id, "Z");
  EXPECT_EQ(d.records[0].risk_label, 4);
  EXPECT_EQ(std::get<double>(d.records[0].values[3]), 1.5);
}

}  // namespace
}  // namespace seerisk
