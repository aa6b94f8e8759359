#include "seerisk/domain/schema.hpp"

#include <fstream>
#include <set>

#include "seerisk/common.hpp"

namespace seerisk {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::identifier: return "identifier";
    case ColumnKind::period: return "period";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::continuous: return "continuous";
    case ColumnKind::count: return "count";
    case ColumnKind::target: return "target";
  }
  return "?";
}

ColumnKind column_kind_from_string(std::string_view text) {
  for (auto k : {ColumnKind::identifier, ColumnKind::period, ColumnKind::categorical,
                 ColumnKind::continuous, ColumnKind::count, ColumnKind::target}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown column kind '" + std::string(text) + "'");
}

ColumnSchema::ColumnSchema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::set<std::string> names;
  int ids = 0, periods = 0, targets = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& c = columns_[i];
    if (c.name.empty()) throw ConfigError("schema column " + std::to_string(i) + " has no name");
    if (!names.insert(c.name).second) throw ConfigError("duplicate schema column '" + c.name + "'");
    switch (c.kind) {
      case ColumnKind::identifier: ++ids; identifier_ = i; break;
      case ColumnKind::period: ++periods; period_ = i; break;
      case ColumnKind::target: ++targets; target_ = i; break;
      default: break;
    }
    if (c.kind != ColumnKind::categorical && !c.categories.empty()) {
      throw ConfigError("column '" + c.name + "' lists categories but is not categorical");
    }
  }
  if (ids != 1 || periods != 1 || targets != 1) {
    throw ConfigError("schema needs exactly one identifier, period and target column (found " +
                      std::to_string(ids) + ", " + std::to_string(periods) + ", " +
                      std::to_string(targets) + ")");
  }
}

std::optional<std::size_t> ColumnSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ColumnSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ConfigError("column '" + std::string(name) + "' is not in the schema");
}

std::vector<std::size_t> ColumnSchema::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (is_feature(columns_[i].kind)) out.push_back(i);
  }
  return out;
}

nlohmann::json schema_to_json(const ColumnSchema& schema) {
  auto arr = nlohmann::json::array();
  for (const auto& c : schema.columns()) {
    nlohmann::json e{{"name", c.name}, {"kind", std::string(to_string(c.kind))},
                     {"nullable", c.nullable}};
    if (!c.categories.empty()) e["categories"] = c.categories;
    arr.push_back(std::move(e));
  }
  return arr;
}

ColumnSchema schema_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("schema JSON must be an array of column objects");
  std::vector<ColumnSpec> cols;
  for (const auto& e : j) {
    try {
      ColumnSpec c;
      c.name = e.at("name").get<std::string>();
      c.kind = column_kind_from_string(e.at("kind").get<std::string>());
      c.nullable = e.value("nullable", true);
      if (e.contains("categories")) c.categories = e.at("categories").get<std::vector<std::string>>();
      cols.push_back(std::move(c));
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(std::string("bad schema entry: ") + ex.what());
    }
  }
  return ColumnSchema(std::move(cols));
}

ColumnSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file " + path.string());
  try {
    return schema_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& ex) {
    throw ConfigError("schema file " + path.string() + " is not valid JSON: " + ex.what());
  }
}

namespace {

struct Entry {
  const char* name;
  ColumnKind kind;
  std::vector<std::string> categories;
  bool nullable;
};

const std::vector<Entry>& default_entries() {
  using K = ColumnKind;
  static const std::vector<Entry> entries = {
      {"entity_id", K::identifier, {}, false},
      {"period", K::period, {}, false},
      {"organization_type", K::categorical, {}, true},
      {"legal_nature", K::categorical, {"cooperative", "employee_fund", "other"}, true},
      {"company_type", K::categorical, {}, true},
      {"supervision_level", K::categorical, {"1", "2", "3"}, true},
      {"niif_group", K::categorical, {}, true},
      {"department", K::categorical, {}, true},
      {"municipality", K::categorical, {}, true},
      {"category", K::categorical, {}, true},
      {"associates", K::count, {}, true},
      {"employees", K::count, {}, true},
      {"offices", K::count, {}, true},
      {"correspondents", K::count, {}, true},
      {"savers", K::count, {}, true},
      {"debtors", K::count, {}, true},
      {"female_members", K::count, {}, true},
      {"male_members", K::count, {}, true},
      {"other_members", K::count, {}, true},
      {"total_assets", K::continuous, {}, true},
      {"client_portfolio", K::continuous, {}, true},
      {"net_client_portfolio", K::continuous, {}, true},
      {"consumer_portfolio", K::continuous, {}, true},
      {"housing_portfolio", K::continuous, {}, true},
      {"commercial_portfolio", K::continuous, {}, true},
      {"micro_portfolio", K::continuous, {}, true},
      {"total_investments", K::continuous, {}, true},
      {"receivables_under_agreement", K::continuous, {}, true},
      {"total_liabilities", K::continuous, {}, true},
      {"total_deposits", K::continuous, {}, true},
      {"demand_deposits", K::continuous, {}, true},
      {"cdt_deposits", K::continuous, {}, true},
      {"contractual_deposits", K::continuous, {}, true},
      {"permanent_savings_deposits", K::continuous, {}, true},
      {"total_equity", K::continuous, {}, true},
      {"social_contributions", K::continuous, {}, true},
      {"total_surplus", K::continuous, {}, true},
      {"total_income", K::continuous, {}, true},
      {"total_expenses", K::continuous, {}, true},
      {"gross_portfolio", K::continuous, {}, true},
      {"past_due_portfolio", K::continuous, {}, true},
      {"total_capital", K::continuous, {}, true},
      {"administration_expenses", K::continuous, {}, true},
      {"profitability", K::continuous, {}, true},
      {"liquidity", K::continuous, {}, true},
      {"consolidated_risk_rating", K::continuous, {}, true},
      {"risk_rating", K::continuous, {}, true},
      {"camel_rating", K::continuous, {}, true},
      {"credit_risk", K::continuous, {}, true},
      {"liquidity_risk", K::continuous, {}, true},
      {"operational_risk", K::continuous, {}, true},
      {"sarassoft_risk", K::continuous, {}, true},
      {"risk_label", K::target, {}, true},
  };
  return entries;
}

}  // namespace

ColumnSchema default_schema() {
  std::vector<ColumnSpec> cols;
  for (const auto& e : default_entries()) cols.push_back({e.name, e.kind, e.categories, e.nullable});
  return ColumnSchema(std::move(cols));
}

const std::vector<std::pair<std::string, std::string>>& appendix_a_variables() {
  static const std::vector<std::pair<std::string, std::string>> vars = {
      {"Type of organization", "organization_type"},
      {"Whether it is a cooperative, fund or other type of organization", "legal_nature"},
      {"Type of company", "company_type"},
      {"Type of supervision", "supervision_level"},
      {"Group Niif of the organization", "niif_group"},
      {"Department of the organization", "department"},
      {"Municipality of the organization", "municipality"},
      {"Category of the organization", "category"},
      {"Number of associates", "associates"},
      {"Number of employees", "employees"},
      {"Number of offices", "offices"},
      {"Number of correspondents", "correspondents"},
      {"Number of savers", "savers"},
      {"Number of debtors", "debtors"},
      {"Total assets of the organization", "total_assets"},
      {"Client portfolio for the period", "client_portfolio"},
      {"Net client portfolio for the period", "net_client_portfolio"},
      {"Clients' consumer portfolio for the period", "consumer_portfolio"},
      {"Clients' housing portfolio for the period", "housing_portfolio"},
      {"Customer commercial portfolio for the period", "commercial_portfolio"},
      {"Clients' micro portfolio for the period", "micro_portfolio"},
      {"Total investments of the organization", "total_investments"},
      {"Cash receivable under agreement", "receivables_under_agreement"},
      {"Total liabilities for the period", "total_liabilities"},
      {"Total deposits", "total_deposits"},
      {"Total deposits in bank accounts", "demand_deposits"},
      {"Total CDT deposits", "cdt_deposits"},
      {"Total contractual deposits", "contractual_deposits"},
      {"Total permanent savings deposits", "permanent_savings_deposits"},
      {"Total equity", "total_equity"},
      {"Total social contributions", "social_contributions"},
      {"Total surplus", "total_surplus"},
      {"Total income for the period", "total_income"},
      {"Total expenses for the period", "total_expenses"},
      {"Total gross portfolio", "gross_portfolio"},
      {"Total past due portfolio", "past_due_portfolio"},
      {"Total female members", "female_members"},
      {"Total male members", "male_members"},
      {"Consolidated risk rating", "consolidated_risk_rating"},
      {"Risk rating", "risk_rating"},
      {"Camel rating", "camel_rating"},
      {"Credit risk", "credit_risk"},
      {"Liquidity risk", "liquidity_risk"},
      {"Operational Risk", "operational_risk"},
      {"Sarassoft risk", "sarassoft_risk"},
      {"Total capital of the organization", "total_capital"},
      {"Total assets of the organization", "total_assets"},
      {"Total administration expenses", "administration_expenses"},
      {"Total profitability of the organization", "profitability"},
      {"Organization's liquidity", "liquidity"},
      {"Other associates", "other_members"},
      {"Risk weighting", "risk_label"},
  };
  return vars;
}

const std::vector<std::string>& default_variation_columns() {
  static const std::vector<std::string> cols = {
      "associates",          "employees",
      "offices",             "savers",
      "debtors",             "total_assets",
      "gross_portfolio",     "consumer_portfolio",
      "housing_portfolio",   "commercial_portfolio",
      "micro_portfolio",     "total_investments",
      "receivables_under_agreement", "total_liabilities",
      "total_deposits",      "demand_deposits",
      "cdt_deposits",        "contractual_deposits",
      "permanent_savings_deposits",  "total_equity",
      "social_contributions", "total_surplus",
      "total_income",        "total_expenses",
      "past_due_portfolio",  "female_members",
      "male_members",        "other_members",
  };
  return cols;
}

const std::vector<std::string>& default_camels_columns() {
  static const std::vector<std::string> cols = {
      "consolidated_risk_rating", "risk_rating",    "camel_rating",  "credit_risk",
      "liquidity_risk",           "operational_risk", "sarassoft_risk",
  };
  return cols;
}

}  // namespace seerisk
