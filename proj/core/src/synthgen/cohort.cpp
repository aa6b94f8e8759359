#include "seerisk/synthgen/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <map>
#include <set>
#include <sstream>

namespace seerisk {

void CohortSpec::validate() const {
  if (n_entities < 1) throw ConfigError("cohort needs at least one entity");
  if (last_period < first_period) {
    throw ConfigError("empty period range " + format_period(first_period) + ".." + format_period(last_period));
  }
  double total = 0;
  for (double s : class_shares) {
    if (!(s >= 0) || !std::isfinite(s)) throw ConfigError("class shares must be finite and non-negative");
    total += s;
  }
  if (!(total > 0)) throw ConfigError("class shares sum to zero");
  if (!(gap_probability >= 0 && gap_probability < 1)) throw ConfigError("gap_probability must be in [0, 1)");
  if (!(missing_rate >= 0 && missing_rate < 1)) throw ConfigError("missing_rate must be in [0, 1)");
  if (!(signal_strength >= 0 && signal_strength <= 1)) throw ConfigError("signal_strength must be in [0, 1]");
  if (window < 1) throw ConfigError("window must be at least 1");
}

std::array<double, kNumClasses> CohortSpec::normalized_shares() const {
  double total = std::accumulate(class_shares.begin(), class_shares.end(), 0.0);
  auto out = class_shares;
  for (auto& s : out) s /= total;
  return out;
}

CohortSpec cohort_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("cohort spec must be a JSON object");
  static const std::set<std::string> known = {"n_entities",      "first_period",      "last_period",
                                              "class_shares",    "gap_probability",   "missing_rate",
                                              "signal_strength", "seed",              "min_class_members",
                                              "window"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown cohort spec field '" + key + "'");
  }
  CohortSpec s;
  try {
    if (j.contains("n_entities")) s.n_entities = j.at("n_entities").get<std::size_t>();
    if (j.contains("first_period")) s.first_period = parse_period(j.at("first_period").get<std::string>());
    if (j.contains("last_period")) s.last_period = parse_period(j.at("last_period").get<std::string>());
    if (j.contains("class_shares")) s.class_shares = j.at("class_shares").get<std::array<double, kNumClasses>>();
    if (j.contains("gap_probability")) s.gap_probability = j.at("gap_probability").get<double>();
    if (j.contains("missing_rate")) s.missing_rate = j.at("missing_rate").get<double>();
    if (j.contains("signal_strength")) s.signal_strength = j.at("signal_strength").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("min_class_members")) s.min_class_members = j.at("min_class_members").get<std::size_t>();
    if (j.contains("window")) s.window = j.at("window").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cohort spec: ") + e.what());
  } catch (const DataError& e) {
    throw ConfigError(std::string("cohort spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json cohort_spec_to_json(const CohortSpec& s) {
  return {{"n_entities", s.n_entities},
          {"first_period", format_period(s.first_period)},
          {"last_period", format_period(s.last_period)},
          {"class_shares", s.class_shares},
          {"gap_probability", s.gap_probability},
          {"missing_rate", s.missing_rate},
          {"signal_strength", s.signal_strength},
          {"seed", s.seed},
          {"min_class_members", s.min_class_members},
          {"window", s.window}};
}

namespace {

// Invented generative choices; none of these is calibrated to real data.
constexpr double kGrowthPersistence = 0.3;
constexpr double kGrowthShock = 0.3;
constexpr double kNatureWeight = 1.0;
constexpr double kGrowthWeight = 1.5;
constexpr double kBaseNoise = 0.1;
constexpr double kTrendPerPeriod = 0.03;

struct MonetaryColumn {
  const char* name;
  double share_of_assets;
};

constexpr MonetaryColumn kMonetary[] = {
    {"total_assets", 1.0},
    {"client_portfolio", 0.65},
    {"net_client_portfolio", 0.6},
    {"consumer_portfolio", 0.35},
    {"housing_portfolio", 0.1},
    {"commercial_portfolio", 0.12},
    {"micro_portfolio", 0.08},
    {"total_investments", 0.1},
    {"receivables_under_agreement", 0.03},
    {"total_liabilities", 0.7},
    {"total_deposits", 0.55},
    {"demand_deposits", 0.15},
    {"cdt_deposits", 0.25},
    {"contractual_deposits", 0.05},
    {"permanent_savings_deposits", 0.1},
    {"total_equity", 0.3},
    {"social_contributions", 0.18},
    {"total_income", 0.12},
    {"total_expenses", 0.11},
    {"gross_portfolio", 0.66},
    {"total_capital", 0.25},
    {"administration_expenses", 0.04},
};

constexpr std::size_t kGrossPortfolio = 19;
static_assert(std::string_view(kMonetary[kGrossPortfolio].name) == "gross_portfolio");

struct Categorical {
  const char* name;
  std::vector<std::string> values;
};

const std::vector<Categorical>& static_categoricals() {
  static const std::vector<Categorical> cats = {
      {"organization_type", {"savings_credit", "multiactive", "integral"}},
      {"company_type", {"specialized", "non_specialized"}},
      {"supervision_level", {"1", "2", "3"}},
      {"niif_group", {"1", "2", "3"}},
      {"department", {"D01", "D02", "D03", "D04", "D05"}},
      {"municipality", {"M01", "M02", "M03", "M04", "M05", "M06", "M07", "M08"}},
      {"category", {"full", "intermediate", "basic"}},
  };
  return cats;
}

struct Layout {
  std::size_t legal_nature;
  std::vector<std::size_t> categoricals;  // aligned with static_categoricals()
  std::vector<std::size_t> monetary;      // aligned with kMonetary
  std::size_t past_due, total_surplus, profitability, liquidity;
  std::size_t associates, employees, offices, correspondents, savers, debtors;
  std::size_t female, male, other;
  std::vector<std::size_t> ratings;

  explicit Layout(const ColumnSchema& s) {
    legal_nature = s.index_of("legal_nature");
    for (const auto& c : static_categoricals()) categoricals.push_back(s.index_of(c.name));
    for (const auto& m : kMonetary) monetary.push_back(s.index_of(m.name));
    past_due = s.index_of("past_due_portfolio");
    total_surplus = s.index_of("total_surplus");
    profitability = s.index_of("profitability");
    liquidity = s.index_of("liquidity");
    associates = s.index_of("associates");
    employees = s.index_of("employees");
    offices = s.index_of("offices");
    correspondents = s.index_of("correspondents");
    savers = s.index_of("savers");
    debtors = s.index_of("debtors");
    female = s.index_of("female_members");
    male = s.index_of("male_members");
    other = s.index_of("other_members");
    for (const auto& c : default_camels_columns()) ratings.push_back(s.index_of(c));
  }
};

struct SimRecord {
  EntityPeriodRecord record;
  double score = 0;
  bool eligible = false;
};

std::string entity_name(std::size_t e, std::size_t n) {
  auto digits = std::max<std::size_t>(5, std::to_string(n).size());
  auto s = std::to_string(e + 1);
  return "SEE" + std::string(digits - s.size(), '0') + s;
}

double lognormal(Rng& rng, double log_mean, double log_sd) { return std::exp(log_mean + log_sd * rng.normal()); }

double small_count(double base, Rng& rng) {
  return std::max(0.0, std::round(base * std::exp(0.05 * rng.normal())));
}

std::vector<SimRecord> simulate_entity(const CohortSpec& spec, const PanelDataset& shape, const Layout& at,
                                       std::size_t e) {
  Rng rng(mix_seed(spec.seed, e));
  const std::string id = entity_name(e, spec.n_entities);
  const int n_periods = spec.last_period.value() - spec.first_period.value() + 1;
  const double s = spec.signal_strength;
  const double noise = kBaseNoise + (1.0 - s);
  const double growth_sd = kGrowthShock / std::sqrt(1.0 - kGrowthPersistence * kGrowthPersistence);

  // Static profile.
  double u = rng.uniform01();
  std::string nature = u < 0.3 ? "cooperative" : (u < 0.5 ? "employee_fund" : "other");
  const double risky = nature == "other" ? 0.0 : 1.0;
  std::vector<std::string> cats;
  for (const auto& c : static_categoricals()) cats.push_back(c.values[rng.uniform_index(c.values.size())]);
  const double size = lognormal(rng, std::log(5e9), 1.0);
  std::vector<double> level;
  for (const auto& m : kMonetary) level.push_back(size * m.share_of_assets * std::exp(0.25 * rng.normal()));
  const double members = lognormal(rng, std::log(800), 1.0);
  const double staff = lognormal(rng, std::log(12), 0.8);
  const double branches = 1 + std::floor(lognormal(rng, 0, 0.7));
  const double agents = std::floor(lognormal(rng, 0, 1.0));
  const double female_share = 0.3 + 0.3 * rng.uniform01();
  const double male_share = (1 - female_share) * (0.8 + 0.2 * rng.uniform01());
  const double margin = 0.04 + 0.03 * rng.normal();
  const double liquid = 0.2 + 0.06 * rng.normal();
  double past_due = level[kGrossPortfolio] * 0.05 * std::exp(0.3 * rng.normal());

  // Growth of the past-due portfolio, starting two periods early so that
  // the first emitted period has a lagged growth and a lagged score.
  double growth_prev2 = growth_sd * rng.normal();
  double growth_prev = kGrowthPersistence * growth_prev2 + kGrowthShock * rng.normal();
  double prev_score = s * (kNatureWeight * risky + kGrowthWeight * growth_prev2 / growth_sd) + noise * rng.normal();

  std::vector<SimRecord> out;
  std::vector<bool> present;
  for (int k = 0; k < n_periods; ++k) {
    const double growth = kGrowthPersistence * growth_prev + kGrowthShock * rng.normal();
    past_due *= std::exp(growth);
    const double score =
        s * (kNatureWeight * risky + kGrowthWeight * growth_prev / growth_sd) + noise * rng.normal();

    bool here = rng.uniform01() >= spec.gap_probability;
    auto rec = shape.blank_record(id, spec.first_period.offset(k));
    auto put = [&](std::size_t col, CellValue v) {
      if (rng.uniform01() >= spec.missing_rate) rec.values[col] = std::move(v);
    };

    put(at.legal_nature, nature);
    for (std::size_t c = 0; c < cats.size(); ++c) put(at.categoricals[c], cats[c]);
    const double drift = std::exp(kTrendPerPeriod * k);
    double income = 0, expenses = 0;
    for (std::size_t m = 0; m < level.size(); ++m) {
      double v = level[m] * drift * std::exp(0.05 * rng.normal());
      if (std::string_view(kMonetary[m].name) == "total_income") income = v;
      if (std::string_view(kMonetary[m].name) == "total_expenses") expenses = v;
      put(at.monetary[m], std::round(v));
    }
    put(at.past_due, std::round(past_due));
    put(at.total_surplus, std::round(income - expenses));
    put(at.profitability, margin + 0.01 * rng.normal());
    put(at.liquidity, liquid + 0.02 * rng.normal());

    const double assoc = small_count(members * std::exp(0.02 * k), rng);
    put(at.associates, assoc);
    put(at.employees, small_count(staff, rng));
    put(at.offices, small_count(branches, rng));
    put(at.correspondents, small_count(agents, rng));
    put(at.savers, small_count(0.7 * assoc, rng));
    put(at.debtors, small_count(0.4 * assoc, rng));
    const double female = std::round(assoc * female_share);
    const double male = std::min(assoc - female, std::round(assoc * male_share));
    put(at.female, female);
    put(at.male, male);
    put(at.other, assoc - female - male);

    // Supervisory ratings on a 1..5 scale, loosely tracking last period's score.
    for (auto col : at.ratings) {
      put(col, std::clamp(3.0 + 0.6 * prev_score + 1.0 * rng.normal(), 1.0, 5.0));
    }

    present.push_back(here);
    if (here) {
      bool eligible = k >= spec.window;
      for (int w = 1; eligible && w <= spec.window; ++w) eligible = present[static_cast<std::size_t>(k - w)];
      out.push_back({std::move(rec), score, eligible});
    }
    growth_prev = growth;
    prev_score = score;
  }
  return out;
}

// Class sizes over `n` ranked records: largest remainder on the shares, then
// each class topped up to `minimum` from the largest classes.
std::array<std::size_t, kNumClasses> class_sizes(const std::array<double, kNumClasses>& shares, std::size_t n,
                                                 std::size_t minimum) {
  std::array<std::size_t, kNumClasses> sizes{};
  std::array<double, kNumClasses> rem{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    double exact = shares[c] * static_cast<double>(n);
    sizes[c] = static_cast<std::size_t>(std::floor(exact));
    rem[c] = exact - static_cast<double>(sizes[c]);
    assigned += sizes[c];
  }
  std::array<std::size_t, kNumClasses> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % kNumClasses]];

  if (minimum * kNumClasses > n) {
    throw ConfigError("cohort has " + std::to_string(n) + " labelled windows, too few to give every class " +
                      std::to_string(minimum) + " members");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    while (sizes[c] < minimum) {
      auto donor = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      --sizes[donor];
      ++sizes[c];
    }
  }
  return sizes;
}

}  // namespace

GeneratedCohort generate_cohort(const CohortSpec& spec) {
  spec.validate();
  GeneratedCohort out;
  out.panel.schema = default_schema();
  const Layout layout(out.panel.schema);

  std::vector<SimRecord> all;
  for (std::size_t e = 0; e < spec.n_entities; ++e) {
    auto recs = simulate_entity(spec, out.panel, layout, e);
    std::move(recs.begin(), recs.end(), std::back_inserter(all));
  }

  // Rank the records that can become supervised targets; everything else is
  // labelled by where its score falls in that ranking.
  std::vector<std::size_t> ranked;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].eligible) ranked.push_back(i);
  }
  if (ranked.empty()) {
    ranked.resize(all.size());
    std::iota(ranked.begin(), ranked.end(), 0);
  }
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return all[a].score != all[b].score ? all[a].score < all[b].score : a < b;
  });
  auto sizes = class_sizes(spec.normalized_shares(), ranked.size(), spec.min_class_members);
  std::vector<int> rank_class(ranked.size());
  std::vector<double> rank_score(ranked.size());
  for (std::size_t pos = 0, c = 0, used = 0; pos < ranked.size(); ++pos) {
    while (used == sizes[c]) {
      ++c;
      used = 0;
    }
    rank_class[pos] = static_cast<int>(c) + 1;
    rank_score[pos] = all[ranked[pos]].score;
    all[ranked[pos]].record.risk_label = rank_class[pos];
    ++used;
  }
  for (auto& r : all) {
    if (r.record.risk_label) continue;
    auto pos = static_cast<std::size_t>(std::lower_bound(rank_score.begin(), rank_score.end(), r.score) -
                                        rank_score.begin());
    r.record.risk_label = rank_class[std::min(pos, rank_class.size() - 1)];
  }

  out.panel.records.reserve(all.size());
  for (auto& r : all) {
    ++out.label_histogram[static_cast<std::size_t>(*r.record.risk_label - 1)];
    out.panel.records.push_back(std::move(r.record));
  }

  Rng macro_rng(mix_seed(spec.seed, 0x3AC40));
  const int n_periods = spec.last_period.value() - spec.first_period.value() + 1;
  for (int k = -spec.window; k < n_periods; ++k) {
    MacroIndicators m;
    m.cpi = 100.0 * std::exp(0.018 * (k + spec.window) + 0.004 * macro_rng.normal());
    m.unemployment_rate = std::max(0.02, 0.09 + 0.01 * macro_rng.normal());
    m.gdp = 4.5e14 * std::exp(0.012 * (k + spec.window) + 0.01 * macro_rng.normal());
    out.macro.set(spec.first_period.offset(k), m);
  }
  return out;
}

CohortSummary describe_cohort(const PanelDataset& data) {
  CohortSummary s;
  s.records = data.records.size();
  std::map<std::string, std::set<int>> filings;
  std::set<int> periods;
  for (const auto& r : data.records) {
    filings[r.entity_id].insert(r.period.value());
    periods.insert(r.period.value());
    if (r.risk_label && is_valid_risk(*r.risk_label)) {
      ++s.histogram[static_cast<std::size_t>(*r.risk_label - 1)];
    } else {
      ++s.unlabelled_records;
    }
  }
  s.entities = filings.size();
  s.periods = periods.size();
  if (!periods.empty()) {
    s.first_period = PeriodIndex(*periods.begin());
    s.last_period = PeriodIndex(*periods.rbegin());
  }

  std::size_t blanks = 0, cells = 0;
  for (auto col : data.schema.feature_indices()) {
    std::size_t missing = 0;
    for (const auto& r : data.records) missing += is_missing(r.values[col]);
    blanks += missing;
    cells += data.records.size();
    s.missing_rates.emplace_back(data.schema[col].name,
                                 s.records ? static_cast<double>(missing) / static_cast<double>(s.records) : 0.0);
  }
  s.overall_missing_rate = cells ? static_cast<double>(blanks) / static_cast<double>(cells) : 0.0;

  if (s.first_period) {
    for (int p = s.first_period->value(); p + 3 <= s.last_period->value(); ++p) {
      WindowCoverage w{PeriodIndex(p), 0};
      for (const auto& [_, filed] : filings) {
        bool all = true;
        for (int k = 0; k < 4 && all; ++k) all = filed.contains(p + k);
        w.entities += all;
      }
      s.window_coverage.push_back(w);
    }
  }
  return s;
}

nlohmann::json summary_to_json(const CohortSummary& s) {
  nlohmann::json j;
  j["histogram"] = s.histogram;
  j["entities"] = s.entities;
  j["records"] = s.records;
  j["unlabelled_records"] = s.unlabelled_records;
  j["periods"] = s.periods;
  j["first_period"] = s.first_period ? nlohmann::json(format_period(*s.first_period)) : nlohmann::json(nullptr);
  j["last_period"] = s.last_period ? nlohmann::json(format_period(*s.last_period)) : nlohmann::json(nullptr);
  j["overall_missing_rate"] = s.overall_missing_rate;
  auto rates = nlohmann::json::object();
  for (const auto& [name, rate] : s.missing_rates) rates[name] = rate;
  j["missing_rates"] = rates;
  auto windows = nlohmann::json::array();
  for (const auto& w : s.window_coverage) {
    windows.push_back({{"first", format_period(w.first)}, {"last", format_period(w.first.offset(3))},
                       {"entities", w.entities}});
  }
  j["window_coverage"] = windows;
  return j;
}

std::string render_summary(const CohortSummary& s) {
  std::ostringstream out;
  out << "entities  " << s.entities << "\nrecords   " << s.records << "\nperiods   " << s.periods;
  if (s.first_period) out << " (" << format_period(*s.first_period) << " .. " << format_period(*s.last_period) << ")";
  out << "\n\nclass  records\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) out << "  " << c + 1 << "    " << s.histogram[c] << '\n';
  out << "  -    " << s.unlabelled_records << "\n\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "missing cells  %.3f%%\n", 100.0 * s.overall_missing_rate);
  out << buf;
  if (!s.window_coverage.empty()) {
    out << "\nfour consecutive periods  entities\n";
    for (const auto& w : s.window_coverage) {
      out << "  " << format_period(w.first) << " .. " << format_period(w.first.offset(3)) << "      "
          << w.entities << '\n';
    }
  }
  return out.str();
}

}  // namespace seerisk
