#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "seerisk/commands.hpp"
#include "seerisk/io/config.hpp"
#include "seerisk/io/model_file.hpp"
#include "seerisk/synthgen/cohort.hpp"
#include "support.hpp"

namespace seerisk {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = SEERISK_FIXTURES_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("seerisk_cli_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path small_spec(std::size_t entities = 80, std::uint64_t seed = 1) {
    CohortSpec spec;
    spec.n_entities = entities;
    spec.seed = seed;
    auto p = dir / "spec.json";
    spit(p, cohort_spec_to_json(spec).dump());
    return p;
  }
};

TEST_F(CliTest, GenWritesSchemaHeader) {
  auto r = run_cli({"gen", small_spec().string(), "--out", (dir / "data").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "data" / "panel.csv");
  std::string header;
  std::getline(in, header);
  std::string expected;
  const auto schema = default_schema();
  for (const auto& c : schema.columns()) expected += (expected.empty() ? "" : ",") + c.name;
  EXPECT_EQ(header, expected);
  auto cohort = json::parse(slurp(dir / "data" / "cohort.json"));
  EXPECT_EQ(cohort.at("format_version"), 1);
  EXPECT_EQ(cohort.at("seed"), 1);
  EXPECT_TRUE(cohort.contains("config_hash"));
}

TEST_F(CliTest, GenIsDeterministic) {
  auto spec = small_spec().string();
  ASSERT_EQ(run_cli({"gen", spec, "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(run_cli({"gen", spec, "--out", (dir / "b").string()}).code, 0);
  for (const char* f : {"panel.csv", "macro.csv", "cohort.json"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
}

TEST_F(CliTest, GenMissingSpecIsConfigError) {
  auto missing = (dir / "nowhere.json").string();
  auto r = run_cli({"gen", missing, "--out", dir.string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST_F(CliTest, ParseErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"--format", "xml", "inspect"}).code, cli::kExitConfig);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, MissingPanelFileIsConfigError) {
  auto r = run_cli({"inspect", "--panel", (dir / "absent.csv").string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
}

TEST_F(CliTest, MalformedPanelIsDataError) {
  std::string header;
  const auto schema = default_schema();
  for (const auto& c : schema.columns()) header += (header.empty() ? "" : ",") + c.name;
  spit(dir / "bad.csv", header + "\nSEE1,2016-7\n");
  auto r = run_cli({"inspect", "--panel", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, cli::kExitData) << r.err;
}

class TrainedCli : public CliTest {
 protected:
  fs::path data, config;
  void SetUp() override {
    CliTest::SetUp();
    data = dir / "data";
    ASSERT_EQ(run_cli({"gen", small_spec(120, 3).string(), "--out", data.string()}).code, 0);
  }
  fs::path write_config(const std::string& variant, bool with_macro, const std::string& extra = "") {
    json j = {{"panel", (data / "panel.csv").string()},
              {"model", (dir / ("model_" + variant + ".json")).string()},
              {"seed", 9},
              {"features", {{"variant", variant}}},
              {"learner", {{"n_trees", 8}, {"max_depth", 6}}}};
    if (with_macro) j["macro"] = (data / "macro.csv").string();
    if (!extra.empty()) j.update(json::parse(extra));
    auto p = dir / ("config_" + variant + ".json");
    spit(p, j.dump(2));
    return p;
  }
};

TEST_F(TrainedCli, M1ManifestHasNoVariationOrMacro) {
  auto cfg = write_config("M1", false);
  auto r = run_cli({"--config", cfg.string(), "--out", (dir / "out").string(), "train"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto model = load_model(dir / "model_M1.json");
  for (const auto& c : model.preprocessor.manifest) {
    EXPECT_NE(c.transform, "variation");
    EXPECT_NE(c.transform, "macro");
  }
  auto report = json::parse(slurp(dir / "out" / "train_report.json"));
  EXPECT_EQ(report.at("seed"), 9);
  EXPECT_EQ(report.at("config_hash"), model.config_hash);
  EXPECT_TRUE(report.at("seeds").contains("split"));
}

TEST_F(TrainedCli, M3WithoutMacroNamesTheInput) {
  auto cfg = write_config("M3", false);
  auto r = run_cli({"--config", cfg.string(), "train"});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("macro"), std::string::npos);
}

TEST_F(TrainedCli, SearchTrialLogInReport) {
  auto cfg = write_config("M2", false, R"({"search": {"max_depth": [2, 4, 6], "n_trials": 5, "seed": 1}})");
  auto r = run_cli({"--config", cfg.string(), "--out", (dir / "out").string(), "train"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = json::parse(slurp(dir / "out" / "train_report.json"));
  const auto& trials = report.at("search").at("trials");
  ASSERT_EQ(trials.size(), 5u);
  for (const auto& t : trials) {
    EXPECT_TRUE(t.at("validation_accuracy").is_number());
    EXPECT_TRUE(t.at("params").contains("max_depth"));
  }
}

TEST_F(TrainedCli, VariantMismatchIsConfigError) {
  auto m1 = write_config("M1", false);
  ASSERT_EQ(run_cli({"--config", m1.string(), "train"}).code, 0);
  auto m2 = write_config("M2", false);
  auto r = run_cli({"--config", m2.string(), "evaluate", "--model", (dir / "model_M1.json").string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
}

TEST_F(TrainedCli, ArtifactsReproducible) {
  auto cfg = write_config("M3", true);
  for (const char* sub : {"a", "b"}) {
    auto out = (dir / sub).string();
    ASSERT_EQ(run_cli({"--config", cfg.string(), "--out", out, "train", "--model", out + "/model.json"}).code, 0);
    ASSERT_EQ(run_cli({"--config", cfg.string(), "--out", out, "evaluate", "--holdout", "--model",
                       out + "/model.json"}).code, 0);
    ASSERT_EQ(run_cli({"--config", cfg.string(), "--out", out, "rank", "--model", out + "/model.json"}).code, 0);
  }
  for (const char* f : {"model.json", "train_report.json", "report.json", "report.txt", "ranking.json"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  auto ranking = json::parse(slurp(dir / "a" / "ranking.json"));
  EXPECT_EQ(ranking.at("format_version"), 1);
  EXPECT_EQ(ranking.at("seed"), 9);
}

TEST_F(TrainedCli, HoldoutMatchesTrainingReport) {
  auto cfg = write_config("M2", false);
  auto out = (dir / "out").string();
  ASSERT_EQ(run_cli({"--config", cfg.string(), "--out", out, "train"}).code, 0);
  ASSERT_EQ(run_cli({"--config", cfg.string(), "--out", out, "evaluate", "--holdout"}).code, 0);
  auto train = json::parse(slurp(dir / "out" / "train_report.json"));
  auto eval = json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_EQ(train.at("holdout").at("counts"), eval.at("metrics").at("counts"));
}

TEST_F(TrainedCli, RankMatchesRescoreOracle) {
  ASSERT_EQ(run_cli({"gen", small_spec(1000, 8).string(), "--out", data.string()}).code, 0);
  auto cfg = write_config("M3", true);
  ASSERT_EQ(run_cli({"--config", cfg.string(), "train"}).code, 0);
  auto r = run_cli({"--config", cfg.string(), "--format", "json", "rank"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ranked = json::parse(r.out).at("ranked");

  // Oracle: score every eligible entity through the saved model and sort.
  auto model = load_model(dir / "model_M3.json");
  auto panel = read_panel_csv(data / "panel.csv", default_schema());
  auto macro = read_macro_csv(data / "macro.csv");
  auto windows = build_scoring_windows(panel, model.window.length, model.window.max_missing_fraction).windows;
  prepare_features(windows, model.preprocessor.config, &macro);
  auto fm = materialize(windows, model.preprocessor);
  std::vector<std::pair<double, std::string>> expected;
  for (std::size_t i = 0; i < fm.x.rows(); ++i) {
    auto v = model.classifier.predict(fm.x.row(i));
    expected.emplace_back(-(v.fractions[3] + v.fractions[4]), fm.entity_ids[i]);
  }
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(ranked.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(ranked[i].at("entity_id"), expected[i].second);
    EXPECT_DOUBLE_EQ(ranked[i].at("score").get<double>(), -expected[i].first);
  }
}

TEST_F(TrainedCli, RankTopK) {
  auto cfg = write_config("M1", false);
  ASSERT_EQ(run_cli({"--config", cfg.string(), "train"}).code, 0);
  auto r = run_cli({"--config", cfg.string(), "--format", "json", "rank", "--top-k", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("ranked").size(), 3u);
}

// Hand-built models over a five-column schema.
class StubCli : public CliTest {
 protected:
  PanelDataset panel{testing::tiny_schema(), {}};
  fs::path schema_path, panel_path, model_path;

  void SetUp() override {
    CliTest::SetUp();
    schema_path = dir / "schema.json";
    panel_path = dir / "panel.csv";
    model_path = dir / "model.json";
    spit(schema_path, schema_to_json(panel.schema).dump());
  }

  void write_panel() {
    std::ostringstream csv;
    write_panel_csv(csv, panel);
    spit(panel_path, csv.str());
  }

  FittedPreprocessor fit_m1(LagWindowSet& set) {
    FeatureSetConfig cfg;
    cfg.variant = FeatureVariant::M1;
    std::vector<std::size_t> rows(set.rows.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit_preprocessor(set, rows, cfg);
  }

  void save(const FittedPreprocessor& pre, Classifier classifier) {
    ModelFile m;
    m.preprocessor = pre;
    m.classifier = std::move(classifier);
    m.seed = 1;
    m.config_hash = "0000000000000000";
    m.training = {{"split", {{"train_fraction", 0.7}, {"stratify", true}, {"seed", 1}}}};
    save_model(model_path, m);
  }

  std::vector<std::string> base_args() {
    return {"--schema", schema_path.string(), "--panel", panel_path.string(), "--format", "json"};
  }
};

TEST_F(StubCli, RankHighRiskFirstAndListsShortHistories) {
  testing::add_entity(panel, "LOW", {"2016-1", "2016-2", "2017-1"});
  testing::add_entity(panel, "HIGH", {"2016-1", "2016-2", "2017-1"});
  testing::add_entity(panel, "SHORT", {"2016-2", "2017-1"});
  for (auto& r : panel.records) {
    if (r.entity_id == "HIGH") r.values[4] = 50.0;
  }
  write_panel();

  auto set = build_scoring_windows(panel).windows;
  auto pre = fit_m1(set);
  std::size_t members = 0;
  while (pre.manifest[members].name != "members_lag1") ++members;
  TreeNode root, low, high;
  root.feature = static_cast<int>(members);
  root.threshold = signed_log1p(20.0);
  root.left = 1;
  root.right = 2;
  low.counts = {0, 1, 0, 0, 0};
  high.counts = {0, 0, 0, 0, 1};
  root.counts = {0, 1, 0, 0, 1};
  RandomForest forest({DecisionTree({root, low, high}, pre.manifest.size())}, pre.manifest.size());
  save(pre, Classifier(forest));

  auto args = base_args();
  for (auto a : {"rank", "--model", model_path.c_str()}) args.push_back(a);
  auto r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_EQ(j.at("ranked").size(), 2u);
  EXPECT_EQ(j.at("ranked")[0].at("entity_id"), "HIGH");
  EXPECT_EQ(j.at("ranked")[0].at("predicted_class"), 5);
  EXPECT_EQ(j.at("ranked")[1].at("entity_id"), "LOW");
  EXPECT_EQ(j.at("ranked")[1].at("predicted_class"), 2);
  ASSERT_EQ(j.at("ineligible").size(), 1u);
  EXPECT_EQ(j.at("ineligible")[0].at("entity_id"), "SHORT");
  EXPECT_EQ(j.at("ineligible")[0].at("reason"), "insufficient history");
}

TEST_F(StubCli, RankWithoutEligibleEntitiesIsDataError) {
  testing::add_entity(panel, "A", {"2016-1", "2016-2", "2017-1"});
  write_panel();
  auto set = build_scoring_windows(panel).windows;
  auto pre = fit_m1(set);
  TreeNode leaf;
  leaf.counts = {0, 1, 0, 0, 0};
  save(pre, Classifier(RandomForest({DecisionTree({leaf}, pre.manifest.size())}, pre.manifest.size())));

  panel.records.pop_back();
  write_panel();
  auto args = base_args();
  for (auto a : {"rank", "--model", model_path.c_str()}) args.push_back(a);
  EXPECT_EQ(run_cli(args).code, cli::kExitData);
}

TEST_F(StubCli, PerfectModelGivesIdentityMatrix) {
  // Label of each target equals the member count filed one period earlier.
  Rng rng(5);
  for (int e = 0; e < 40; ++e) {
    std::string id = "E" + std::to_string(e);
    testing::add_entity(panel, id, {"2016-1", "2016-2", "2017-1", "2017-2", "2018-1", "2018-2"});
  }
  for (auto& r : panel.records) r.values[4] = static_cast<double>(1 + rng.uniform_index(5));
  for (std::size_t i = 0; i < panel.records.size(); ++i) {
    auto& r = panel.records[i];
    r.risk_label = i % 6 == 0 ? 1 : static_cast<int>(std::get<double>(panel.records[i - 1].values[4]));
  }
  write_panel();

  auto set = build_lag_windows(panel);
  auto pre = fit_m1(set);
  auto fm = materialize(set, pre);
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.tree.features_per_split = FeaturesPerSplit::all();
  save(pre, Classifier(fit_forest(fm.x, fm.y, p)));

  auto args = base_args();
  for (auto a : {"evaluate", "--model", model_path.c_str()}) args.push_back(a);
  auto r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  auto counts = json::parse(r.out).at("metrics").at("counts");
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (i != j) EXPECT_EQ(counts[i][j], 0);
    }
  }
  EXPECT_EQ(json::parse(r.out).at("metrics").at("accuracy"), 1.0);
}

TEST(GoldenCli, EvaluateMatchesCommittedReport) {
  auto out = fs::temp_directory_path() / "seerisk_golden_eval";
  fs::remove_all(out);
  auto r = run_cli({"--panel", (kFixtures / "panel.csv").string(), "--macro", (kFixtures / "macro.csv").string(),
                    "--out", out.string(), "evaluate", "--model", (kFixtures / "model.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out / "report.json"), slurp(kFixtures / "golden_report.json"));
  EXPECT_EQ(slurp(out / "report.txt"), slurp(kFixtures / "golden_report.txt"));
  fs::remove_all(out);
}

}  // namespace
}  // namespace seerisk
