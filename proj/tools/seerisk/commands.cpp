#include "seerisk/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "seerisk/domain/csv.hpp"
#include "seerisk/io/config.hpp"
#include "seerisk/io/model_file.hpp"
#include "seerisk/synthgen/cohort.hpp"

namespace seerisk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "table";
  std::optional<std::size_t> threads;
  std::string panel;
  std::string macro;
  std::string model;
  std::string schema;
  std::string spec;
  std::size_t top_k = 0;
  bool holdout = false;
};

class Context {
 public:
  Context(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {
    if (!opt.config.empty()) run_ = load_run_config(opt.config);
    auto& p = run_.paths;
    if (!opt.panel.empty()) p.panel = opt.panel;
    if (!opt.macro.empty()) p.macro = opt.macro;
    if (!opt.model.empty()) p.model = opt.model;
    if (!opt.schema.empty()) p.schema = opt.schema;
    if (opt.seed) run_.pipeline.seed = *opt.seed;
    if (opt.threads) run_.pipeline.learner.forest.threads = *opt.threads;
    out_dir_ = opt.out_dir;
    if (out_dir_.empty() && p.report_dir) out_dir_ = p.report_dir->string();
  }

  const Options& opt() const { return opt_; }
  const std::string& out_dir() const { return out_dir_; }
  const RunConfig& run() const { return run_; }
  bool json_output() const { return opt_.format == "json"; }
  std::ostream& out() { return out_; }

  PanelDataset panel() const {
    if (!run_.paths.panel) throw ConfigError("no panel CSV given: set \"panel\" in the config or pass --panel");
    auto schema = run_.paths.schema ? load_schema(*run_.paths.schema) : default_schema();
    auto data = read_panel_csv(*run_.paths.panel, schema);
    auto violations = validate_dataset(data);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << run_.paths.panel->string() << " has " << violations.size() << " invalid value(s)";
      for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 5); ++i) {
        const auto& v = violations[i];
        msg << "\n  " << v.entity_id;
        if (v.period) msg << ' ' << format_period(*v.period);
        msg << ' ' << v.column << ": " << v.message;
      }
      throw DataError(msg.str());
    }
    return data;
  }

  /// nullopt when no macro CSV is configured.
  std::optional<MacroTable> macro(FeatureVariant variant) const {
    if (!run_.paths.macro) {
      if (variant == FeatureVariant::M3) {
        throw ConfigError("feature set M3 needs the macro CSV: set \"macro\" in the config or pass --macro");
      }
      return std::nullopt;
    }
    return read_macro_csv(*run_.paths.macro);
  }

  ModelFile model() const {
    if (!run_.paths.model) throw ConfigError("no model file given: set \"model\" in the config or pass --model");
    if (!fs::exists(*run_.paths.model)) throw ConfigError("model file not found: " + run_.paths.model->string());
    return load_model(*run_.paths.model);
  }

  /// Writes an artifact into --out, if one was given.
  void artifact(const std::string& name, const std::string& text) const {
    if (!out_dir_.empty()) write_text_file(fs::path(out_dir_) / name, text);
  }

  void emit(const json& doc, const std::string& table) {
    if (json_output()) {
      out_ << doc.dump(2) << '\n';
    } else {
      out_ << table;
    }
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  RunConfig run_;
  std::string out_dir_;
};

json envelope(const std::string& kind, std::uint64_t seed, const std::string& hash) {
  return {{"format_version", kFormatVersion}, {"kind", kind}, {"seed", seed}, {"config_hash", hash}};
}

std::string hex_hash(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

json counts_json(const ClassCounts& c) { return json(c); }

json window_stats_json(const WindowStats& s) {
  return {{"candidates", s.candidates},
          {"emitted", s.emitted},
          {"dropped_missing_target", s.dropped_missing_target},
          {"dropped_sparse", s.dropped_sparse}};
}

// Model inputs for raw panel records, through the model's own fitted specs.
struct Scored {
  LagWindowSet set;
  FeatureMatrix features;
  std::vector<Vote> votes;
};

Scored score_windows(LagWindowSet set, const ModelFile& model, const MacroTable* macro) {
  Scored s;
  prepare_features(set, model.preprocessor.config, macro);
  s.features = materialize(set, model.preprocessor);
  s.votes = model.classifier.predict(s.features.x);
  s.set = std::move(set);
  return s;
}

// ---------------------------------------------------------------- gen

int cmd_gen(Context& ctx) {
  const auto& opt = ctx.opt();
  if (ctx.out_dir().empty()) throw ConfigError("gen needs --out <dir>");
  CohortSpec spec;
  if (!opt.spec.empty()) {
    if (!fs::exists(opt.spec)) throw ConfigError("cohort spec not found: " + opt.spec);
    json j;
    try {
      j = json::parse(read_text_file(opt.spec));
    } catch (const json::parse_error& e) {
      throw ConfigError("cohort spec " + opt.spec + " is not valid JSON: " + e.what());
    }
    spec = cohort_spec_from_json(j);
  }
  if (opt.seed) spec.seed = *opt.seed;
  auto cohort = generate_cohort(spec);
  const auto spec_json = cohort_spec_to_json(spec);
  const auto hash = hex_hash(spec_json.dump());

  std::ostringstream panel_csv, macro_csv;
  write_panel_csv(panel_csv, cohort.panel);
  write_macro_csv(macro_csv, cohort.macro);
  ctx.artifact("panel.csv", panel_csv.str());
  ctx.artifact("macro.csv", macro_csv.str());

  auto summary = describe_cohort(cohort.panel);
  json doc = envelope("seerisk-cohort", spec.seed, hash);
  doc["spec"] = spec_json;
  doc["normalized_shares"] = spec.normalized_shares();
  doc["label_histogram"] = counts_json(cohort.label_histogram);
  doc["summary"] = summary_to_json(summary);
  ctx.artifact("cohort.json", doc.dump(2) + "\n");
  ctx.emit(doc, render_summary(summary));
  return kExitOk;
}

// ---------------------------------------------------------------- prepare

int cmd_prepare(Context& ctx) {
  const auto& cfg = ctx.run().pipeline;
  auto panel = ctx.panel();
  auto macro = ctx.macro(cfg.features.variant);
  auto set = run_stage("windows", [&] {
    return build_lag_windows(panel, cfg.window.length, cfg.window.max_missing_fraction);
  });
  run_stage("features", [&] { prepare_features(set, cfg.features, macro ? &*macro : nullptr); });
  std::vector<std::size_t> all(set.rows.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  FittedPreprocessor pre;
  FeatureMatrix fm;
  run_stage("preprocess", [&] {
    pre = fit_preprocessor(set, all, cfg.features);
    fm = materialize(set, pre);
  });

  const auto hash = config_hash(cfg);
  std::ostringstream table_csv;
  std::vector<std::string> header = {"entity_id", "target_period", "risk_label"};
  for (const auto& c : fm.columns) header.push_back(c.name);
  csv::write_record(table_csv, header);
  for (std::size_t r = 0; r < fm.x.rows(); ++r) {
    std::vector<std::string> fields = {fm.entity_ids[r], format_period(fm.target_periods[r]), std::to_string(fm.y[r])};
    for (double v : fm.x.row(r)) fields.push_back(format_double(v));
    csv::write_record(table_csv, fields);
  }
  ctx.artifact("features.csv", table_csv.str());

  json doc = envelope("seerisk-features", cfg.seed, hash);
  doc["config"] = pipeline_config_to_json(cfg);
  doc["windows"] = window_stats_json(set.stats);
  doc["rows"] = fm.x.rows();
  doc["columns"] = fm.columns.size();
  doc["base_variables"] = pre.base_variable_count;
  doc["imputed_cells"] = fm.imputed_cells;
  doc["missing_categorical_cells"] = fm.missing_categorical_cells;
  doc["label_histogram"] = counts_json(class_histogram(fm.y));
  auto manifest = json::array();
  for (const auto& c : fm.columns) {
    manifest.push_back({{"name", c.name}, {"source", c.source}, {"lag", c.lag}, {"transform", c.transform}});
  }
  doc["manifest"] = manifest;
  ctx.artifact("manifest.json", doc.dump(2) + "\n");

  std::ostringstream table;
  table << "windows   " << set.stats.emitted << " of " << set.stats.candidates << " candidates ("
        << set.stats.dropped_missing_target << " without label, " << set.stats.dropped_sparse << " too sparse)\n"
        << "features  " << fm.columns.size() << " columns from " << pre.base_variable_count << " variables ("
        << to_string(cfg.features.variant) << ")\n";
  ctx.emit(doc, table.str());
  return kExitOk;
}

// ---------------------------------------------------------------- train

json search_json(const SearchResult& s, const SearchSpace& space) {
  auto trials = json::array();
  for (const auto& t : s.trials) {
    json row = {{"index", t.index},
                {"params", param_point_to_json(t.point)},
                {"validation_accuracy", t.score ? json(*t.score) : json(nullptr)},
                {"cached", t.cached}};
    if (!t.error.empty()) row["error"] = t.error;
    trials.push_back(row);
  }
  return {{"space", search_space_to_json(space)},
          {"evaluations", s.evaluations},
          {"best_trial", s.best_trial},
          {"best_score", s.best_score},
          {"best", param_point_to_json(s.best)},
          {"trials", trials}};
}

json learner_params_json(const PipelineResult& r) {
  if (r.classifier.kind() == LearnerKind::random_forest) return forest_params_to_json(r.forest_params);
  return logistic_params_to_json(r.logistic_params);
}

int cmd_train(Context& ctx) {
  const auto& run = ctx.run();
  const auto& cfg = run.pipeline;
  fs::path model_path;
  if (run.paths.model) {
    model_path = *run.paths.model;
  } else if (!ctx.out_dir().empty()) {
    model_path = fs::path(ctx.out_dir()) / "model.json";
  } else {
    throw ConfigError("train needs a model path: set \"model\" in the config, pass --model, or pass --out");
  }
  auto panel = ctx.panel();
  auto macro = ctx.macro(cfg.features.variant);
  auto result = evaluate_pipeline(panel, macro ? &*macro : nullptr, cfg);
  const auto hash = config_hash(cfg);

  ModelFile model;
  model.window = cfg.window;
  model.preprocessor = result.preprocessor;
  model.classifier = result.classifier;
  model.seed = cfg.seed;
  model.config_hash = hash;
  model.training = {{"learner_params", learner_params_json(result)},
                    {"split",
                     {{"train_fraction", cfg.split.train_fraction},
                      {"stratify", cfg.split.stratify},
                      {"seed", result.seeds.split}}},
                    {"n_train", result.n_train},
                    {"train_histogram", counts_json(result.train_after)},
                    {"class_labels", {1, 2, 3, 4, 5}}};
  save_model(model_path, model);

  json doc = envelope("seerisk-train-report", cfg.seed, hash);
  doc["config"] = pipeline_config_to_json(cfg);
  doc["seeds"] = {{"master", result.seeds.master},
                  {"split", result.seeds.split},
                  {"rebalance", result.seeds.rebalance},
                  {"learner", result.seeds.learner},
                  {"search", result.seeds.search}};
  doc["windows"] = window_stats_json(result.windows);
  doc["features"] = {{"variant", to_string(cfg.features.variant)},
                     {"columns", result.preprocessor.manifest.size()},
                     {"base_variables", result.preprocessor.base_variable_count}};
  doc["split"] = {{"n_train", result.n_train}, {"n_test", result.n_test}};
  doc["histograms"] = {{"train_before_rebalance", counts_json(result.train_before)},
                       {"train_after_rebalance", counts_json(result.train_after)},
                       {"test", counts_json(result.test_histogram)}};
  doc["learner"] = {{"kind", to_string(result.classifier.kind())}, {"params", learner_params_json(result)}};
  doc["search"] = result.search ? search_json(*result.search, *cfg.learner.search) : json(nullptr);
  doc["holdout"] = metrics_to_json(result.metrics);
  if (const auto* forest = result.classifier.forest()) {
    auto imp = forest->feature_importances();
    std::vector<std::size_t> order(imp.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return imp[a] > imp[b]; });
    auto top = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(20, order.size()); ++k) {
      top.push_back({{"column", result.preprocessor.manifest[order[k]].name}, {"importance", imp[order[k]]}});
    }
    doc["importances"] = top;
  }
  ctx.artifact("train_report.json", doc.dump(2) + "\n");

  std::ostringstream table;
  table << "model     " << model_path.string() << '\n'
        << "learner   " << to_string(result.classifier.kind()) << " on " << result.preprocessor.manifest.size()
        << " columns (" << to_string(cfg.features.variant) << ")\n"
        << "rows      train " << result.n_train << ", test " << result.n_test << '\n';
  if (result.search) {
    table << "search    " << result.search->trials.size() << " trials, best " << describe(result.search->best)
          << " (validation " << percent(result.search->best_score) << ")\n";
  }
  table << "\nheld-out test rows\n\n" << render_metrics_table(result.metrics);
  ctx.emit(doc, table.str());
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

void check_variant(const Context& ctx, const ModelFile& model) {
  if (ctx.opt().config.empty()) return;
  auto wanted = ctx.run().pipeline.features.variant;
  auto have = model.preprocessor.config.variant;
  if (wanted != have) {
    throw ConfigError("model was trained on " + std::string(to_string(have)) + " features but the config asks for " +
                      std::string(to_string(wanted)));
  }
}

int cmd_evaluate(Context& ctx) {
  auto model = ctx.model();
  check_variant(ctx, model);
  auto panel = ctx.panel();
  auto macro = ctx.macro(model.preprocessor.config.variant);
  auto set = run_stage("windows", [&] {
    return build_lag_windows(panel, model.window.length, model.window.max_missing_fraction);
  });

  std::string scope = "all";
  if (ctx.opt().holdout) {
    scope = "holdout";
    const auto& s = model.training.at("split");
    SplitSpec spec{s.at("train_fraction").get<double>(), s.at("seed").get<std::uint64_t>(),
                   s.at("stratify").get<bool>()};
    auto split = run_stage("split", [&] { return stratified_split(set.targets(), spec); });
    LagWindowSet test = set;
    test.rows.clear();
    for (auto i : split.test) test.rows.push_back(set.rows[i]);
    set = std::move(test);
  }
  auto scored = run_stage("score", [&] { return score_windows(std::move(set), model, macro ? &*macro : nullptr); });
  std::vector<int> predicted;
  for (const auto& v : scored.votes) predicted.push_back(v.label);
  auto metrics = run_stage("evaluate", [&] { return compute_metrics(confusion_matrix(scored.features.y, predicted)); });

  json doc = envelope("seerisk-evaluation", model.seed, model.config_hash);
  doc["scope"] = scope;
  doc["rows"] = scored.features.x.rows();
  doc["variant"] = to_string(model.preprocessor.config.variant);
  doc["metrics"] = metrics_to_json(metrics);
  auto table = render_metrics_table(metrics);
  ctx.artifact("report.json", doc.dump(2) + "\n");
  ctx.artifact("report.txt", table);
  ctx.emit(doc, table);
  return kExitOk;
}

// ---------------------------------------------------------------- predict / rank

struct Scoring {
  ModelFile model;
  ScoringWindows windows;
  Scored scored;
};

Scoring score_latest(Context& ctx) {
  Scoring s;
  s.model = ctx.model();
  check_variant(ctx, s.model);
  auto panel = ctx.panel();
  auto macro = ctx.macro(s.model.preprocessor.config.variant);
  s.windows = run_stage("windows", [&] {
    return build_scoring_windows(panel, s.model.window.length, s.model.window.max_missing_fraction);
  });
  s.scored = run_stage("score", [&] {
    return score_windows(s.windows.windows, s.model, macro ? &*macro : nullptr);
  });
  return s;
}

json ineligible_json(const std::vector<IneligibleEntity>& list) {
  auto arr = json::array();
  for (const auto& e : list) arr.push_back({{"entity_id", e.entity_id}, {"reason", e.reason}});
  return arr;
}

double high_risk_score(const Vote& v) { return v.fractions[3] + v.fractions[4]; }

int cmd_predict(Context& ctx) {
  auto s = score_latest(ctx);
  const auto& fm = s.scored.features;
  json doc = envelope("seerisk-predictions", s.model.seed, s.model.config_hash);
  auto rows = json::array();
  std::ostringstream table;
  table << "entity_id   period  class  high-risk\n";
  for (std::size_t i = 0; i < s.scored.votes.size(); ++i) {
    const auto& v = s.scored.votes[i];
    rows.push_back({{"entity_id", fm.entity_ids[i]},
                    {"target_period", format_period(fm.target_periods[i])},
                    {"predicted_class", v.label},
                    {"fractions", v.fractions}});
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s  %s  %5d  %9s\n", fm.entity_ids[i].c_str(),
                  format_period(fm.target_periods[i]).c_str(), v.label, fixed3(high_risk_score(v)).c_str());
    table << buf;
  }
  doc["predictions"] = rows;
  doc["ineligible"] = ineligible_json(s.windows.ineligible);
  for (const auto& e : s.windows.ineligible) table << e.entity_id << "  ineligible: " << e.reason << '\n';
  ctx.artifact("predictions.json", doc.dump(2) + "\n");
  ctx.emit(doc, table.str());
  return kExitOk;
}

int cmd_rank(Context& ctx) {
  auto s = score_latest(ctx);
  const auto& fm = s.scored.features;
  if (s.scored.votes.empty()) throw DataError("no entity has enough consecutive history to be ranked");
  std::vector<std::size_t> order(s.scored.votes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double sa = high_risk_score(s.scored.votes[a]), sb = high_risk_score(s.scored.votes[b]);
    if (sa != sb) return sa > sb;
    return fm.entity_ids[a] < fm.entity_ids[b];
  });
  const std::size_t top_k = ctx.opt().top_k;
  if (top_k > 0 && order.size() > top_k) order.resize(top_k);

  json doc = envelope("seerisk-ranking", s.model.seed, s.model.config_hash);
  doc["score"] = "vote fraction of classes 4 and 5";
  doc["top_k"] = top_k;
  doc["eligible"] = s.scored.votes.size();
  auto ranked = json::array();
  std::ostringstream table;
  table << "rank  entity_id   period  class  high-risk\n";
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    const auto& v = s.scored.votes[i];
    ranked.push_back({{"rank", k + 1},
                      {"entity_id", fm.entity_ids[i]},
                      {"target_period", format_period(fm.target_periods[i])},
                      {"predicted_class", v.label},
                      {"score", high_risk_score(v)},
                      {"fractions", v.fractions}});
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4zu  %-10s  %s  %5d  %9s\n", k + 1, fm.entity_ids[i].c_str(),
                  format_period(fm.target_periods[i]).c_str(), v.label, fixed3(high_risk_score(v)).c_str());
    table << buf;
  }
  doc["ranked"] = ranked;
  doc["ineligible"] = ineligible_json(s.windows.ineligible);
  if (!s.windows.ineligible.empty()) {
    table << "\nineligible\n";
    for (const auto& e : s.windows.ineligible) table << "  " << e.entity_id << "  " << e.reason << '\n';
  }
  ctx.artifact("ranking.json", doc.dump(2) + "\n");
  ctx.emit(doc, table.str());
  return kExitOk;
}

// ---------------------------------------------------------------- inspect

int cmd_inspect(Context& ctx) {
  const auto& paths = ctx.run().paths;
  if (!ctx.opt().model.empty() || (paths.model && !paths.panel)) {
    auto model = ctx.model();
    const auto& pre = model.preprocessor;
    json doc = envelope("seerisk-model-summary", model.seed, model.config_hash);
    doc["learner"] = to_string(model.classifier.kind());
    doc["variant"] = to_string(pre.config.variant);
    doc["columns"] = pre.manifest.size();
    doc["base_variables"] = pre.base_variable_count;
    doc["window"] = model.window.length;
    doc["training"] = model.training;
    std::ostringstream table;
    table << "learner   " << to_string(model.classifier.kind());
    if (const auto* f = model.classifier.forest()) table << " (" << f->trees().size() << " trees)";
    table << "\nfeatures  " << pre.manifest.size() << " columns, " << to_string(pre.config.variant) << ", "
          << to_string(pre.config.scaler) << " scaling\nwindow    " << model.window.length << " periods\nseed      "
          << model.seed << "\nconfig    " << model.config_hash << '\n';
    ctx.emit(doc, table.str());
    return kExitOk;
  }
  if (!paths.panel) throw ConfigError("inspect needs --panel or --model");
  auto schema = paths.schema ? load_schema(*paths.schema) : default_schema();
  auto data = read_panel_csv(*paths.panel, schema);
  auto summary = describe_cohort(data);
  auto violations = validate_dataset(data);
  json doc = summary_to_json(summary);
  doc["violations"] = violations.size();
  std::ostringstream table;
  table << render_summary(summary) << "\ninvalid values  " << violations.size() << '\n';
  ctx.emit(doc, table.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk prediction for social economy enterprises", "seerisk"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "Run configuration (JSON)");
  app.add_option("--seed", opt.seed, "Master seed, overrides the config");
  app.add_option("--out", opt.out_dir, "Directory for written artifacts");
  app.add_option("--format", opt.format, "Console output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--threads", opt.threads, "Training threads (0 = all cores)");
  app.add_option("--panel", opt.panel, "Panel CSV, overrides the config");
  app.add_option("--macro", opt.macro, "Macro indicator CSV, overrides the config");
  app.add_option("--schema", opt.schema, "Schema JSON, overrides the config");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic cohort (panel.csv, macro.csv)");
  gen->add_option("spec", opt.spec, "Cohort spec (JSON); defaults when omitted");
  auto* prepare = app.add_subcommand("prepare", "Build lag windows and the feature matrix");
  auto* train = app.add_subcommand("train", "Split, rebalance, fit and save a model");
  train->add_option("--model", opt.model, "Model output path");
  auto* evaluate = app.add_subcommand("evaluate", "Score labelled windows with a saved model");
  evaluate->add_option("--model", opt.model, "Model file");
  evaluate->add_flag("--holdout", opt.holdout, "Only the test rows of the model's training split");
  auto* predict = app.add_subcommand("predict", "Predict next-period risk per entity");
  predict->add_option("--model", opt.model, "Model file");
  auto* rank = app.add_subcommand("rank", "Rank entities by high-risk vote share");
  rank->add_option("--model", opt.model, "Model file");
  rank->add_option("--top-k", opt.top_k, "Keep only the first k entities (0 = all)");
  auto* inspect = app.add_subcommand("inspect", "Summarize a panel CSV or a model file");
  inspect->add_option("--model", opt.model, "Model file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    Context ctx(opt, out);
    if (gen->parsed()) return cmd_gen(ctx);
    if (prepare->parsed()) return cmd_prepare(ctx);
    if (train->parsed()) return cmd_train(ctx);
    if (evaluate->parsed()) return cmd_evaluate(ctx);
    if (predict->parsed()) return cmd_predict(ctx);
    if (rank->parsed()) return cmd_rank(ctx);
    if (inspect->parsed()) return cmd_inspect(ctx);
    return kExitConfig;
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfig : kExitData;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace seerisk::cli
