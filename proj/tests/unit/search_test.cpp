#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "seerisk/learn/forest.hpp"
#include "seerisk/learn/search.hpp"
#include "support.hpp"

namespace seerisk {
namespace {

TEST(Search, SinglePointSpace) {
  SearchSpace space;
  space.params["n_trees"] = std::vector<ParamValue>{std::int64_t{10}};
  space.n_trials = 1;
  int calls = 0;
  auto res = random_grid_search(space, [&](const ParamPoint&) {
    ++calls;
    return 0.5;
  });
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(std::get<std::int64_t>(res.best.at("n_trees")), 10);
}

TEST(Search, RepeatedPointsReuseTheirScore) {
  SearchSpace space;
  space.params["depth"] = IntRange{1, 2};
  space.n_trials = 20;
  int calls = 0;
  auto res = random_grid_search(space, [&](const ParamPoint& p) {
    ++calls;
    return static_cast<double>(std::get<std::int64_t>(p.at("depth")));
  });
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(res.evaluations, 2u);
  EXPECT_EQ(res.trials.size(), 20u);
  EXPECT_EQ(res.best_score, 2.0);
  for (const auto& t : res.trials) EXPECT_TRUE(t.score.has_value());
}

TEST(Search, TiesGoToEarlierTrial) {
  SearchSpace space;
  space.params["x"] = IntRange{0, 100};
  space.n_trials = 10;
  auto res = random_grid_search(space, [](const ParamPoint&) { return 1.0; });
  EXPECT_EQ(res.best_trial, 0u);
}

TEST(Search, SameSeedSameTrials) {
  SearchSpace space;
  space.params["a"] = IntRange{0, 1000};
  space.params["b"] = std::vector<ParamValue>{0.1, 0.2, std::string("sqrt")};
  space.seed = 9;
  auto objective = [](const ParamPoint& p) { return static_cast<double>(std::get<std::int64_t>(p.at("a"))); };
  auto r1 = random_grid_search(space, objective);
  auto r2 = random_grid_search(space, objective);
  ASSERT_EQ(r1.trials.size(), r2.trials.size());
  for (std::size_t i = 0; i < r1.trials.size(); ++i) EXPECT_EQ(r1.trials[i].point, r2.trials[i].point);
  EXPECT_EQ(r1.best, r2.best);
  space.seed = 10;
  auto r3 = random_grid_search(space, objective);
  EXPECT_NE(r1.trials[0].point, r3.trials[0].point);
}

TEST(Search, FailedTrialsRecorded) {
  SearchSpace space;
  space.params["x"] = IntRange{0, 3};
  space.n_trials = 8;
  auto res = random_grid_search(space, [](const ParamPoint& p) {
    if (std::get<std::int64_t>(p.at("x")) == 0) throw DataError("bad");
    return 1.0;
  });
  for (const auto& t : res.trials) {
    if (std::get<std::int64_t>(t.point.at("x")) == 0) {
      EXPECT_FALSE(t.score);
      EXPECT_EQ(t.error, "bad");
    }
  }
  EXPECT_THROW(random_grid_search(space, [](const ParamPoint&) -> double { throw DataError("no"); }), DataError);
}

TEST(Search, DeepStructurePrefersDepth) {
  // Checkerboard labels on a 4x4 grid: one split cannot beat 50%.
  Rng rng(1);
  Matrix x(800, 2);
  std::vector<int> y(800);
  for (std::size_t i = 0; i < 800; ++i) {
    x(i, 0) = rng.uniform01() * 4;
    x(i, 1) = rng.uniform01() * 4;
    y[i] = (static_cast<int>(x(i, 0)) + static_cast<int>(x(i, 1))) % 2 ? 2 : 3;
  }
  SearchSpace space;
  space.params["max_depth"] = std::vector<ParamValue>{std::int64_t{1}, std::int64_t{20}};
  space.n_trials = 6;
  ForestParams base;
  base.n_trees = 10;
  base.tree.features_per_split = FeaturesPerSplit::all();
  auto res = random_grid_search(space, [&](const ParamPoint& p) {
    auto params = apply_params(base, p);
    auto f = fit_forest(x, y, params);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) ok += f.predict(x.row(i)).label == y[i];
    return static_cast<double>(ok) / static_cast<double>(x.rows());
  });
  EXPECT_EQ(std::get<std::int64_t>(res.best.at("max_depth")), 20);
}

TEST(Search, ApplyParams) {
  ParamPoint p = {{"n_trees", std::int64_t{7}},
                  {"max_depth", std::string("unlimited")},
                  {"features_per_split", std::string("sqrt")},
                  {"min_samples_leaf", std::int64_t{2}},
                  {"min_samples_split", std::int64_t{4}},
                  {"bootstrap", std::int64_t{0}}};
  auto f = apply_params(ForestParams{}, p);
  EXPECT_EQ(f.n_trees, 7u);
  EXPECT_FALSE(f.tree.max_depth);
  EXPECT_EQ(f.tree.min_samples_leaf, 2u);
  EXPECT_FALSE(f.bootstrap);
  ParamPoint lp = {{"learning_rate", 0.3}, {"epochs", std::int64_t{12}}};
  auto l = apply_params(LogisticParams{}, lp);
  EXPECT_EQ(l.learning_rate, 0.3);
  EXPECT_EQ(l.epochs, 12u);
  ParamPoint bad = {{"gamma", 1.0}};
  EXPECT_THROW(apply_params(ForestParams{}, bad), ConfigError);
}

TEST(Search, JsonRoundTrip) {
  auto j = nlohmann::json::parse(R"({"max_depth": [4, 8, null], "n_trees": {"min": 10, "max": 50},
                                     "n_trials": 12, "seed": 3})");
  auto space = search_space_from_json(j);
  EXPECT_EQ(space.n_trials, 12u);
  EXPECT_EQ(space.seed, 3u);
  const auto& depth = std::get<std::vector<ParamValue>>(space.params.at("max_depth"));
  EXPECT_EQ(std::get<std::string>(depth[2]), "unlimited");
  auto again = search_space_from_json(search_space_to_json(space));
  EXPECT_EQ(search_space_to_json(again), search_space_to_json(space));
  EXPECT_THROW(search_space_from_json(nlohmann::json::parse(R"({"x": {"min": 5, "max": 1}})")), ConfigError);
}

}  // namespace
}  // namespace seerisk
