#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "seerisk/common.hpp"

namespace seerisk {
namespace {

TEST(ClassHistogram, CountsEachClass) {
  std::vector<int> y = {1, 2, 2, 5, 3, 2};
  auto h = class_histogram(y);
  EXPECT_EQ(h, (ClassCounts{1, 3, 1, 0, 1}));
}

TEST(ClassHistogram, RejectsOutOfRange) {
  std::vector<int> y = {1, 6};
  EXPECT_THROW(class_histogram(y), DataError);
}

TEST(MixSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(mix_seed(42, s));
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(mix_seed(1, 2), mix_seed(1, 2));
}

TEST(Fnv1a64, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Rng, UniformIndexStaysInRangeAndCoversIt) {
  Rng rng(7);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto k = rng.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, NormalMoments) {
  Rng rng(3);
  double s = 0, s2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.03);
  EXPECT_NEAR(s2 / n, 1.0, 0.05);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(5);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i;
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(Matrix, AppendAndSelect) {
  Matrix m;
  std::vector<double> a = {1, 2}, b = {3, 4}, c = {5, 6};
  m.append_row(a);
  m.append_row(b);
  m.append_row(c);
  EXPECT_EQ(m.rows(), 3u);
  std::vector<std::size_t> idx = {2, 0};
  auto s = m.select_rows(idx);
  EXPECT_EQ(s(0, 0), 5);
  EXPECT_EQ(s(1, 1), 2);
  std::vector<double> bad = {1};
  EXPECT_THROW(m.append_row(bad), std::invalid_argument);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e300, -2.5, 123456789.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(StageError, CarriesStageAndFamily) {
  StageError e("split", "boom", true);
  EXPECT_EQ(e.stage(), "split");
  EXPECT_TRUE(e.is_config_error());
  EXPECT_NE(std::string(e.what()).find("[split]"), std::string::npos);
}

}  // namespace
}  // namespace seerisk
