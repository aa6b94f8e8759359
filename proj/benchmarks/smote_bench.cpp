#include <benchmark/benchmark.h>

#include "seerisk/balance/smote.hpp"

namespace {

using namespace seerisk;

void BM_Smote(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Matrix cls(n, 300);
  for (auto& v : cls.data()) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(smote_oversample(cls, 2000, 5, 7));
}
BENCHMARK(BM_Smote)->Arg(10)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
