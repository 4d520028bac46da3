#include <benchmark/benchmark.h>

#include "stratbound/encoding.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

static void BM_EncodeCoffee(benchmark::State& state) {
  const Model m = gen_coffee(static_cast<std::uint32_t>(state.range(0)));
  std::size_t len = 0;
  for (auto _ : state) {
    const TapeWord w = encode_model(m);
    len = w.size();
    benchmark::DoNotOptimize(len);
  }
  state.counters["symbols"] = static_cast<double>(len);
}
BENCHMARK(BM_EncodeCoffee)->RangeMultiplier(2)->Range(4, 64);

static void BM_DecodeCoffee(benchmark::State& state) {
  const TapeWord w = encode_model(gen_coffee(static_cast<std::uint32_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decode_model(w));
}
BENCHMARK(BM_DecodeCoffee)->RangeMultiplier(2)->Range(4, 64);

BENCHMARK_MAIN();
