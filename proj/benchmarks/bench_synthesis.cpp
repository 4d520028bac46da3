#include <benchmark/benchmark.h>

#include "stratbound/counters.hpp"
#include "stratbound/knowledge.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

static void BM_SynthesizeChain(benchmark::State& state) {
  const Model m = gen_satgame(satchain_cnf(static_cast<std::uint32_t>(state.range(0))));
  const Formula f = parse_formula("F win");
  std::size_t nodes = 0;
  for (auto _ : state) {
    const auto s = synthesize(m, satgame::verifier, f);
    nodes = s.game.size();
    benchmark::DoNotOptimize(s.result.winning);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SynthesizeChain)->RangeMultiplier(2)->Range(2, 16);

static void BM_CompileChain(benchmark::State& state) {
  const Model m = gen_satgame(satchain_cnf(static_cast<std::uint32_t>(state.range(0))));
  const auto s = synthesize(m, satgame::verifier, parse_formula("F win"));
  for (auto _ : state) benchmark::DoNotOptimize(compile_knowledge_strategy(m, s.game, s.result));
}
BENCHMARK(BM_CompileChain)->RangeMultiplier(2)->Range(2, 12);

static void BM_CounterExpansion(benchmark::State& state) {
  CounterModel cm;
  cm.skeleton = gen_coffee(4);
  cm.counters = 1;
  cm.initial = {1};
  cm.labels.resize(cm.skeleton.states.size());
  for (StateId q = 0; q < cm.skeleton.states.size(); ++q) {
    for (const auto& t : cm.skeleton.transitions[q]) {
      const bool req = t.joint[0] == coffee::request || t.joint[1] == coffee::request;
      cm.labels[q].push_back(CounterLabel{Guard::always(), req ? std::vector<CounterUpdate>{{0, -1}}
                                                               : std::vector<CounterUpdate>{{0, +1}}});
    }
  }
  const auto k = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_counter_game(cm, 1, k, coffee::bob, parse_formula("F sugar_Bob")));
}
BENCHMARK(BM_CounterExpansion)->DenseRange(0, 6, 2);

BENCHMARK_MAIN();
