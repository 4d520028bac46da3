#include <benchmark/benchmark.h>

#include "stratbound/machine.hpp"
#include "stratbound/outcome.hpp"
#include "stratbound/strategies.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

namespace {

// Bob's decision point after Alice requested every cup.
std::vector<StateId> all_requests(std::uint32_t n) {
  std::vector<StateId> h;
  for (std::uint32_t j = 0; j < n; ++j) h.push_back(coffee::state(std::min(j, (n + 1) / 2), j));
  return h;
}

void decide(benchmark::State& state, const char* name) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const Model m = gen_coffee(n);
  const ComputationalStrategy bob(builtin_machine(name), m, coffee::bob);
  const auto h = all_requests(n);
  std::uint64_t steps = 0;
  for (auto _ : state) {
    steps = bob.decide(h, kDefaultBudget).steps;
    benchmark::DoNotOptimize(steps);
  }
  state.counters["steps"] = static_cast<double>(steps);
}

}  // namespace

static void BM_BobNaive(benchmark::State& s) { decide(s, "bob_fib_naive"); }
static void BM_BobMemo(benchmark::State& s) { decide(s, "bob_fib_memo"); }
static void BM_BobMatrix(benchmark::State& s) { decide(s, "bob_fib_matrix"); }
BENCHMARK(BM_BobNaive)->DenseRange(8, 20, 4);
BENCHMARK(BM_BobMemo)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_BobMatrix)->RangeMultiplier(2)->Range(8, 128);

static void BM_EnforceBob(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const Model m = gen_coffee(n);
  const std::vector<ComputationalStrategy> bob{ComputationalStrategy(builtin_machine("bob_fib_memo"), m, coffee::bob)};
  const Formula f = parse_formula("F sugar_Bob");
  for (auto _ : state) benchmark::DoNotOptimize(enforce_bounded(m, Coalition({coffee::bob}), bob, f, n + 2, kDefaultBudget));
}
BENCHMARK(BM_EnforceBob)->DenseRange(4, 12, 4);

BENCHMARK_MAIN();
