#include <cstdlib>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "stratbound/bigint.hpp"
#include "stratbound/machine.hpp"
#include "stratbound/strategies.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

namespace {

std::vector<StateId> random_walk(gen::Rng& rng, const Model& m, std::size_t len) {
  std::vector<StateId> h{m.initial};
  while (h.size() < len) {
    const auto& ts = m.transitions[h.back()];
    h.push_back(ts[gen::below(rng, ts.size())].target);
  }
  return h;
}

// Every state sequence from the initial state of length 1..depth.
void all_paths(const Model& m, std::size_t depth, std::vector<StateId>& cur, std::vector<std::vector<StateId>>& out) {
  out.push_back(cur);
  if (cur.size() == depth) return;
  std::vector<StateId> seen;
  for (const auto& t : m.transitions[cur.back()]) {
    if (std::find(seen.begin(), seen.end(), t.target) != seen.end()) continue;
    seen.push_back(t.target);
    cur.push_back(t.target);
    all_paths(m, depth, cur, out);
    cur.pop_back();
  }
}

const char* kScanner =
    "work 0\n"
    "start s\n"
    "s *0 -> s * SRS\n"
    "s *1 -> s * SRS\n"
    "s *# -> s * SRS\n"
    "s *_ -> h 1 SSR\n";

}  // namespace

TEST_CASE("alice_skip emits skip in constant steps") {
  // c0 measured on the shipped machine: one transition
  constexpr std::uint64_t c0 = 1;
  const Model m = gen_coffee(4);
  gen::Rng rng(31);
  for (const char* name : {"alice_skip", "alice_skip_vm"}) {
    const ComputationalStrategy s(builtin_machine(name), m, coffee::alice);
    for (int it = 0; it < 50; ++it) {
      const auto h = observe(m, canonical_table(m), coffee::alice, random_walk(rng, m, 1 + gen::below(rng, 6)));
      const auto r = s.decide(h, 100);
      CHECK(r.action == coffee::skip);
      CHECK(r.steps <= c0);
    }
  }
}

TEST_CASE("bob_fib_naive at n=3 after 0/0 0/1 0/2 requests") {
  const Model m = gen_coffee(3);
  const ComputationalStrategy s(builtin_machine("bob_fib_naive"), m, coffee::bob);
  const std::vector<StateId> h{coffee::state(0, 0), coffee::state(0, 1), coffee::state(0, 2)};
  CHECK(s.decide(h, kDefaultBudget).action == coffee::request);
  // and skips at 1/2 since F(1) is odd
  const std::vector<StateId> h2{coffee::state(0, 0), coffee::state(1, 1), coffee::state(1, 2)};
  CHECK(s.decide(h2, kDefaultBudget).action == coffee::skip);
}

TEST_CASE("budget semantics") {
  const Model m = gen_coffee(3);
  const TapeWord mw = encode_model(m);
  const TapeWord hw = encode_history_indices(std::vector<StateId>{0, 1});
  const Machine scanner = parse_machine(kScanner, MachineKind::tape);
  CHECK_THROWS_AS(run(scanner, mw, hw, 0), std::invalid_argument);
  CHECK_THROWS_AS(run(scanner, mw, hw, 1), BudgetExceeded);
  const auto r = run(scanner, mw, hw, 1000);
  CHECK(r.steps == hw.size() + 1);
  CHECK(r.action == 1);
  CHECK(run(scanner, mw, hw, r.steps) == r);
  CHECK_THROWS_AS(run(scanner, mw, hw, r.steps - 1), BudgetExceeded);

  const ComputationalStrategy s(builtin_machine("bob_fib_naive"), m, coffee::bob);
  CHECK_THROWS_AS(s.decide(std::vector<StateId>{0}, 1), BudgetExceeded);
  CHECK_THROWS_AS(s.decide(std::vector<StateId>{0}, 0), std::invalid_argument);
}

TEST_CASE("input tapes are left untouched") {
  const Model m = gen_coffee(3);
  const TapeWord mw = encode_model(m);
  const TapeWord hw = encode_history_indices(std::vector<StateId>{0, 2, 4});
  const TapeWord mw0 = mw, hw0 = hw;
  run(parse_machine(kScanner, MachineKind::tape), mw, hw, 1000);
  run(*builtin_machine("bob_fib_memo"), mw, hw, kDefaultBudget, coffee::bob);
  CHECK(mw == mw0);
  CHECK(hw == hw0);
}

TEST_CASE("malformed and illegal outputs") {
  const Model m = gen_coffee(3);
  const TapeWord mw = encode_model(m);
  const TapeWord hw = encode_history_indices(std::vector<StateId>{0});
  const Machine silent = parse_machine("work 0\nstart s\ns ** -> t * SSS\n", MachineKind::tape);
  CHECK_THROWS_AS(run(silent, mw, hw, 10), MalformedOutput);
  const Machine leading = parse_machine("work 0\nstart s\ns ** -> t 0 SSR\nt ** -> u 1 SSR\n", MachineKind::tape);
  CHECK_THROWS_AS(run(leading, mw, hw, 10), MalformedOutput);
  const Machine neg = parse_machine("emit -1", MachineKind::program);
  CHECK_THROWS_AS(run(neg, mw, hw, 10), MalformedOutput);

  // Alice has only skip at 0/2
  const Machine request = parse_machine("emit 0", MachineKind::program);
  const TapeWord late = encode_history_indices(std::vector<StateId>{0, 1, 3});
  CHECK_THROWS_AS(run(request, mw, late, 10, coffee::alice), IllegalAction);
  CHECK(run(request, mw, late, 10).action == 0);
  const ComputationalStrategy s(std::make_shared<const Machine>(request), m, coffee::alice);
  CHECK_THROWS_AS(s.decide(std::vector<StateId>{0, 1, 3}, 10), IllegalAction);
  CHECK(s.decide(std::vector<StateId>{0}, 10).action == coffee::request);
}

TEST_CASE("program faults and parse errors") {
  const Model m = fixture::tiny();
  const TapeWord mw = encode_model(m);
  const TapeWord hw = encode_history_indices({});
  CHECK_THROWS_AS(run(parse_machine("div r 1 0\nemit r", MachineKind::program), mw, hw, 10), ProgramFault);
  CHECK_THROWS_AS(run(parse_machine("set r 1", MachineKind::program), mw, hw, 10), ProgramFault);
  CHECK_THROWS_AS(run(parse_machine("pop r\nemit r", MachineKind::program), mw, hw, 10), ProgramFault);
  CHECK_THROWS_AS(run(parse_machine("hobs r 0\nemit r", MachineKind::program), mw, hw, 10), ProgramFault);
  CHECK_THROWS_AS(parse_machine("frob r", MachineKind::program), ParseError);
  CHECK_THROWS_AS(parse_machine("jmp nowhere", MachineKind::program), ParseError);
  CHECK_THROWS_AS(parse_machine("set r", MachineKind::program), ParseError);
  CHECK_THROWS_AS(parse_machine("a:\na:\nemit 0", MachineKind::program), ParseError);
  CHECK_THROWS_AS(parse_machine("", MachineKind::program), ParseError);
  // overlapping rules and an erasing output write
  CHECK_THROWS_AS(parse_machine("work 0\nstart s\ns ** -> s * SSS\ns *0 -> s * SRS\n", MachineKind::tape), ParseError);
  CHECK_THROWS_AS(parse_machine("work 0\nstart s\ns ** -> s _ SSR\n", MachineKind::tape), ParseError);
  CHECK_THROWS_AS(parse_machine("work 0\nstart s\ns ** -> s 1 SSS\n", MachineKind::tape), ParseError);
  CHECK_THROWS_AS(parse_machine("work 1\nstart s\ns ** -> s 1 SSR\n", MachineKind::tape), ParseError);
  try {
    parse_machine("emit 0\nbogus 1\n", MachineKind::program);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("strategy program primitives") {
  const Model m = gen_coffee(3);
  const TapeWord mw = encode_model(m);
  const TapeWord hw = encode_history_indices(std::vector<StateId>{0, 2});
  auto eval = [&](const char* src) {
    return run(parse_machine(src, MachineKind::program), mw, hw, 10000).action;
  };
  CHECK(eval("nstates r\nemit r") == 10);
  CHECK(eval("hlen r\nemit r") == 2);
  CHECK(eval("hobs r 1\nemit r") == 2);
  CHECK(eval("succ r 0 0 1\nemit r") == 2);
  CHECK(eval("succ r 0 0 0\nadd r r 5\nemit r") == 4);  // -1: Bob cannot request at 0/0
  CHECK(eval("replen r 0 0\nemit r") == 2);
  CHECK(eval("rep r 1 0 0\nemit r") == 1);
  CHECK(eval("val r 1 7\nemit r") == 1);  // sugar_Bob at 1/3
  CHECK(eval("val r 1 6\nemit r") == 0);
  CHECK(eval("len2 r\nemit r") == hw.size());
  CHECK(eval("sym2 r 0\nemit r") == 2);
  CHECK(eval("sym2 r 1000\nadd r r 1\nemit r") == 0);
  CHECK(eval(".data t 4 5 6\nld r t 2\nemit r") == 6);
  CHECK(eval("alloc t 3\nst t 1 9\nld r t 1\nalen s t\nadd r r s\nemit r") == 12);
  CHECK(eval("call f\nemit r\nf: set r 7\nret") == 7);
  CHECK(eval("push 3\npush 4\npop a\npop b\nsub r a b\nemit r") == 1);
  CHECK(eval("set r 1\nshl r r 100\nshr r r 99\nemit r") == 2);
  CHECK(eval("set i 0\nloop: add i i 1\njlt i 5 loop\nemit i") == 5);
}

TEST_CASE("Int promotes and demotes") {
  const Int max = std::numeric_limits<std::int64_t>::max();
  const Int big = max + Int(1);
  CHECK(!big.is_small());
  CHECK(big.str() == "9223372036854775808");
  const Int back = big - Int(1);
  CHECK(back.is_small());
  CHECK(back == max);
  CHECK((big * big).str() == "85070591730234615865843651857942052864");
  CHECK(Int(-7) / Int(2) == Int(-3));
  CHECK(Int(-7) % Int(2) == Int(-1));
  CHECK_THROWS_AS(Int(1) / Int(0), std::domain_error);
  CHECK(Int(std::numeric_limits<std::int64_t>::min()) * Int(-1) > max);
  CHECK(Int(1).shifted_left(70).shifted_right(69) == Int(2));
  CHECK(Int(12).bit_and(Int(10)) == Int(8));
  CHECK(big.is_odd() == false);
  CHECK(Int(-3).is_negative());
}

TEST_CASE("instantiate then decide equals run with both tapes") {
  const Model m = gen_coffee(5);
  const auto canonical = canonical_table(m);
  GeneralStrategy gs{{{coffee::bob, builtin_machine("bob_fib_memo")}}};
  const auto strategies = instantiate(gs, m);
  REQUIRE(strategies.size() == 1);
  CHECK(strategies[0].model_word() == encode_model(m));
  gen::Rng rng(32);
  for (int it = 0; it < 50; ++it) {
    const auto h = observe(m, canonical, coffee::bob, random_walk(rng, m, 1 + gen::below(rng, 7)));
    const auto a = strategies[0].decide(h, kDefaultBudget);
    const auto b = run(*builtin_machine("bob_fib_memo"), encode_model(m), encode_history_indices(h), kDefaultBudget,
                       coffee::bob);
    CHECK(a == b);
    CHECK(strategies[0].run(encode_history_indices(h), kDefaultBudget) == a);
  }
}

TEST_CASE("instantiated Bob on coffee n=5") {
  const Model m5 = gen_coffee(5);
  const Model m3 = gen_coffee(3);
  const ComputationalStrategy b5(builtin_machine("bob_fib_naive"), m5, coffee::bob);
  const ComputationalStrategy b3(builtin_machine("bob_fib_naive"), m3, coffee::bob);
  CHECK(b5.decide({}, kDefaultBudget).action == coffee::skip);
  // 0/2 is Bob's last decision for n=3 but not for n=5 (state indices agree)
  const std::vector<StateId> h{coffee::state(0, 0), coffee::state(0, 1), coffee::state(0, 2)};
  CHECK(b3.decide(h, kDefaultBudget).action == coffee::request);
  CHECK(b5.decide(h, kDefaultBudget).action == coffee::skip);
}

TEST_CASE("instantiate rejects unknown agents") {
  GeneralStrategy gs{{{7, builtin_machine("idle")}}};
  CHECK_THROWS_AS(instantiate(gs, gen_coffee(3)), InputError);
  CHECK_THROWS_AS(ComputationalStrategy(builtin_machine("idle"), gen_coffee(3), 2), InputError);
}

TEST_CASE("measure_steps") {
  const Model m = gen_coffee(4);
  SUBCASE("single empty history") {
    GeneralStrategy gs{{{coffee::alice, builtin_machine("alice_skip")}}};
    const std::vector<std::vector<StateId>> hs{{}};
    const auto r = measure_steps(gs, m, hs, 100);
    REQUIRE(r.buckets.size() == 1);
    CHECK(r.buckets[0].runs == 1);
    CHECK(r.buckets[0].enc_history_len == 8);
    CHECK(r.buckets[0].enc_model_len == encode_model(m).size());
    CHECK(r.max_steps == r.buckets[0].max_steps);
  }
  SUBCASE("constant skip over 100 histories") {
    GeneralStrategy gs{{{coffee::alice, builtin_machine("alice_skip")}}};
    gen::Rng rng(33);
    std::vector<std::vector<StateId>> hs;
    for (int i = 0; i < 100; ++i) hs.push_back(random_walk(rng, m, 1 + gen::below(rng, 5)));
    const auto r = measure_steps(gs, m, hs, 100);
    CHECK(r.runs == 100);
    CHECK(r.errors.empty());
    std::uint64_t lo = std::numeric_limits<std::uint64_t>::max(), hi = 0;
    for (const auto& b : r.buckets) {
      lo = std::min(lo, b.max_steps);
      hi = std::max(hi, b.max_steps);
    }
    CHECK(hi - lo == 0);  // the shipped machine never scans
  }
  SUBCASE("collective steps are the max over members") {
    gen::Rng rng(34);
    std::vector<std::vector<StateId>> hs;
    for (int i = 0; i < 30; ++i) hs.push_back(random_walk(rng, m, 1 + gen::below(rng, 5)));
    GeneralStrategy alice{{{coffee::alice, builtin_machine("alice_skip_vm")}}};
    GeneralStrategy bob{{{coffee::bob, builtin_machine("bob_fib_naive")}}};
    GeneralStrategy both{{{coffee::alice, builtin_machine("alice_skip_vm")}, {coffee::bob, builtin_machine("bob_fib_naive")}}};
    const auto ra = measure_steps(alice, m, hs, kDefaultBudget);
    const auto rb = measure_steps(bob, m, hs, kDefaultBudget);
    const auto rc = measure_steps(both, m, hs, kDefaultBudget);
    CHECK(rc.max_steps == std::max(ra.max_steps, rb.max_steps));
    CHECK(rc.runs == 60);
  }
  SUBCASE("run errors are recorded") {
    GeneralStrategy gs{{{coffee::alice, std::make_shared<const Machine>(parse_machine("emit 0", MachineKind::program))}}};
    const std::vector<std::vector<StateId>> hs{{0}, {0, 1, 3}};
    const auto r = measure_steps(gs, m, hs, 10);
    CHECK(r.errors.size() == 1);  // request at 0/2 is Bob's turn already
    CHECK(r.budget_hits == 0);
    GeneralStrategy loop{{{coffee::alice, std::make_shared<const Machine>(parse_machine("a: jmp a", MachineKind::program))}}};
    const auto r2 = measure_steps(loop, m, hs, 10);
    CHECK(r2.budget_hits == 2);
    CHECK(r2.errors.size() == 2);
  }
}

TEST_CASE("property: determinism and budget monotonicity") {
  const Model m = gen_coffee(6);
  const auto canonical = canonical_table(m);
  gen::Rng rng(35);
  for (const char* name : {"bob_fib_naive", "bob_fib_memo", "bob_fib_matrix"}) {
    const ComputationalStrategy s(builtin_machine(name), m, coffee::bob);
    for (int it = 0; it < 30; ++it) {
      const auto h = observe(m, canonical, coffee::bob, random_walk(rng, m, 1 + gen::below(rng, 8)));
      const auto r = s.decide(h, kDefaultBudget);
      CHECK(s.decide(h, kDefaultBudget) == r);
      CHECK(s.decide(h, r.steps) == r);
      CHECK(s.decide(h, r.steps * 3 + 7) == r);
      if (r.steps > 1) CHECK_THROWS_AS(s.decide(h, r.steps - 1), BudgetExceeded);
    }
  }
}

TEST_CASE("tape and program constant-skip agree on every history to depth 6") {
  const Model m = gen_coffee(4);
  const auto canonical = canonical_table(m);
  std::vector<std::vector<StateId>> paths;
  std::vector<StateId> cur{m.initial};
  all_paths(m, 6, cur, paths);
  const ComputationalStrategy tm(builtin_machine("alice_skip"), m, coffee::alice);
  const ComputationalStrategy vm(builtin_machine("alice_skip_vm"), m, coffee::alice);
  CHECK(std::holds_alternative<TapeMachine>(tm.machine()));
  CHECK(std::holds_alternative<StrategyProgram>(vm.machine()));
  for (const auto& p : paths) {
    const auto h = observe(m, canonical, coffee::alice, p);
    CHECK(tm.decide(h, 100).action == vm.decide(h, 100).action);
  }
  CHECK(paths.size() > 20);
}

TEST_CASE("observe maps states to canonical observations") {
  const Model sat = gen_satgame(fixture::two_clause_cnf());
  const auto canonical = canonical_table(sat);
  const std::vector<StateId> states{0, *find_state(sat, "q2_1"), *find_state(sat, "q2_2")};
  CHECK(observe(sat, canonical, satgame::verifier, states) ==
        std::vector<StateId>{0, *find_state(sat, "q1_1"), *find_state(sat, "q1_2")});
  CHECK(observe(sat, canonical, satgame::refuter, states) == states);
  CHECK_THROWS_AS(observe(sat, canonical, 0, std::vector<StateId>{99}), InputError);
}

TEST_CASE("machine kinds and default budget") {
  CHECK(kind_for_path("x.tm") == MachineKind::tape);
  CHECK(kind_for_path("x.prog") == MachineKind::program);
  ::unsetenv("STRATBOUND_BUDGET");
  CHECK(default_budget() == kDefaultBudget);
  ::setenv("STRATBOUND_BUDGET", "5000", 1);
  CHECK(default_budget() == 5000);
  ::setenv("STRATBOUND_BUDGET", "nope", 1);
  CHECK(default_budget() == kDefaultBudget);
  ::unsetenv("STRATBOUND_BUDGET");
}

TEST_CASE("tape machine text round-trips") {
  const TapeMachine tm = TapeMachine::parse(kScanner);
  const TapeMachine again = TapeMachine::parse(tm.to_text());
  CHECK(again.to_text() == tm.to_text());
  CHECK(again.rules().size() == 4);
  TapeMachine::Simulation sim(tm, "", "01");
  CHECK(sim.step());
  CHECK(sim.step());
  CHECK(sim.step());
  CHECK_FALSE(sim.step());
  CHECK(sim.halted());
  CHECK(sim.output() == "1");
  CHECK(sim.steps() == 3);
}
