#include <algorithm>
#include <functional>

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "stratbound/errors.hpp"
#include "stratbound/knowledge.hpp"
#include "stratbound/model_text.hpp"
#include "stratbound/strategies.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

namespace {

// Every state history of length 1..depth from the initial state.
std::vector<std::vector<StateId>> all_histories(const Model& m, std::size_t depth) {
  std::vector<std::vector<StateId>> out;
  std::vector<StateId> h{m.initial};
  std::function<void()> go = [&] {
    out.push_back(h);
    if (h.size() == depth) return;
    std::vector<StateId> next;
    for (const auto& t : m.transitions[h.back()]) next.push_back(t.target);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (StateId q : next) {
      h.push_back(q);
      go();
      h.pop_back();
    }
  };
  go();
  return out;
}

}  // namespace

TEST_CASE("coffee labels follow Fibonacci bits") {
  for (std::uint32_t n = 2; n <= 15; ++n) {
    const Model m = gen_coffee(n);
    REQUIRE(validate_model(m).empty());
    CHECK(m.states.size() == coffee::state_count(n));
    for (std::uint32_t j = 0; j <= n; ++j) {
      for (std::uint32_t i = 0; i <= j; ++i) {
        const StateId q = coffee::state(i, j);
        CHECK(m.states[q] == std::to_string(i) + "/" + std::to_string(j));
        const bool last = j == n;
        CHECK(holds(m, coffee::sugar_bob, q) == (last && oracle::fib_bit(i, 0) == 1));
        CHECK(holds(m, coffee::sugar_alice, q) == (last && oracle::fib_bit(i, n / 2) == 1));
      }
    }
  }
  // large n goes through arbitrary precision: F(100) is even, F(101) odd
  const Model big = gen_coffee(101);
  CHECK_FALSE(holds(big, coffee::sugar_bob, coffee::state(99, 101)));
  CHECK(holds(big, coffee::sugar_bob, coffee::state(101, 101)));
  CHECK(holds(big, coffee::sugar_alice, coffee::state(101, 101)) == (oracle::fib_bit(101, 50) == 1));
}

TEST_CASE("coffee turn structure") {
  const Model m = gen_coffee(5);
  for (std::uint32_t j = 0; j <= 5; ++j) {
    for (std::uint32_t i = 0; i <= j; ++i) {
      const StateId q = coffee::state(i, j);
      const bool alice_turn = j < 3, bob_turn = j >= 3 && j < 5;
      CHECK(m.repertoire[coffee::alice][q].size() == (alice_turn ? 2U : 1U));
      CHECK(m.repertoire[coffee::bob][q].size() == (bob_turn ? 2U : 1U));
      if (j == 5) CHECK(is_absorbing(m, q));
    }
  }
  CHECK(successor(m, coffee::state(1, 1), {coffee::request, coffee::skip}) == coffee::state(2, 2));
  CHECK(successor(m, coffee::state(1, 3), {coffee::skip, coffee::skip}) == coffee::state(1, 4));
  CHECK_THROWS_AS(gen_coffee(1), InputError);
}

TEST_CASE("SAT game structure of the two-clause formula") {
  const Model m = gen_satgame(fixture::two_clause_cnf());
  REQUIRE(validate_model(m).empty());
  CHECK(m.states.size() == 3 + 2 * 3);
  auto at = [&](const char* s) { return *find_state(m, s); };
  CHECK(successor(m, at("q0"), {satgame::idle, satgame::clause_action(2)}) == at("q2_1"));
  // clause 1 = x1 | !x2
  CHECK(successor(m, at("q1_1"), {satgame::top, satgame::idle}) == at("q_top"));
  CHECK(successor(m, at("q1_1"), {satgame::bot, satgame::idle}) == at("q1_2"));
  CHECK(successor(m, at("q1_2"), {satgame::bot, satgame::idle}) == at("q_top"));
  CHECK(successor(m, at("q1_3"), {satgame::top, satgame::idle}) == at("q_bot"));
  CHECK(successor(m, at("q1_3"), {satgame::bot, satgame::idle}) == at("q_bot"));
  // clause 2 = !x1 | x3
  CHECK(successor(m, at("q2_1"), {satgame::bot, satgame::idle}) == at("q_top"));
  CHECK(successor(m, at("q2_2"), {satgame::top, satgame::idle}) == at("q2_3"));
  CHECK(successor(m, at("q2_3"), {satgame::top, satgame::idle}) == at("q_top"));
  CHECK(is_absorbing(m, at("q_top")));
  CHECK(is_absorbing(m, at("q_bot")));
  CHECK(m.valuation[0] == std::vector<StateId>{at("q_top")});
  CHECK(m.repertoire[satgame::refuter][0].size() == 2);
  CHECK(m.repertoire[satgame::verifier][0] == std::vector<ActionId>{satgame::idle});
  CHECK(canonical_table(m)[satgame::refuter][at("q2_2")] == at("q2_2"));
}

TEST_CASE("property: SAT game shape on random CNFs") {
  gen::Rng rng(71);
  for (int it = 0; it < 100; ++it) {
    const Cnf cnf = gen::random_cnf(rng, 5, 5);
    const Model m = gen_satgame(cnf);
    const std::size_t k = cnf.variables(), n = cnf.clauses().size();
    REQUIRE(validate_model(m).empty());
    CHECK(m.states.size() == 3 + n * k);
    CHECK(m.indist[satgame::verifier].size() == k + 3);
    // every maximal play has length k + 2 to q_bot, at most k + 2 to q_top
    for (const auto& h : all_histories(m, k + 3)) {
      if (h.back() == satgame::lose_state(k, n)) CHECK(h.size() >= k + 2);
      if (h.size() == k + 3) CHECK(is_absorbing(m, h.back()));
    }
  }
}

TEST_CASE("SAT verdict is invariant under clause reordering") {
  gen::Rng rng(72);
  for (int it = 0; it < 60; ++it) {
    const Cnf cnf = gen::random_cnf(rng, 3, 4);
    auto clauses = cnf.clauses();
    std::reverse(clauses.begin(), clauses.end());
    const Cnf flipped(cnf.variables(), clauses);
    const Formula f = parse_formula("F win");
    CHECK(synthesize(gen_satgame(cnf), satgame::verifier, f).result.winning ==
          synthesize(gen_satgame(flipped), satgame::verifier, f).result.winning);
  }
}

TEST_CASE("satchain") {
  const Cnf c = satchain_cnf(4);
  CHECK(c.clauses().size() == 4);
  CHECK(c.find_model() == std::vector<bool>{true, true, true, true});
  const Model m = find_template("satchain").instance(4);
  CHECK(m.states.size() == 3 + 16);
}

TEST_CASE("tmrun of the halting machine reaches an accepting configuration") {
  const Model m = gen_tmrun(halting_machine(), 10);
  REQUIRE(validate_model(m).empty());
  CHECK(m.states.size() == 4);  // three steps, then halted
  CHECK(m.valuation[0] == std::vector<StateId>{3});
  CHECK(is_absorbing(m, 3));
  CHECK(gen_tmrun(halting_machine(), 2).valuation[0].empty());
  const auto e = halting_machine().execute("", "", 100);
  CHECK(e.halted);
  CHECK(e.steps == 3);
  CHECK(halting_machine().is_accepting(e.final_state));
}

TEST_CASE("tmrun of the looping machine never accepts") {
  for (std::uint32_t h : {1U, 7U, 500U}) {
    const Model m = gen_tmrun(looping_machine(), h);
    CHECK(m.states.size() == h);
    CHECK(m.valuation[0].empty());
  }
  CHECK_FALSE(looping_machine().execute("", "", 1000).halted);
  CHECK_THROWS_AS(gen_tmrun(looping_machine(), 0), InputError);
}

TEST_CASE("DIMACS parsing") {
  const Cnf a = parse_dimacs("c example\np cnf 3 2\n1 -2 0\n-1\n 3 0\n%\n0\n");
  CHECK(a == fixture::two_clause_cnf());
  CHECK(parse_dimacs(a.to_dimacs()) == a);
  const Cnf dup = parse_dimacs("p cnf 2 1\n2 1 2 0\n");
  CHECK(dup.clauses()[0] == std::vector<int>{1, 2});

  auto line_of = [](const char* text) {
    try {
      parse_dimacs(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("1 2 0\n") == 1);
  CHECK(line_of("p cnf 2 1\n1 3 0\n") == 2);
  CHECK(line_of("p cnf 2 1\n1 2\n") == 2);
  CHECK(line_of("p cnf 2 2\n1 2 0\n") == 2);
  CHECK(line_of("p cnf 2 1\nc x\n1 -1 0\n") == 3);
  CHECK(line_of("p cnf 2 1\n1 x 0\n") == 2);
  CHECK(line_of("p cnf 2 1\np cnf 2 1\n") == 2);
  CHECK(line_of("p dnf 2 1\n") == 1);
  CHECK(line_of("p cnf 31 0\n") != 0);
  CHECK_THROWS_AS(Cnf(2, {{}}), InputError);
  CHECK_THROWS_AS(Cnf(2, {{1, -1}}), InputError);
}

TEST_CASE("three Bob strategies agree on every coffee history") {
  for (std::uint32_t n = 2; n <= 10; ++n) {
    const Model m = gen_coffee(n);
    const ComputationalStrategy naive(builtin_machine("bob_fib_naive"), m, coffee::bob);
    const ComputationalStrategy memo(builtin_machine("bob_fib_memo"), m, coffee::bob);
    const ComputationalStrategy matrix(builtin_machine("bob_fib_matrix"), m, coffee::bob);
    const auto table = bob_memoryless(n);
    for (const auto& h : all_histories(m, n + 1)) {
      const auto a = naive.decide(h, kDefaultBudget).action;
      CHECK(memo.decide(h, kDefaultBudget).action == a);
      CHECK(matrix.decide(h, kDefaultBudget).action == a);
      CHECK(table.act[0][h.back()] == a);
    }
  }
}

TEST_CASE("templates yield valid models across their parameter range") {
  for (const auto& t : template_registry()) {
    const std::uint32_t hi = std::min<std::uint32_t>(t.max_param, t.min_param + 6);
    for (std::uint32_t p = t.min_param; p <= hi; ++p) {
      const Model m = t.instance(p);
      CHECK(validate_model(m).empty());
      CHECK(m.agents == t.agents);
      CHECK(m.propositions == t.propositions);
      CHECK(parse_model(format_model(m)) == m);
    }
    if (t.min_param > 0) CHECK_THROWS_AS(t.instance(t.min_param - 1), InputError);
    CHECK_THROWS_AS(t.instance(t.max_param + 1U), InputError);
  }
  CHECK(find_template("coffee").instance(3) == gen_coffee(3));
  CHECK_THROWS_AS(find_template("espresso"), InputError);
}
