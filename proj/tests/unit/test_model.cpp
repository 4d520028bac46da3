#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "stratbound/errors.hpp"
#include "stratbound/model.hpp"
#include "stratbound/templates.hpp"

using namespace stratbound;

namespace {

bool has(const std::vector<Diagnostic>& ds, Invariant inv) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.invariant == inv; });
}

StateId st(const Model& m, const char* name) { return *find_state(m, name); }
ActionId act(const Model& m, const char* name) { return *find_action(m, name); }

}  // namespace

TEST_CASE("coffee n=3 validates") {
  CHECK(validate_model(gen_coffee(3)).empty());
  CHECK(validate_model(fixture::tiny()).empty());
}

TEST_CASE("uniformity violation gives one diagnostic") {
  Model m = gen_coffee(3);
  // Bob cannot tell 0/2 from 1/2, but Bob's repertoire there becomes different
  auto& cls = m.indist[coffee::bob];
  std::erase_if(cls, [&](const auto& c) { return c.front() == st(m, "1/2"); });
  for (auto& c : cls) {
    if (c.front() == st(m, "0/2")) c.push_back(st(m, "1/2"));
  }
  m.repertoire[coffee::bob][st(m, "1/2")] = {coffee::skip};
  std::erase_if(m.transitions[st(m, "1/2")], [](const Transition& t) { return t.joint[coffee::bob] == coffee::request; });
  normalize(m);
  const auto ds = validate_model(m);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].invariant == Invariant::uniformity);
  CHECK(ds[0].agent == coffee::bob);
}

TEST_CASE("empty repertoire gives a nonemptiness diagnostic") {
  Model m = fixture::tiny();
  m.repertoire[0][0].clear();
  m.transitions[0].clear();
  const auto ds = validate_model(m);
  REQUIRE(ds.size() >= 1);
  CHECK(has(ds, Invariant::repertoire_empty));
}

TEST_CASE("each single-invariant mutation is diagnosed") {
  const Model base = gen_coffee(3);
  SUBCASE("initial out of range") {
    Model m = base;
    m.initial = 99;
    CHECK(has(validate_model(m), Invariant::initial_state));
  }
  SUBCASE("valuation state out of range") {
    Model m = base;
    m.valuation[0].push_back(77);
    CHECK(has(validate_model(m), Invariant::valuation));
  }
  SUBCASE("action outside the action set") {
    Model m = base;
    m.repertoire[0][9] = {5};
    CHECK(!validate_model(m).empty());
  }
  SUBCASE("missing transition") {
    Model m = base;
    m.transitions[0].pop_back();
    CHECK(has(validate_model(m), Invariant::transition_missing));
  }
  SUBCASE("extra transition") {
    Model m = base;
    m.transitions[9].push_back({{coffee::request, coffee::request}, 9});
    normalize(m);
    CHECK(has(validate_model(m), Invariant::transition_extra));
  }
  SUBCASE("bad transition target") {
    Model m = base;
    m.transitions[0][0].target = 42;
    CHECK(has(validate_model(m), Invariant::transition_target));
  }
  SUBCASE("state in two classes") {
    Model m = base;
    m.indist[0][1].push_back(0);
    normalize(m);
    CHECK(has(validate_model(m), Invariant::partition));
  }
  SUBCASE("state in no class") {
    Model m = base;
    m.indist[1].pop_back();
    CHECK(has(validate_model(m), Invariant::partition));
  }
  SUBCASE("duplicate state names") {
    Model m = base;
    m.states[1] = m.states[0];
    CHECK(has(validate_model(m), Invariant::names));
  }
  SUBCASE("shape disagreement") {
    Model m = base;
    m.repertoire.pop_back();
    CHECK(has(validate_model(m), Invariant::structure));
  }
}

TEST_CASE("observation_of") {
  SUBCASE("perfect information gives singletons") {
    const Model m = gen_coffee(4);
    for (StateId q = 0; q < m.states.size(); ++q) {
      const auto o = observation_of(m, coffee::alice, q);
      CHECK(o.members == std::vector<StateId>{q});
      CHECK(o.canonical == q);
    }
  }
  SUBCASE("SAT game verifier at q2_1") {
    const Model m = gen_satgame(fixture::two_clause_cnf());
    const auto o = observation_of(m, satgame::verifier, st(m, "q2_1"));
    CHECK(o.members == std::vector<StateId>{st(m, "q1_1"), st(m, "q2_1")});
    CHECK(o.canonical == st(m, "q1_1"));
  }
  SUBCASE("coffee, Bob, 1/2") {
    const Model m = gen_coffee(3);
    CHECK(observation_of(m, coffee::bob, st(m, "1/2")).members == std::vector<StateId>{st(m, "1/2")});
  }
  SUBCASE("unknown state") { CHECK_THROWS_AS(observation_of(gen_coffee(3), 0, 10), InputError); }
}

TEST_CASE("joint_repertoire") {
  const Model m = gen_coffee(3);
  SUBCASE("singleton coalition") {
    const auto js = joint_repertoire(m, Coalition({coffee::alice}), st(m, "0/0"));
    CHECK(js == std::vector<JointAction>{{coffee::request}, {coffee::skip}});
  }
  SUBCASE("both agents at 0/0") {
    const auto js = joint_repertoire(m, Coalition::all(m), st(m, "0/0"));
    CHECK(js == std::vector<JointAction>{{coffee::request, coffee::skip}, {coffee::skip, coffee::skip}});
  }
  SUBCASE("sizes 2 and 3 give 6 tuples") {
    Model t;
    t.agents = {"a", "b"};
    t.states = {"q"};
    t.actions = {"x", "y", "z"};
    t.repertoire = {{{0, 1}}, {{0, 1, 2}}};
    t.indist = identity_partition(2, 1);
    fill_transitions(t, [](StateId, const JointAction&) { return StateId{0}; });
    REQUIRE(validate_model(t).empty());
    const auto js = joint_repertoire(t, Coalition::all(t), 0);
    CHECK(js.size() == 6);
    CHECK(std::is_sorted(js.begin(), js.end()));
  }
  SUBCASE("unknown state") { CHECK_THROWS_AS(joint_repertoire(m, Coalition::all(m), 10), InputError); }
}

TEST_CASE("successor") {
  const Model m = gen_coffee(3);
  CHECK(successor(m, st(m, "0/0"), {act(m, "request"), act(m, "skip")}) == st(m, "1/1"));
  CHECK(successor(fixture::tiny(), 0, {0}) == 0);
  const Model sat = gen_satgame(fixture::two_clause_cnf());
  CHECK(successor(sat, st(sat, "q1_1"), {satgame::top, satgame::idle}) == st(sat, "q_top"));
  CHECK_THROWS_AS(successor(m, st(m, "0/0"), {act(m, "skip"), act(m, "request")}), InputError);
}

TEST_CASE("abstract_size") {
  CHECK(abstract_size(fixture::tiny()) == 2);
  // hand count of the n=3 machine: 10 states, 6 two-way choice states, 4 absorbing
  CHECK(abstract_size(gen_coffee(3)) == 10 + (6 * 2 + 4) + 0);
  Model m = gen_coffee(3);
  const std::size_t before = abstract_size(m);
  // merge two absorbing states for Alice (repertoires agree)
  auto& cls = m.indist[coffee::alice];
  std::erase_if(cls, [&](const auto& c) { return c.front() == st(m, "3/3"); });
  for (auto& c : cls) {
    if (c.front() == st(m, "2/3")) c.push_back(st(m, "3/3"));
  }
  normalize(m);
  REQUIRE(validate_model(m).empty());
  CHECK(abstract_size(m) == before + 1);
}

TEST_CASE("coalitions") {
  const Model m = gen_coffee(3);
  CHECK_THROWS_AS(Coalition(std::vector<AgentId>{}), InputError);
  CHECK_THROWS_AS(Coalition({1, 0, 1}), InputError);
  const Coalition c({1, 0});
  CHECK(c.agents()[0] == 0);
  CHECK(c.contains(1));
  CHECK(Coalition({coffee::bob}).complement(m) == std::vector<AgentId>{coffee::alice});
  CHECK_THROWS_AS(Coalition({5}).check_against(m), InputError);
}

TEST_CASE("property: successor is total and deterministic on random models") {
  gen::Rng rng(11);
  for (int it = 0; it < 100; ++it) {
    const Model m = gen::random_model(rng);
    REQUIRE(validate_model(m).empty());
    for (StateId q = 0; q < m.states.size(); ++q) {
      for (const auto& j : joint_repertoire(m, Coalition::all(m), q)) {
        const StateId a = successor(m, q, j);
        CHECK(a == successor(m, q, j));
        CHECK(a < m.states.size());
      }
    }
  }
}

TEST_CASE("property: observation member sets agree iff indistinguishable") {
  gen::Rng rng(12);
  for (int it = 0; it < 100; ++it) {
    const Model m = gen::random_model(rng);
    for (AgentId a = 0; a < m.agents.size(); ++a) {
      auto same_class = [&](StateId x, StateId y) {
        for (const auto& c : m.indist[a]) {
          const bool hx = std::find(c.begin(), c.end(), x) != c.end();
          const bool hy = std::find(c.begin(), c.end(), y) != c.end();
          if (hx || hy) return hx && hy;
        }
        return false;
      };
      for (StateId x = 0; x < m.states.size(); ++x) {
        for (StateId y = 0; y < m.states.size(); ++y) {
          CHECK((observation_of(m, a, x).members == observation_of(m, a, y).members) == same_class(x, y));
        }
      }
    }
  }
}
