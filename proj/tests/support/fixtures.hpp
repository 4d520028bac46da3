#pragma once

#include "stratbound/cnf.hpp"
#include "stratbound/model.hpp"

namespace fixture {

// One agent, one state, one action, self-loop.
inline stratbound::Model tiny() {
  stratbound::Model m;
  m.agents = {"a"};
  m.states = {"q"};
  m.actions = {"x"};
  m.propositions = {"p"};
  m.valuation = {{0}};
  m.repertoire = {{{0}}};
  m.transitions = {{{{0}, 0}}};
  m.indist = {{{0}}};
  return m;
}

// (x1 | !x2) & (!x1 | x3)
inline stratbound::Cnf two_clause_cnf() { return stratbound::Cnf(3, {{1, -2}, {-1, 3}}); }

}  // namespace fixture
