#pragma once

#include <string_view>

namespace stratbound {

template <typename NextFn>
void fill_transitions(Model& m, NextFn&& next) {
  m.transitions.assign(m.states.size(), {});
  const Coalition everyone = Coalition::all(m);
  for (StateId q = 0; q < m.states.size(); ++q) {
    for (JointAction& joint : joint_repertoire(m, everyone, q)) {
      const StateId target = next(q, static_cast<const JointAction&>(joint));
      m.transitions[q].push_back(Transition{std::move(joint), target});
    }
  }
}

}  // namespace stratbound
