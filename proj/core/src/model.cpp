#include "stratbound/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stratbound/errors.hpp"

namespace stratbound {

const char* to_string(Invariant inv) {
  switch (inv) {
    case Invariant::structure: return "structure";
    case Invariant::names: return "names";
    case Invariant::initial_state: return "initial-state";
    case Invariant::valuation: return "valuation";
    case Invariant::repertoire_empty: return "repertoire-nonempty";
    case Invariant::repertoire_range: return "repertoire-range";
    case Invariant::transition_missing: return "transition-missing";
    case Invariant::transition_extra: return "transition-extra";
    case Invariant::transition_target: return "transition-target";
    case Invariant::partition: return "partition";
    case Invariant::uniformity: return "uniformity";
  }
  return "unknown";
}

namespace {

bool strictly_ascending(const std::vector<std::uint32_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

void check_names(const std::vector<std::string>& names, const char* what,
                 std::vector<Diagnostic>& out) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) {
      out.push_back({Invariant::names, std::string("empty ") + what + " name", {}, {}, {}});
    } else if (!seen.insert(name).second) {
      out.push_back({Invariant::names, std::string("duplicate ") + what + " name '" + name + "'",
                     {}, {}, {}});
    }
  }
}

std::string joint_text(const JointAction& joint) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < joint.size(); ++i) os << (i ? "," : "") << joint[i];
  os << ')';
  return os.str();
}

}  // namespace

std::vector<Diagnostic> validate_model(const Model& m) {
  std::vector<Diagnostic> out;
  const std::size_t k = m.agents.size();
  const std::size_t n = m.states.size();
  const std::size_t acts = m.actions.size();

  auto structural = [&](std::string msg) {
    out.push_back({Invariant::structure, std::move(msg), {}, {}, {}});
  };
  if (k == 0) structural("no agents");
  if (n == 0) structural("no states");
  if (acts == 0) structural("no actions");
  if (m.valuation.size() != m.propositions.size()) structural("valuation size differs from proposition count");
  if (m.repertoire.size() != k) structural("repertoire size differs from agent count");
  if (m.transitions.size() != n) structural("transition table size differs from state count");
  if (m.indist.size() != k) structural("indistinguishability size differs from agent count");
  for (std::size_t a = 0; a < m.repertoire.size(); ++a) {
    if (m.repertoire[a].size() != n) {
      structural("repertoire of agent " + std::to_string(a) + " does not cover every state");
    }
  }
  if (!out.empty()) return out;

  check_names(m.agents, "agent", out);
  check_names(m.states, "state", out);
  check_names(m.actions, "action", out);
  check_names(m.propositions, "proposition", out);

  if (m.initial >= n) {
    out.push_back({Invariant::initial_state, "initial state out of range", {}, {}, {}});
  }

  for (std::size_t p = 0; p < m.valuation.size(); ++p) {
    const auto& set = m.valuation[p];
    if (!strictly_ascending(set) || (!set.empty() && set.back() >= n)) {
      out.push_back({Invariant::valuation,
                     "valuation of '" + m.propositions[p] + "' is not an ascending set of states",
                     {}, {}, {}});
    }
  }

  bool repertoires_ok = true;
  for (AgentId a = 0; a < k; ++a) {
    for (StateId q = 0; q < n; ++q) {
      const auto& rep = m.repertoire[a][q];
      if (rep.empty()) {
        out.push_back({Invariant::repertoire_empty,
                       "empty repertoire for agent '" + m.agents[a] + "' at state '" + m.states[q] + "'",
                       a, q, {}});
        repertoires_ok = false;
      } else if (!strictly_ascending(rep) || rep.back() >= acts) {
        out.push_back({Invariant::repertoire_range,
                       "repertoire of agent '" + m.agents[a] + "' at state '" + m.states[q] +
                           "' is not an ascending set of known actions",
                       a, q, {}});
        repertoires_ok = false;
      }
    }
  }

  if (repertoires_ok) {
    const Coalition everyone = Coalition::all(m);
    for (StateId q = 0; q < n; ++q) {
      const auto expected = joint_repertoire(m, everyone, q);
      std::vector<JointAction> present;
      for (const auto& t : m.transitions[q]) {
        if (t.target >= n) {
          out.push_back({Invariant::transition_target,
                         "transition " + joint_text(t.joint) + " at '" + m.states[q] + "' targets an unknown state",
                         {}, q, {}});
        }
        present.push_back(t.joint);
      }
      if (!std::is_sorted(present.begin(), present.end()) ||
          std::adjacent_find(present.begin(), present.end()) != present.end()) {
        out.push_back({Invariant::transition_extra,
                       "transitions at '" + m.states[q] + "' are not strictly ordered by joint action",
                       {}, q, {}});
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
      }
      std::vector<JointAction> missing, extra;
      std::set_difference(expected.begin(), expected.end(), present.begin(), present.end(),
                          std::back_inserter(missing));
      std::set_difference(present.begin(), present.end(), expected.begin(), expected.end(),
                          std::back_inserter(extra));
      for (const auto& j : missing) {
        out.push_back({Invariant::transition_missing,
                       "no transition for joint action " + joint_text(j) + " at '" + m.states[q] + "'",
                       {}, q, {}});
      }
      for (const auto& j : extra) {
        out.push_back({Invariant::transition_extra,
                       "transition for joint action " + joint_text(j) + " outside the repertoires at '" +
                           m.states[q] + "'",
                       {}, q, {}});
      }
    }
  }

  for (AgentId a = 0; a < k; ++a) {
    std::vector<int> seen(n, 0);
    bool ok = true;
    StateId previous_min = 0;
    for (std::size_t c = 0; c < m.indist[a].size(); ++c) {
      const auto& cls = m.indist[a][c];
      if (cls.empty() || !strictly_ascending(cls) || cls.back() >= n ||
          (c > 0 && cls.front() <= previous_min)) {
        ok = false;
        break;
      }
      previous_min = cls.front();
      for (StateId q : cls) ++seen[q];
    }
    if (ok) ok = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    if (!ok) {
      out.push_back({Invariant::partition,
                     "indistinguishability of agent '" + m.agents[a] + "' is not a canonical partition of the states",
                     a, {}, {}});
      continue;
    }
    for (const auto& cls : m.indist[a]) {
      for (StateId q : cls) {
        if (m.repertoire[a][q] != m.repertoire[a][cls.front()]) {
          out.push_back({Invariant::uniformity,
                         "agent '" + m.agents[a] + "' has different repertoires at indistinguishable states '" +
                             m.states[cls.front()] + "' and '" + m.states[q] + "'",
                         a, q, {}});
        }
      }
    }
  }
  return out;
}

void require_valid(const Model& m) {
  const auto diags = validate_model(m);
  if (diags.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& d : diags) msg += "\n  [" + std::string(to_string(d.invariant)) + "] " + d.message;
  throw InputError(msg);
}

void normalize(Model& m) {
  for (auto& set : m.valuation) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  for (auto& per_agent : m.repertoire) {
    for (auto& rep : per_agent) {
      std::sort(rep.begin(), rep.end());
      rep.erase(std::unique(rep.begin(), rep.end()), rep.end());
    }
  }
  for (auto& out : m.transitions) {
    std::sort(out.begin(), out.end(),
              [](const Transition& a, const Transition& b) { return a.joint < b.joint; });
  }
  for (auto& classes : m.indist) {
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
      if (a.empty() || b.empty()) return a.size() < b.size();
      return a.front() < b.front();
    });
  }
}

namespace {

void check_state(const Model& m, StateId q) {
  if (q >= m.states.size()) throw InputError("unknown state index " + std::to_string(q));
}

void check_agent(const Model& m, AgentId a) {
  if (a >= m.agents.size()) throw InputError("unknown agent index " + std::to_string(a));
}

}  // namespace

Observation observation_of(const Model& m, AgentId a, StateId q) {
  check_agent(m, a);
  check_state(m, q);
  for (const auto& cls : m.indist[a]) {
    if (std::binary_search(cls.begin(), cls.end(), q)) {
      return Observation{a, cls.front(), cls};
    }
  }
  throw InputError("state " + std::to_string(q) + " is in no class of agent " + std::to_string(a));
}

std::vector<std::vector<StateId>> canonical_table(const Model& m) {
  std::vector<std::vector<StateId>> table(m.agents.size(), std::vector<StateId>(m.states.size(), 0));
  for (AgentId a = 0; a < m.indist.size() && a < table.size(); ++a) {
    for (const auto& cls : m.indist[a]) {
      for (StateId q : cls) {
        if (q < m.states.size()) table[a][q] = cls.front();
      }
    }
  }
  return table;
}

Coalition::Coalition(std::vector<AgentId> agents) : agents_(std::move(agents)) {
  std::sort(agents_.begin(), agents_.end());
  if (std::adjacent_find(agents_.begin(), agents_.end()) != agents_.end()) {
    throw InputError("coalition lists an agent twice");
  }
  if (agents_.empty()) throw InputError("coalition must be nonempty");
}

Coalition Coalition::all(const Model& m) {
  std::vector<AgentId> agents(m.agents.size());
  for (AgentId a = 0; a < agents.size(); ++a) agents[a] = a;
  return Coalition(std::move(agents));
}

bool Coalition::contains(AgentId a) const {
  return std::binary_search(agents_.begin(), agents_.end(), a);
}

std::vector<AgentId> Coalition::complement(const Model& m) const {
  std::vector<AgentId> out;
  for (AgentId a = 0; a < m.agents.size(); ++a) {
    if (!contains(a)) out.push_back(a);
  }
  return out;
}

void Coalition::check_against(const Model& m) const {
  for (AgentId a : agents_) check_agent(m, a);
}

std::vector<JointAction> joint_repertoire(const Model& m, const Coalition& coalition, StateId q) {
  check_state(m, q);
  coalition.check_against(m);
  std::vector<JointAction> out{JointAction{}};
  for (AgentId a : coalition.agents()) {
    std::vector<JointAction> next;
    next.reserve(out.size() * m.repertoire[a][q].size());
    for (const auto& prefix : out) {
      for (ActionId act : m.repertoire[a][q]) {
        JointAction j = prefix;
        j.push_back(act);
        next.push_back(std::move(j));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<StateId> find_successor(const Model& m, StateId q, std::span<const ActionId> joint) {
  if (q >= m.transitions.size()) return std::nullopt;
  const auto& out = m.transitions[q];
  auto it = std::lower_bound(out.begin(), out.end(), joint, [](const Transition& t, std::span<const ActionId> j) {
    return std::lexicographical_compare(t.joint.begin(), t.joint.end(), j.begin(), j.end());
  });
  if (it == out.end() || !std::equal(it->joint.begin(), it->joint.end(), joint.begin(), joint.end())) {
    return std::nullopt;
  }
  return it->target;
}

StateId successor(const Model& m, StateId q, const JointAction& joint) {
  check_state(m, q);
  if (joint.size() != m.agents.size()) {
    throw InputError("joint action has " + std::to_string(joint.size()) + " components, expected " +
                     std::to_string(m.agents.size()));
  }
  for (AgentId a = 0; a < joint.size(); ++a) {
    const auto& rep = m.repertoire[a][q];
    if (!std::binary_search(rep.begin(), rep.end(), joint[a])) {
      throw InputError("action " + std::to_string(joint[a]) + " is outside the repertoire of agent '" +
                       m.agents[a] + "' at state '" + m.states[q] + "'");
    }
  }
  if (auto t = find_successor(m, q, joint)) return *t;
  throw InputError("transition table has no entry for this joint action at state '" + m.states[q] + "'");
}

std::size_t abstract_size(const Model& m) {
  std::size_t size = m.states.size();
  for (const auto& out : m.transitions) size += out.size();
  for (const auto& classes : m.indist) {
    for (const auto& cls : classes) size += cls.size() * (cls.size() - 1) / 2;
  }
  return size;
}

bool is_absorbing(const Model& m, StateId q) {
  check_state(m, q);
  return std::all_of(m.transitions[q].begin(), m.transitions[q].end(),
                     [q](const Transition& t) { return t.target == q; });
}

namespace {

template <typename Id>
std::optional<Id> find_name(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Id>(it - names.begin());
}

}  // namespace

std::optional<StateId> find_state(const Model& m, std::string_view name) { return find_name<StateId>(m.states, name); }
std::optional<AgentId> find_agent(const Model& m, std::string_view name) { return find_name<AgentId>(m.agents, name); }
std::optional<ActionId> find_action(const Model& m, std::string_view name) { return find_name<ActionId>(m.actions, name); }
std::optional<PropId> find_proposition(const Model& m, std::string_view name) {
  return find_name<PropId>(m.propositions, name);
}

bool holds(const Model& m, PropId p, StateId q) {
  const auto& set = m.valuation.at(p);
  return std::binary_search(set.begin(), set.end(), q);
}

std::vector<std::vector<std::vector<StateId>>> identity_partition(std::size_t agents, std::size_t states) {
  std::vector<std::vector<StateId>> classes(states);
  for (StateId q = 0; q < states; ++q) classes[q] = {q};
  return std::vector<std::vector<std::vector<StateId>>>(agents, classes);
}

}  // namespace stratbound
