#pragma once

// Explicit finite imperfect-information concurrent game structures.
//
// Agents, states, actions and propositions are dense indices starting at 0.
// The display names live in the parallel name vectors. A Model is a plain
// value: build one field by field (or through a template generator), then
// run validate_model() before handing it to anything else.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stratbound {

using AgentId = std::uint32_t;
using StateId = std::uint32_t;
using ActionId = std::uint32_t;
using PropId = std::uint32_t;

/// One action per agent, indexed by AgentId.
using JointAction = std::vector<ActionId>;

struct Transition {
  JointAction joint;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Model {
  std::vector<std::string> agents;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::string> actions;
  std::vector<std::string> propositions;
  /// valuation[p] = ascending list of states where p holds.
  std::vector<std::vector<StateId>> valuation;
  /// repertoire[a][q] = ascending list of actions of agent a at q.
  std::vector<std::vector<std::vector<ActionId>>> repertoire;
  /// transitions[q] = outgoing entries sorted by joint action.
  std::vector<std::vector<Transition>> transitions;
  /// indist[a] = partition of the states into classes of ~_a. Each class is
  /// ascending; classes are ordered by their minimal member.
  std::vector<std::vector<std::vector<StateId>>> indist;

  std::size_t agent_count() const { return agents.size(); }
  std::size_t state_count() const { return states.size(); }
  std::size_t action_count() const { return actions.size(); }

  friend bool operator==(const Model&, const Model&) = default;
};

enum class Invariant {
  structure,          // vector sizes disagree with the declared counts
  names,              // duplicate or empty display names
  initial_state,
  valuation,
  repertoire_empty,
  repertoire_range,
  transition_missing,
  transition_extra,
  transition_target,
  partition,
  uniformity,
};

const char* to_string(Invariant inv);

struct Diagnostic {
  Invariant invariant;
  std::string message;
  std::optional<AgentId> agent;
  std::optional<StateId> state;
  std::optional<ActionId> action;
};

/// Empty iff every Model invariant holds.
std::vector<Diagnostic> validate_model(const Model& m);

/// Throws InputError listing the diagnostics when the model is invalid.
void require_valid(const Model& m);

/// Sorts every set-valued field into the canonical order validate_model
/// expects (ascending members, classes ordered by minimal member,
/// transitions ordered by joint action). Does not repair anything else.
void normalize(Model& m);

struct Observation {
  AgentId agent = 0;
  StateId canonical = 0;
  std::vector<StateId> members;

  friend bool operator==(const Observation&, const Observation&) = default;
};

Observation observation_of(const Model& m, AgentId a, StateId q);

/// canonical[a][q] = minimal member of the ~_a class of q.
std::vector<std::vector<StateId>> canonical_table(const Model& m);

/// Sorted, duplicate-free nonempty set of agents.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::vector<AgentId> agents);

  static Coalition all(const Model& m);

  std::span<const AgentId> agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  bool contains(AgentId a) const;
  /// Agents of m that are not in this coalition, ascending.
  std::vector<AgentId> complement(const Model& m) const;
  void check_against(const Model& m) const;

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::vector<AgentId> agents_;
};

/// Cartesian product of the repertoires of the coalition members at q, in
/// lexicographic order. Tuples are indexed like coalition.agents().
std::vector<JointAction> joint_repertoire(const Model& m, const Coalition& coalition, StateId q);

/// Deterministic outcome of a full joint action.
StateId successor(const Model& m, StateId q, const JointAction& joint);

/// Non-throwing lookup; nullopt when the joint action is not in the table.
std::optional<StateId> find_successor(const Model& m, StateId q, std::span<const ActionId> joint);

/// |states| + |transition entries| + number of unordered pairs q != q'
/// with q ~_a q', counted per agent.
std::size_t abstract_size(const Model& m);

/// True when every transition out of q leads back to q.
bool is_absorbing(const Model& m, StateId q);

std::optional<StateId> find_state(const Model& m, std::string_view name);
std::optional<AgentId> find_agent(const Model& m, std::string_view name);
std::optional<ActionId> find_action(const Model& m, std::string_view name);
std::optional<PropId> find_proposition(const Model& m, std::string_view name);

bool holds(const Model& m, PropId p, StateId q);

/// The identity relation for every agent (perfect information).
std::vector<std::vector<std::vector<StateId>>> identity_partition(std::size_t agents, std::size_t states);

/// Fills `transitions` with the full product of repertoires, taking targets
/// from `next`. Convenience for generators.
template <typename NextFn>
void fill_transitions(Model& m, NextFn&& next);

}  // namespace stratbound

#include "stratbound/detail/model_impl.hpp"
