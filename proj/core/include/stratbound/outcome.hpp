#pragma once

// Outcomes of coalition strategies: bounded outcome trees for machine
// strategies, finite-memory strategies and their products, and enforcement
// checks (bounded three-valued, or exact for safety/reachability).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratbound/ltl.hpp"
#include "stratbound/machine.hpp"
#include "stratbound/model.hpp"

namespace stratbound {

enum class LeafKind : std::uint8_t { internal, frontier, absorbing, error };
const char* to_string(LeafKind k);

struct OutcomeNode {
  StateId state = 0;
  /// Number of states on the path from the root, root included (root = 1).
  std::size_t depth = 1;
  std::optional<std::size_t> parent;
  /// Actions of the coalition members at this node, ordered like the coalition.
  JointAction coalition_actions;
  /// Adversary joint actions (ordered like the complement) leading to each child.
  std::vector<std::vector<JointAction>> child_choices;
  std::vector<std::size_t> children;
  LeafKind leaf = LeafKind::internal;
  std::string error;
  /// Max machine steps spent deciding at this node.
  std::uint64_t steps = 0;
};

struct OutcomeTree {
  Coalition coalition;
  std::size_t max_depth = 0;
  std::vector<OutcomeNode> nodes;  // nodes[0] is the root

  std::vector<std::size_t> leaves() const;
  /// States from the root to the node.
  std::vector<StateId> path_to(std::size_t node) const;
  /// All maximal paths, in branch order.
  std::vector<std::vector<StateId>> paths() const;
  /// Lassos closed at absorbing leaves: stem = path without its last state,
  /// loop = the absorbing state.
  std::vector<LassoPath> lassos() const;
};

inline std::size_t default_depth(const Model& m) { return 2 * m.states.size() + 2; }

/// Expands the outcome tree of the strategies (one per coalition member, in
/// any order) up to `depth` states per path. Absorbing states close the path.
/// Machine errors become error leaves.
OutcomeTree simulate_outcomes(const Model& m, const Coalition& coalition,
                              const std::vector<ComputationalStrategy>& strategies, std::size_t depth,
                              std::uint64_t budget);

enum class Enforcement : std::uint8_t { enforced, violated, inconclusive };
const char* to_string(Enforcement e);

struct EnforcementReport {
  Enforcement verdict = Enforcement::inconclusive;
  /// Counterexample when the violating path closes into a lasso.
  std::optional<LassoPath> lasso;
  /// Counterexample prefix when it does not (bounded checks on a frontier).
  std::vector<StateId> prefix;
  /// How the verdict was reached ("exhaustive to depth 7", ...).
  std::string certificate;
  std::size_t depth = 0;
  std::size_t paths = 0;
  std::size_t open_paths = 0;
  std::vector<std::string> errors;
};

/// Three-valued check of every maximal path of the outcome tree.
EnforcementReport enforce_bounded(const Model& m, const Coalition& coalition,
                                  const std::vector<ComputationalStrategy>& strategies, const Formula& f,
                                  std::size_t depth, std::uint64_t budget);

/// Memory tables indexed [memory][state]. Observations enter via the
/// canonical state of their class, so uniformity is structural:
///   action(o_0..o_n) = act[m_n][o_n],  m_0 = initial,  m_{i+1} = update[m_i][o_i].
struct FiniteMemoryStrategy {
  AgentId agent = 0;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> update;
  std::vector<std::vector<ActionId>> act;

  std::size_t memory_size() const { return act.size(); }

  /// act indexed by state; entries of one class must agree.
  static FiniteMemoryStrategy memoryless(AgentId agent, std::vector<ActionId> act);

  /// Throws InputError: wrong table shapes, non-uniform entries, or actions
  /// outside the repertoire.
  void check(const Model& m) const;
  ActionId decide(const Model& m, std::span<const StateId> history) const;
};

/// Strategy program running a finite-memory strategy as a table-driven
/// automaton over the observation history. An empty history gets the first
/// action of the repertoire at the initial state.
StrategyProgram compile_fms(const Model& m, const FiniteMemoryStrategy& fms);

struct ProductSystem {
  std::shared_ptr<const Model> model;
  Coalition coalition;
  std::vector<StateId> state;                       // model state of each product state
  std::vector<std::vector<std::uint32_t>> memory;   // memories, ordered like the coalition
  std::vector<std::vector<std::size_t>> successors; // ascending, duplicate-free
  std::size_t initial = 0;

  std::size_t size() const { return state.size(); }
};

/// Reachable product of the model with finite-memory strategies for exactly
/// the coalition members.
ProductSystem build_product(const Model& m, const Coalition& coalition, const std::vector<FiniteMemoryStrategy>& fms);

/// Exact check for G b, F b or b with b a state formula. Throws
/// UnsupportedObjective otherwise.
EnforcementReport enforce_exact(const ProductSystem& p, const Formula& f);

}  // namespace stratbound
