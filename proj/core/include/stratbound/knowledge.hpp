#pragma once

// Knowledge-subset games for one agent under imperfect information, and
// sure reachability / safety solving on them.

#include <cstdint>
#include <optional>
#include <vector>

#include "stratbound/ltl.hpp"
#include "stratbound/model.hpp"
#include "stratbound/outcome.hpp"
#include "stratbound/program.hpp"

namespace stratbound {

/// Protagonist nodes are knowledge sets; the antagonist node (k, i) is the
/// protagonist at node k having committed to actions[k][i]. Its moves are the
/// successor knowledge sets, one per observation class the play can land in.
struct KnowledgeGame {
  AgentId agent = 0;
  /// Ascending member lists, all inside one observation class.
  std::vector<std::vector<StateId>> nodes;
  std::size_t initial = 0;
  std::vector<std::vector<ActionId>> actions;
  std::vector<std::vector<std::vector<std::size_t>>> moves;

  std::size_t size() const { return nodes.size(); }
  std::size_t antagonist_count() const;
  std::optional<std::size_t> find(const std::vector<StateId>& members) const;
};

/// Reachable subset construction from {q0}.
KnowledgeGame knowledge_game(const Model& m, AgentId a);

/// Universal lift: a node satisfies b iff every member state does.
std::vector<char> lift_predicate(const Model& m, const KnowledgeGame& g, const Formula& b);

struct SynthesisResult {
  bool winning = false;
  /// Action per protagonist node; set on every node of the winning region.
  std::vector<std::optional<ActionId>> strategy;
  std::vector<char> region;
  /// Attractor rank (reachability only; 0 on target nodes).
  std::vector<std::size_t> rank;
};

SynthesisResult solve_reachability(const KnowledgeGame& g, const std::vector<char>& target);
SynthesisResult solve_safety(const KnowledgeGame& g, const std::vector<char>& safe);

/// Finite-memory strategy replaying the knowledge game along the history.
/// Off the winning region, plays the first available action.
FiniteMemoryStrategy knowledge_strategy(const Model& m, const KnowledgeGame& g, const SynthesisResult& sr);

/// Table-driven program for knowledge_strategy. Throws InputError unless
/// sr.winning.
StrategyProgram compile_knowledge_strategy(const Model& m, const KnowledgeGame& g, const SynthesisResult& sr);

enum class ObjectiveShape : std::uint8_t { reach, safe };

/// Splits F b / G b into shape and body; throws UnsupportedObjective.
std::pair<ObjectiveShape, Formula> fragment_of(const Formula& f);

struct Synthesis {
  KnowledgeGame game;
  SynthesisResult result;
  ObjectiveShape shape = ObjectiveShape::reach;
};

/// knowledge_game + lift + solve for F b or G b.
Synthesis synthesize(const Model& m, AgentId a, const Formula& f);

}  // namespace stratbound
