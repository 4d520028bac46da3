#include "stratbound/knowledge.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "stratbound/errors.hpp"

namespace stratbound {

std::size_t KnowledgeGame::antagonist_count() const {
  std::size_t n = 0;
  for (const auto& a : actions) n += a.size();
  return n;
}

std::optional<std::size_t> KnowledgeGame::find(const std::vector<StateId>& members) const {
  auto it = std::find(nodes.begin(), nodes.end(), members);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

KnowledgeGame knowledge_game(const Model& m, AgentId a) {
  require_valid(m);
  if (a >= m.agents.size()) throw InputError("unknown agent index " + std::to_string(a));
  const auto canonical = canonical_table(m);
  KnowledgeGame g;
  g.agent = a;
  std::map<std::vector<StateId>, std::size_t> index;
  auto intern = [&](std::vector<StateId> k) {
    auto [it, inserted] = index.emplace(k, g.nodes.size());
    if (inserted) {
      g.nodes.push_back(std::move(k));
      g.actions.emplace_back();
      g.moves.emplace_back();
    }
    return std::make_pair(it->second, inserted);
  };
  g.initial = intern({m.initial}).first;
  std::deque<std::size_t> queue{g.initial};
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const auto members = g.nodes[id];
    const auto acts = m.repertoire[a][members.front()];
    std::vector<std::vector<std::size_t>> moves;
    for (ActionId act : acts) {
      // successor states under act, against every choice of the others
      std::map<StateId, std::set<StateId>> by_class;
      for (StateId q : members) {
        for (const auto& t : m.transitions[q]) {
          if (t.joint[a] == act) by_class[canonical[a][t.target]].insert(t.target);
        }
      }
      std::vector<std::size_t> succ;
      for (auto& [_, states] : by_class) {
        auto [next, inserted] = intern(std::vector<StateId>(states.begin(), states.end()));
        if (inserted) queue.push_back(next);
        succ.push_back(next);
      }
      moves.push_back(std::move(succ));
    }
    g.actions[id] = acts;
    g.moves[id] = std::move(moves);
  }
  return g;
}

std::vector<char> lift_predicate(const Model& m, const KnowledgeGame& g, const Formula& b) {
  if (!is_state_formula(b)) throw UnsupportedObjective("knowledge predicates must be state formulas");
  std::vector<char> out(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    out[k] = std::all_of(g.nodes[k].begin(), g.nodes[k].end(), [&](StateId q) { return eval_state(m, q, b); });
  }
  return out;
}

SynthesisResult solve_reachability(const KnowledgeGame& g, const std::vector<char>& target) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnranked = static_cast<std::size_t>(-1);
  SynthesisResult r;
  r.strategy.assign(n, std::nullopt);
  r.region.assign(n, 0);
  r.rank.assign(n, kUnranked);
  for (std::size_t k = 0; k < n; ++k) {
    if (target[k]) {
      r.region[k] = 1;
      r.rank[k] = 0;
      r.strategy[k] = g.actions[k].front();
    }
  }
  // rounds: a node joins at rank r+1 if some action forces ranks <= r
  for (std::size_t round = 1;; ++round) {
    std::vector<std::pair<std::size_t, ActionId>> joined;
    for (std::size_t k = 0; k < n; ++k) {
      if (r.region[k]) continue;
      for (std::size_t i = 0; i < g.actions[k].size(); ++i) {
        const auto& succ = g.moves[k][i];
        if (std::all_of(succ.begin(), succ.end(), [&](std::size_t t) { return r.region[t] != 0; })) {
          joined.emplace_back(k, g.actions[k][i]);
          break;
        }
      }
    }
    if (joined.empty()) break;
    for (auto [k, act] : joined) {
      r.region[k] = 1;
      r.rank[k] = round;
      r.strategy[k] = act;
    }
  }
  r.winning = r.region[g.initial] != 0;
  return r;
}

SynthesisResult solve_safety(const KnowledgeGame& g, const std::vector<char>& safe) {
  const std::size_t n = g.size();
  SynthesisResult r;
  r.region.assign(safe.begin(), safe.end());
  r.rank.assign(n, 0);
  auto stays = [&](std::size_t k, std::size_t i) {
    const auto& succ = g.moves[k][i];
    return std::all_of(succ.begin(), succ.end(), [&](std::size_t t) { return r.region[t] != 0; });
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!r.region[k]) continue;
      bool ok = false;
      for (std::size_t i = 0; i < g.actions[k].size() && !ok; ++i) ok = stays(k, i);
      if (!ok) {
        r.region[k] = 0;
        changed = true;
      }
    }
  }
  r.strategy.assign(n, std::nullopt);
  for (std::size_t k = 0; k < n; ++k) {
    if (!r.region[k]) continue;
    for (std::size_t i = 0; i < g.actions[k].size(); ++i) {
      if (stays(k, i)) {
        r.strategy[k] = g.actions[k][i];
        break;
      }
    }
  }
  r.winning = r.region[g.initial] != 0;
  return r;
}

FiniteMemoryStrategy knowledge_strategy(const Model& m, const KnowledgeGame& g, const SynthesisResult& sr) {
  const AgentId a = g.agent;
  const auto canonical = canonical_table(m);
  const std::size_t n = g.size();
  const std::size_t S = m.states.size();
  // memories: 0..n-1 = last knowledge node, n = before the first observation, n+1 = off the game
  const auto start = static_cast<std::uint32_t>(n);
  const auto off = static_cast<std::uint32_t>(n + 1);

  auto played = [&](std::size_t k) -> ActionId {
    return sr.strategy[k] ? *sr.strategy[k] : g.actions[k].front();
  };

  FiniteMemoryStrategy s;
  s.agent = a;
  s.initial = start;
  s.update.assign(n + 2, std::vector<std::uint32_t>(S, off));
  s.act.assign(n + 2, std::vector<ActionId>(S, 0));
  for (auto& row : s.act) {
    for (StateId q = 0; q < S; ++q) row[q] = m.repertoire[a][q].front();
  }
  // the node reached from memory `mem` after observing the class of q
  auto enter = [&](std::uint32_t mem, std::size_t node) {
    const StateId c = canonical[a][g.nodes[node].front()];
    for (StateId q = 0; q < S; ++q) {
      if (canonical[a][q] != c) continue;
      s.update[mem][q] = static_cast<std::uint32_t>(node);
      s.act[mem][q] = played(node);
    }
  };
  enter(start, g.initial);
  for (std::size_t k = 0; k < n; ++k) {
    const ActionId act = played(k);
    const auto it = std::find(g.actions[k].begin(), g.actions[k].end(), act);
    for (std::size_t next : g.moves[k][static_cast<std::size_t>(it - g.actions[k].begin())]) {
      enter(static_cast<std::uint32_t>(k), next);
    }
  }
  return s;
}

StrategyProgram compile_knowledge_strategy(const Model& m, const KnowledgeGame& g, const SynthesisResult& sr) {
  if (!sr.winning) throw InputError("cannot compile a strategy from a losing synthesis result");
  return compile_fms(m, knowledge_strategy(m, g, sr));
}

std::pair<ObjectiveShape, Formula> fragment_of(const Formula& f) {
  if (auto b = match_eventually(f)) return {ObjectiveShape::reach, *b};
  if (auto b = match_always(f)) return {ObjectiveShape::safe, *b};
  throw UnsupportedObjective("synthesis handles F b and G b for state formulas b, not " + f.to_string());
}

Synthesis synthesize(const Model& m, AgentId a, const Formula& f) {
  const auto [shape, body] = fragment_of(f);
  Synthesis s;
  s.shape = shape;
  s.game = knowledge_game(m, a);
  const auto pred = lift_predicate(m, s.game, body);
  s.result = shape == ObjectiveShape::reach ? solve_reachability(s.game, pred) : solve_safety(s.game, pred);
  return s;
}

}  // namespace stratbound
