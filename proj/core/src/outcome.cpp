#include "stratbound/outcome.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace stratbound {

const char* to_string(LeafKind k) {
  switch (k) {
    case LeafKind::internal: return "internal";
    case LeafKind::frontier: return "frontier";
    case LeafKind::absorbing: return "absorbing";
    case LeafKind::error: return "error";
  }
  return "?";
}

const char* to_string(Enforcement e) {
  switch (e) {
    case Enforcement::enforced: return "enforced";
    case Enforcement::violated: return "violated";
    case Enforcement::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::size_t> OutcomeTree::leaves() const {
  std::vector<std::size_t> out;
  // depth-first, children in branch order
  std::vector<std::size_t> todo{0};
  while (!todo.empty()) {
    const std::size_t n = todo.back();
    todo.pop_back();
    if (nodes[n].children.empty()) {
      out.push_back(n);
      continue;
    }
    for (auto it = nodes[n].children.rbegin(); it != nodes[n].children.rend(); ++it) todo.push_back(*it);
  }
  return out;
}

std::vector<StateId> OutcomeTree::path_to(std::size_t node) const {
  std::vector<StateId> out;
  for (std::optional<std::size_t> n = node; n; n = nodes[*n].parent) out.push_back(nodes[*n].state);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<StateId>> OutcomeTree::paths() const {
  std::vector<std::vector<StateId>> out;
  for (std::size_t leaf : leaves()) out.push_back(path_to(leaf));
  return out;
}

std::vector<LassoPath> OutcomeTree::lassos() const {
  std::vector<LassoPath> out;
  for (std::size_t leaf : leaves()) {
    if (nodes[leaf].leaf != LeafKind::absorbing) continue;
    auto p = path_to(leaf);
    LassoPath l;
    l.loop = {p.back()};
    p.pop_back();
    l.stem = std::move(p);
    out.push_back(std::move(l));
  }
  return out;
}

namespace {

std::vector<const ComputationalStrategy*> order_strategies(const Model& m, const Coalition& coalition,
                                                           const std::vector<ComputationalStrategy>& strategies) {
  coalition.check_against(m);
  std::vector<const ComputationalStrategy*> ordered(coalition.size(), nullptr);
  if (strategies.size() != coalition.size()) throw InputError("need exactly one strategy per coalition member");
  for (const auto& s : strategies) {
    const auto agents = coalition.agents();
    auto it = std::find(agents.begin(), agents.end(), s.agent());
    if (it == agents.end()) throw InputError("strategy for agent outside the coalition");
    auto& slot = ordered[static_cast<std::size_t>(it - agents.begin())];
    if (slot) throw InputError("two strategies for the same agent");
    slot = &s;
  }
  return ordered;
}

// Full joint action from coalition and adversary parts.
JointAction merge_joint(std::size_t agents, std::span<const AgentId> coalition, const JointAction& mine,
                        std::span<const AgentId> others, const JointAction& theirs) {
  JointAction joint(agents, 0);
  for (std::size_t i = 0; i < coalition.size(); ++i) joint[coalition[i]] = mine[i];
  for (std::size_t i = 0; i < others.size(); ++i) joint[others[i]] = theirs[i];
  return joint;
}

std::vector<JointAction> adversary_choices(const Model& m, const std::vector<AgentId>& others, StateId q) {
  if (others.empty()) return {JointAction{}};
  return joint_repertoire(m, Coalition(others), q);
}

}  // namespace

OutcomeTree simulate_outcomes(const Model& m, const Coalition& coalition,
                              const std::vector<ComputationalStrategy>& strategies, std::size_t depth,
                              std::uint64_t budget) {
  if (depth == 0) throw InputError("depth must be at least 1");
  const auto ordered = order_strategies(m, coalition, strategies);
  const auto others = coalition.complement(m);
  const auto canonical = canonical_table(m);

  OutcomeTree tree;
  tree.coalition = coalition;
  tree.max_depth = depth;
  tree.nodes.push_back(OutcomeNode{m.initial, 1, std::nullopt, {}, {}, {}, LeafKind::internal, {}, 0});

  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const StateId q = tree.nodes[id].state;
    if (is_absorbing(m, q)) {
      tree.nodes[id].leaf = LeafKind::absorbing;
      continue;
    }
    if (tree.nodes[id].depth >= depth) {
      tree.nodes[id].leaf = LeafKind::frontier;
      continue;
    }
    const auto path = tree.path_to(id);
    JointAction mine;
    std::uint64_t steps = 0;
    try {
      for (const auto* s : ordered) {
        const auto obs = observe(m, canonical, s->agent(), path);
        const auto r = s->decide(obs, budget);
        mine.push_back(r.action);
        steps = std::max(steps, r.steps);
      }
    } catch (const std::exception& e) {
      tree.nodes[id].leaf = LeafKind::error;
      tree.nodes[id].error = e.what();
      continue;
    }
    tree.nodes[id].coalition_actions = mine;
    tree.nodes[id].steps = steps;

    std::map<StateId, std::size_t> child_of;
    for (const auto& theirs : adversary_choices(m, others, q)) {
      const auto joint = merge_joint(m.agents.size(), coalition.agents(), mine, others, theirs);
      const StateId next = successor(m, q, joint);
      auto [it, inserted] = child_of.emplace(next, tree.nodes.size());
      if (inserted) {
        OutcomeNode child;
        child.state = next;
        child.depth = tree.nodes[id].depth + 1;
        child.parent = id;
        tree.nodes.push_back(std::move(child));
        tree.nodes[id].children.push_back(it->second);
        tree.nodes[id].child_choices.emplace_back();
        queue.push_back(it->second);
      }
      const auto pos = std::find(tree.nodes[id].children.begin(), tree.nodes[id].children.end(), it->second) -
                       tree.nodes[id].children.begin();
      tree.nodes[id].child_choices[static_cast<std::size_t>(pos)].push_back(theirs);
    }
  }
  return tree;
}

EnforcementReport enforce_bounded(const Model& m, const Coalition& coalition,
                                  const std::vector<ComputationalStrategy>& strategies, const Formula& f,
                                  std::size_t depth, std::uint64_t budget) {
  const auto tree = simulate_outcomes(m, coalition, strategies, depth, budget);
  EnforcementReport rep;
  rep.depth = depth;
  bool open = false;
  for (std::size_t leaf : tree.leaves()) {
    ++rep.paths;
    const auto& node = tree.nodes[leaf];
    auto path = tree.path_to(leaf);
    if (node.leaf == LeafKind::error) {
      ++rep.open_paths;
      open = true;
      rep.errors.push_back(node.error);
      continue;
    }
    if (node.leaf == LeafKind::absorbing) {
      LassoPath l;
      l.loop = {path.back()};
      path.pop_back();
      l.stem = path;
      if (!eval_lasso(m, l, f)) {
        rep.verdict = Enforcement::violated;
        rep.lasso = l;
        rep.certificate = "counterexample lasso closed at an absorbing state";
        return rep;
      }
      continue;
    }
    const auto v = eval_bounded(m, path, f);
    if (v == Verdict3::fails) {
      rep.verdict = Enforcement::violated;
      rep.prefix = path;
      rep.certificate = "every extension of the counterexample prefix violates the objective";
      return rep;
    }
    if (v == Verdict3::unknown) {
      ++rep.open_paths;
      open = true;
    }
  }
  if (open) {
    rep.verdict = Enforcement::inconclusive;
    std::ostringstream os;
    os << rep.open_paths << " of " << rep.paths << " paths undecided at depth " << depth;
    rep.certificate = os.str();
  } else {
    rep.verdict = Enforcement::enforced;
    rep.certificate = "all " + std::to_string(rep.paths) + " outcome paths decided at depth " + std::to_string(depth);
  }
  return rep;
}

// ------------------------------------------------------ finite memory

FiniteMemoryStrategy FiniteMemoryStrategy::memoryless(AgentId agent, std::vector<ActionId> act) {
  FiniteMemoryStrategy s;
  s.agent = agent;
  s.update = {std::vector<std::uint32_t>(act.size(), 0)};
  s.act = {std::move(act)};
  return s;
}

void FiniteMemoryStrategy::check(const Model& m) const {
  if (agent >= m.agents.size()) throw InputError("finite-memory strategy for unknown agent");
  if (act.empty() || update.size() != act.size() || initial >= act.size()) {
    throw InputError("finite-memory strategy tables have inconsistent sizes");
  }
  const auto canonical = canonical_table(m);
  for (std::size_t mem = 0; mem < act.size(); ++mem) {
    if (act[mem].size() != m.states.size() || update[mem].size() != m.states.size()) {
      throw InputError("finite-memory strategy tables must have one entry per state");
    }
    for (StateId q = 0; q < m.states.size(); ++q) {
      const StateId c = canonical[agent][q];
      if (act[mem][q] != act[mem][c] || update[mem][q] != update[mem][c]) {
        throw InputError("finite-memory strategy distinguishes indistinguishable states " + m.states[c] + " and " +
                         m.states[q]);
      }
      if (update[mem][q] >= act.size()) throw InputError("memory update out of range");
      const auto& rep = m.repertoire[agent][q];
      if (!std::binary_search(rep.begin(), rep.end(), act[mem][q])) {
        throw InputError("finite-memory strategy plays an unavailable action at " + m.states[q]);
      }
    }
  }
}

ActionId FiniteMemoryStrategy::decide(const Model& m, std::span<const StateId> history) const {
  if (history.empty()) return m.repertoire[agent][m.initial].front();
  std::uint32_t mem = initial;
  for (std::size_t i = 0; i + 1 < history.size(); ++i) mem = update[mem][history[i]];
  return act[mem][history.back()];
}

StrategyProgram compile_fms(const Model& m, const FiniteMemoryStrategy& fms) {
  fms.check(m);
  const std::size_t S = m.states.size();
  std::ostringstream os;
  os << "; finite-memory strategy for agent " << fms.agent << ", " << fms.memory_size() << " memory states\n";
  os << ".data next";
  for (const auto& row : fms.update) {
    for (auto v : row) os << ' ' << v;
  }
  os << "\n.data act";
  for (const auto& row : fms.act) {
    for (auto v : row) os << ' ' << v;
  }
  os << "\n";
  os << "  hlen n\n"
        "  jeq n 0 empty\n"
        "  set mem " << fms.initial << "\n"
        "  set i 0\n"
        "  sub last n 1\n"
        "loop:\n"
        "  jge i last done\n"
        "  hobs o i\n"
        "  mul k mem " << S << "\n"
        "  add k k o\n"
        "  ld mem next k\n"
        "  add i i 1\n"
        "  jmp loop\n"
        "done:\n"
        "  hobs o i\n"
        "  mul k mem " << S << "\n"
        "  add k k o\n"
        "  ld x act k\n"
        "  emit x\n"
        "empty:\n"
        "  init q\n"
        "  rep x " << fms.agent << " q 0\n"
        "  emit x\n";
  return StrategyProgram::parse(os.str());
}

ProductSystem build_product(const Model& m, const Coalition& coalition, const std::vector<FiniteMemoryStrategy>& fms) {
  coalition.check_against(m);
  if (fms.size() != coalition.size()) throw InputError("need exactly one finite-memory strategy per coalition member");
  std::vector<const FiniteMemoryStrategy*> ordered(coalition.size(), nullptr);
  for (const auto& s : fms) {
    s.check(m);
    const auto agents = coalition.agents();
    auto it = std::find(agents.begin(), agents.end(), s.agent);
    if (it == agents.end()) throw InputError("finite-memory strategy for agent outside the coalition");
    auto& slot = ordered[static_cast<std::size_t>(it - agents.begin())];
    if (slot) throw InputError("two finite-memory strategies for the same agent");
    slot = &s;
  }
  const auto canonical = canonical_table(m);
  const auto others = coalition.complement(m);

  ProductSystem p;
  p.model = std::make_shared<Model>(m);
  p.coalition = coalition;
  std::map<std::pair<StateId, std::vector<std::uint32_t>>, std::size_t> index;
  auto intern = [&](StateId q, std::vector<std::uint32_t> mem) {
    auto [it, inserted] = index.emplace(std::make_pair(q, mem), p.state.size());
    if (inserted) {
      p.state.push_back(q);
      p.memory.push_back(std::move(mem));
      p.successors.emplace_back();
    }
    return std::make_pair(it->second, inserted);
  };

  std::vector<std::uint32_t> init;
  for (const auto* s : ordered) init.push_back(s->initial);
  p.initial = intern(m.initial, init).first;
  std::deque<std::size_t> queue{p.initial};
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const StateId q = p.state[id];
    JointAction mine;
    std::vector<std::uint32_t> next_mem;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const auto* s = ordered[i];
      const StateId o = canonical[s->agent][q];
      mine.push_back(s->act[p.memory[id][i]][o]);
      next_mem.push_back(s->update[p.memory[id][i]][o]);
    }
    std::vector<std::size_t> succ;
    for (const auto& theirs : adversary_choices(m, others, q)) {
      const auto joint = merge_joint(m.agents.size(), coalition.agents(), mine, others, theirs);
      auto [target, inserted] = intern(successor(m, q, joint), next_mem);
      if (inserted) queue.push_back(target);
      succ.push_back(target);
    }
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    p.successors[id] = std::move(succ);
  }
  return p;
}

namespace {

// Closes a product path into a lasso by following first successors until a
// state repeats, then projects to model states.
LassoPath close_lasso(const ProductSystem& p, std::vector<std::size_t> seq) {
  std::map<std::size_t, std::size_t> seen;
  for (std::size_t i = 0; i < seq.size(); ++i) seen.emplace(seq[i], i);
  for (;;) {
    const std::size_t next = p.successors[seq.back()].front();
    if (auto it = seen.find(next); it != seen.end()) {
      LassoPath l;
      for (std::size_t i = 0; i < it->second; ++i) l.stem.push_back(p.state[seq[i]]);
      for (std::size_t i = it->second; i < seq.size(); ++i) l.loop.push_back(p.state[seq[i]]);
      return l;
    }
    seen.emplace(next, seq.size());
    seq.push_back(next);
  }
}

LassoPath project(const ProductSystem& p, const std::vector<std::size_t>& stem, const std::vector<std::size_t>& loop) {
  LassoPath l;
  for (auto s : stem) l.stem.push_back(p.state[s]);
  for (auto s : loop) l.loop.push_back(p.state[s]);
  return l;
}

}  // namespace

EnforcementReport enforce_exact(const ProductSystem& p, const Formula& f) {
  const Model& m = *p.model;
  EnforcementReport rep;
  rep.paths = 0;
  auto sat = [&](const Formula& beta, std::size_t s) { return eval_state(m, p.state[s], beta); };

  if (auto beta = match_always(f)) {
    // breadth-first search for a reachable violation
    std::vector<std::optional<std::size_t>> parent(p.size());
    std::vector<char> seen(p.size(), 0);
    std::deque<std::size_t> queue{p.initial};
    seen[p.initial] = 1;
    while (!queue.empty()) {
      const std::size_t s = queue.front();
      queue.pop_front();
      ++rep.paths;
      if (!sat(*beta, s)) {
        std::vector<std::size_t> seq;
        for (std::optional<std::size_t> x = s; x; x = parent[*x]) seq.push_back(*x);
        std::reverse(seq.begin(), seq.end());
        rep.verdict = Enforcement::violated;
        rep.lasso = close_lasso(p, seq);
        rep.certificate = "reachable state " + m.states[p.state[s]] + " violates the invariant";
        return rep;
      }
      for (std::size_t t : p.successors[s]) {
        if (!seen[t]) {
          seen[t] = 1;
          parent[t] = s;
          queue.push_back(t);
        }
      }
    }
    rep.verdict = Enforcement::enforced;
    rep.certificate = "all " + std::to_string(rep.paths) + " reachable product states satisfy the invariant";
    return rep;
  }

  if (auto beta = match_eventually(f)) {
    // a cycle among reachable beta-avoiding states refutes; none means every play meets beta
    if (sat(*beta, p.initial)) {
      rep.verdict = Enforcement::enforced;
      rep.certificate = "the initial state satisfies the goal";
      return rep;
    }
    enum : char { white, grey, black };
    std::vector<char> colour(p.size(), white);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{p.initial, 0}};
    colour[p.initial] = grey;
    while (!stack.empty()) {
      auto& [s, next] = stack.back();
      if (next == p.successors[s].size()) {
        colour[s] = black;
        ++rep.paths;
        stack.pop_back();
        continue;
      }
      const std::size_t t = p.successors[s][next++];
      if (sat(*beta, t)) continue;
      if (colour[t] == grey) {
        std::vector<std::size_t> stem, loop;
        bool in_loop = false;
        for (const auto& [x, _] : stack) {
          if (x == t) in_loop = true;
          (in_loop ? loop : stem).push_back(x);
        }
        rep.verdict = Enforcement::violated;
        rep.lasso = project(p, stem, loop);
        rep.certificate = "reachable cycle avoids the goal";
        return rep;
      }
      if (colour[t] == white) {
        colour[t] = grey;
        stack.emplace_back(t, 0);
      }
    }
    rep.verdict = Enforcement::enforced;
    rep.certificate = "no reachable cycle avoids the goal (" + std::to_string(rep.paths) + " goal-free states)";
    return rep;
  }

  if (is_state_formula(f)) {
    ++rep.paths;
    if (sat(f, p.initial)) {
      rep.verdict = Enforcement::enforced;
      rep.certificate = "the initial state satisfies the formula";
    } else {
      rep.verdict = Enforcement::violated;
      rep.lasso = close_lasso(p, {p.initial});
      rep.certificate = "the initial state violates the formula";
    }
    return rep;
  }
  throw UnsupportedObjective("exact checking handles G b, F b and state formulas b only; use bounded checking for " +
                             f.to_string());
}

}  // namespace stratbound
