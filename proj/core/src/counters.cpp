#include "stratbound/counters.hpp"

#include <algorithm>
#include <cctype>

#include "stratbound/errors.hpp"

namespace stratbound {

bool Guard::eval(std::span<const std::uint32_t> counters) const {
  switch (kind) {
    case Kind::truth: return true;
    case Kind::positive: return counter < counters.size() && counters[counter] > 0;
    case Kind::all:
      return std::all_of(parts.begin(), parts.end(), [&](const Guard& g) { return g.eval(counters); });
    case Kind::any:
      return std::any_of(parts.begin(), parts.end(), [&](const Guard& g) { return g.eval(counters); });
  }
  return false;
}

std::uint32_t Guard::max_counter() const {
  std::uint32_t out = kind == Kind::positive ? counter + 1 : 0;
  for (const auto& g : parts) out = std::max(out, g.max_counter());
  return out;
}

std::string Guard::to_string() const {
  switch (kind) {
    case Kind::truth: return "true";
    case Kind::positive: return "c" + std::to_string(counter) + ">0";
    case Kind::all:
    case Kind::any: {
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += kind == Kind::all ? " & " : " | ";
        out += parts[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

class GuardParser {
 public:
  explicit GuardParser(std::string_view s) : s_(s) {}

  Guard parse() {
    Guard g = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return g;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 0, pos_ + 1); }

  Guard expr() {
    Guard g = term();
    while (eat('|')) g = Guard::either(std::move(g), term());
    return g;
  }
  Guard term() {
    Guard g = factor();
    while (eat('&')) g = Guard::both(std::move(g), factor());
    return g;
  }
  Guard factor() {
    skip();
    if (eat('(')) {
      Guard g = expr();
      if (!eat(')')) fail("expected ')'");
      return g;
    }
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return Guard::always();
    }
    if (pos_ < s_.size() && s_[pos_] == '!') fail("guards are positive: negation is not allowed");
    if (pos_ >= s_.size() || s_[pos_] != 'c') fail("expected a counter atom cN>0");
    ++pos_;
    const std::size_t begin = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == begin || pos_ - begin > 6) fail("expected a counter index");
    const auto c = static_cast<std::uint32_t>(std::stoul(std::string(s_.substr(begin, pos_ - begin))));
    if (!eat('>')) fail("expected '>0'");
    if (!eat('0')) fail("expected '>0'");
    return Guard::positive_counter(c);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::uint64_t power(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (r > (1ULL << 40U) / std::max<std::uint64_t>(base, 1)) throw InputError("counter expansion is too large");
    r *= base;
  }
  return r;
}

}  // namespace

Guard parse_guard(std::string_view text) { return GuardParser(text).parse(); }

void check_counter_model(const CounterModel& cm) {
  require_valid(cm.skeleton);
  const Model& m = cm.skeleton;
  if (cm.initial.size() != cm.counters) throw InputError("need one initial value per counter");
  if (cm.labels.size() != m.states.size()) throw InputError("counter labels must cover every state");
  for (StateId q = 0; q < m.states.size(); ++q) {
    if (cm.labels[q].size() != m.transitions[q].size()) {
      throw InputError("counter labels must cover every transition of " + m.states[q]);
    }
    for (const auto& l : cm.labels[q]) {
      if (l.guard.max_counter() > cm.counters) throw InputError("guard mentions an undeclared counter");
      std::vector<char> touched(cm.counters, 0);
      for (const auto& u : l.updates) {
        if (u.counter >= cm.counters) throw InputError("update of an undeclared counter");
        if (u.delta != 1 && u.delta != -1) throw InputError("updates are ++ or --");
        if (touched[u.counter]++) throw InputError("a transition updates a counter at most once");
      }
    }
  }
}

Model expand_counter_model(const CounterModel& cm, std::uint32_t n0, std::uint32_t k) {
  check_counter_model(cm);
  const Model& sk = cm.skeleton;
  const std::uint32_t n = cm.counters;
  if (n == 0) return sk;
  const std::uint32_t cap = n0 + k;
  const std::uint64_t radix = cap + 1ULL;
  const std::uint64_t per_state = power(radix, n);
  const std::uint64_t total = per_state * sk.states.size();
  if (total + 1 > (1ULL << 24U)) throw InputError("counter expansion is too large");
  const auto sink = static_cast<StateId>(total);
  if (find_proposition(sk, kExhaustedProp)) throw InputError("skeleton already defines 'exhausted'");

  auto counters_of = [&](std::uint64_t idx) {
    std::vector<std::uint32_t> c(n);
    for (std::uint32_t i = n; i-- > 0;) {
      c[i] = static_cast<std::uint32_t>(idx % radix);
      idx /= radix;
    }
    return c;
  };
  auto index_of = [&](StateId q, std::span<const std::uint32_t> c) {
    std::uint64_t idx = 0;
    for (auto v : c) idx = idx * radix + v;
    return static_cast<StateId>(q * per_state + idx);
  };

  Model m;
  m.agents = sk.agents;
  m.actions = sk.actions;
  m.propositions = sk.propositions;
  m.propositions.emplace_back(kExhaustedProp);
  for (StateId q = 0; q < sk.states.size(); ++q) {
    for (std::uint64_t c = 0; c < per_state; ++c) {
      std::string name = sk.states[q] + "@";
      const auto cv = counters_of(c);
      for (std::uint32_t i = 0; i < n; ++i) name += (i ? "." : "") + std::to_string(cv[i]);
      m.states.push_back(std::move(name));
    }
  }
  m.states.emplace_back(kExhaustedProp);

  std::vector<std::uint32_t> init(cm.initial);
  for (auto& v : init) v = std::min(v, cap);
  m.initial = index_of(sk.initial, init);

  m.valuation.assign(m.propositions.size(), {});
  for (PropId p = 0; p < sk.valuation.size(); ++p) {
    for (StateId q : sk.valuation[p]) {
      for (std::uint64_t c = 0; c < per_state; ++c) m.valuation[p].push_back(static_cast<StateId>(q * per_state + c));
    }
  }
  m.valuation.back() = {sink};

  m.repertoire.assign(m.agents.size(), std::vector<std::vector<ActionId>>(m.states.size()));
  for (AgentId a = 0; a < m.agents.size(); ++a) {
    for (StateId q = 0; q < sk.states.size(); ++q) {
      for (std::uint64_t c = 0; c < per_state; ++c) m.repertoire[a][q * per_state + c] = sk.repertoire[a][q];
    }
    m.repertoire[a][sink] = {0};
  }

  m.transitions.assign(m.states.size(), {});
  for (StateId q = 0; q < sk.states.size(); ++q) {
    for (std::uint64_t c = 0; c < per_state; ++c) {
      const auto cv = counters_of(c);
      auto& out = m.transitions[q * per_state + c];
      for (std::size_t i = 0; i < sk.transitions[q].size(); ++i) {
        const auto& t = sk.transitions[q][i];
        const auto& label = cm.labels[q][i];
        StateId target = sink;
        if (label.guard.eval(cv)) {
          auto next = cv;
          bool blocked = false;
          for (const auto& u : label.updates) {
            if (u.delta > 0) {
              next[u.counter] = std::min(next[u.counter] + 1, cap);
            } else if (next[u.counter] == 0) {
              blocked = true;
            } else {
              --next[u.counter];
            }
          }
          if (!blocked) target = index_of(t.target, next);
        }
        out.push_back(Transition{t.joint, target});
      }
    }
  }
  m.transitions[sink].push_back(Transition{JointAction(m.agents.size(), 0), sink});

  m.indist.assign(m.agents.size(), {});
  for (AgentId a = 0; a < m.agents.size(); ++a) {
    for (const auto& cls : sk.indist[a]) {
      for (std::uint64_t c = 0; c < per_state; ++c) {
        std::vector<StateId> members;
        for (StateId q : cls) members.push_back(static_cast<StateId>(q * per_state + c));
        m.indist[a].push_back(std::move(members));
      }
    }
    m.indist[a].push_back({sink});
  }
  normalize(m);
  return m;
}

EnergyVerdict solve_counter_game(const CounterModel& cm, std::uint32_t n0, std::uint32_t k, AgentId a,
                                 const Formula& f) {
  auto [shape, body] = fragment_of(f);
  if (cm.counters > 0) body = Formula::conj(body, Formula::neg(Formula::prop(kExhaustedProp)));
  const Formula goal = shape == ObjectiveShape::reach ? Formula::eventually(body) : Formula::always(body);
  const Model m = expand_counter_model(cm, n0, k);
  const auto s = synthesize(m, a, goal);
  EnergyVerdict v;
  v.winning = s.result.winning;
  v.cap = n0 + k;
  v.configurations = m.states.size() - (cm.counters > 0 ? 1 : 0);
  v.knowledge_nodes = s.game.size();
  return v;
}

EnergyVerdict energy_reduce_check(const CounterModel& cm, std::uint32_t n0, AgentId a, const Formula& f) {
  return solve_counter_game(cm, n0, 0, a, f);
}

}  // namespace stratbound
