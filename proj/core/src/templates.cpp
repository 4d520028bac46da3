#include "stratbound/templates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "stratbound/errors.hpp"

namespace stratbound {

Model gen_coffee(std::uint32_t n) {
  if (n < 2) throw InputError("coffee needs at least 2 cups");
  if (n > 2000) throw InputError("coffee supports at most 2000 cups");
  using boost::multiprecision::cpp_int;
  Model m;
  m.agents = {"Alice", "Bob"};
  m.actions = {"request", "skip"};
  m.propositions = {"sugar_Alice", "sugar_Bob"};
  m.states.resize(coffee::state_count(n));
  for (std::uint32_t j = 0; j <= n; ++j) {
    for (std::uint32_t i = 0; i <= j; ++i) m.states[coffee::state(i, j)] = std::to_string(i) + "/" + std::to_string(j);
  }
  m.initial = coffee::state(0, 0);

  // F(0..n)
  std::vector<cpp_int> fib(n + 1);
  fib[0] = 0;
  fib[1] = 1;
  for (std::uint32_t i = 2; i <= n; ++i) fib[i] = fib[i - 1] + fib[i - 2];
  m.valuation.assign(2, {});
  for (std::uint32_t i = 0; i <= n; ++i) {
    const StateId q = coffee::state(i, n);
    if (boost::multiprecision::bit_test(fib[i], n / 2)) m.valuation[coffee::sugar_alice].push_back(q);
    if (boost::multiprecision::bit_test(fib[i], 0)) m.valuation[coffee::sugar_bob].push_back(q);
  }

  m.repertoire.assign(2, std::vector<std::vector<ActionId>>(m.states.size(), {coffee::skip}));
  for (std::uint32_t j = 0; j < n; ++j) {
    const AgentId active = j < coffee::alice_turns(n) ? coffee::alice : coffee::bob;
    for (std::uint32_t i = 0; i <= j; ++i) m.repertoire[active][coffee::state(i, j)] = {coffee::request, coffee::skip};
  }
  m.indist = identity_partition(2, m.states.size());

  std::vector<std::uint32_t> cups(m.states.size()), round(m.states.size());
  for (std::uint32_t j = 0; j <= n; ++j) {
    for (std::uint32_t i = 0; i <= j; ++i) {
      cups[coffee::state(i, j)] = i;
      round[coffee::state(i, j)] = j;
    }
  }
  fill_transitions(m, [&](StateId q, const JointAction& joint) -> StateId {
    const std::uint32_t i = cups[q], j = round[q];
    if (j == n) return q;
    const bool requested = joint[coffee::alice] == coffee::request || joint[coffee::bob] == coffee::request;
    return coffee::state(requested ? i + 1 : i, j + 1);
  });
  return m;
}

Model gen_satgame(const Cnf& cnf) {
  const std::uint32_t k = cnf.variables();
  const auto n = static_cast<std::uint32_t>(cnf.clauses().size());
  if (k == 0) throw InputError("the formula needs at least one variable");
  if (n == 0) throw InputError("the formula needs at least one clause");
  using namespace satgame;

  // marker[i][j]: +1, -1 or 0 for clause i+1, variable j+1
  std::vector<std::vector<int>> marker(n, std::vector<int>(k, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (int lit : cnf.clauses()[i]) marker[i][static_cast<std::size_t>(std::abs(lit) - 1)] = lit > 0 ? 1 : -1;
  }

  Model m;
  m.agents = {"v", "r"};
  m.actions = {"top", "bot", "idle"};
  for (std::uint32_t i = 1; i <= n; ++i) m.actions.push_back("C" + std::to_string(i));
  m.propositions = {"win"};
  m.states.resize(n * k + 3);
  m.states[0] = "q0";
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = 1; j <= k; ++j) m.states[literal(k, i, j)] = "q" + std::to_string(i) + "_" + std::to_string(j);
  }
  const StateId q_top = win_state(k, n);
  const StateId q_bot = lose_state(k, n);
  m.states[q_top] = "q_top";
  m.states[q_bot] = "q_bot";
  m.initial = 0;
  m.valuation = {{q_top}};

  m.repertoire.assign(2, std::vector<std::vector<ActionId>>(m.states.size(), {idle}));
  m.repertoire[refuter][0].clear();
  for (std::uint32_t i = 1; i <= n; ++i) m.repertoire[refuter][0].push_back(clause_action(i));
  for (StateId q = 1; q < q_top; ++q) m.repertoire[verifier][q] = {top, bot};

  m.indist.assign(2, {});
  m.indist[verifier].push_back({0});
  for (std::uint32_t j = 1; j <= k; ++j) {
    std::vector<StateId> cls;
    for (std::uint32_t i = 1; i <= n; ++i) cls.push_back(literal(k, i, j));
    m.indist[verifier].push_back(std::move(cls));
  }
  m.indist[verifier].push_back({q_top});
  m.indist[verifier].push_back({q_bot});
  m.indist[refuter] = identity_partition(1, m.states.size())[0];
  normalize(m);

  fill_transitions(m, [&](StateId q, const JointAction& joint) -> StateId {
    if (q == 0) return literal(k, joint[refuter] - clause_action(1) + 1, 1);
    if (q == q_top || q == q_bot) return q;
    const std::uint32_t i = (q - 1) / k + 1;
    const std::uint32_t j = (q - 1) % k + 1;
    const int mk = marker[i - 1][j - 1];
    const bool satisfied = (mk > 0 && joint[verifier] == top) || (mk < 0 && joint[verifier] == bot);
    if (satisfied) return q_top;
    return j == k ? q_bot : literal(k, i, j + 1);
  });
  return m;
}

Cnf satchain_cnf(std::uint32_t k) {
  std::vector<std::vector<int>> clauses;
  for (std::uint32_t j = 1; j <= k; ++j) clauses.push_back({static_cast<int>(j)});
  return Cnf(k, std::move(clauses));
}

Model gen_tmrun(const TapeMachine& tm, std::uint32_t horizon) {
  if (horizon == 0) throw InputError("horizon must be at least 1");
  Model m;
  m.agents = {"runner"};
  m.actions = {"idle"};
  m.propositions = {"accepting"};
  m.valuation.assign(1, {});
  TapeMachine::Simulation sim(tm, "", "");
  for (std::uint32_t t = 0; t < horizon; ++t) {
    const auto q = static_cast<StateId>(m.states.size());
    m.states.push_back("t" + std::to_string(t));
    if (tm.is_accepting(sim.state())) m.valuation[0].push_back(q);
    if (!sim.step()) break;
  }
  m.initial = 0;
  m.repertoire.assign(1, std::vector<std::vector<ActionId>>(m.states.size(), {0}));
  m.indist = identity_partition(1, m.states.size());
  const auto last = static_cast<StateId>(m.states.size() - 1);
  fill_transitions(m, [&](StateId q, const JointAction&) -> StateId { return q == last ? q : q + 1; });
  return m;
}

const TapeMachine& halting_machine() {
  static const TapeMachine tm = TapeMachine::parse(
      "# writes three 1s on its work tape, then accepts\n"
      "work 1\n"
      "start s0\n"
      "accept acc\n"
      "s0 *** -> s1 *1 SSSR\n"
      "s1 *** -> s2 *1 SSSR\n"
      "s2 *** -> acc *1 SSSS\n");
  return tm;
}

const TapeMachine& looping_machine() {
  static const TapeMachine tm = TapeMachine::parse(
      "# flips one work cell forever\n"
      "work 1\n"
      "start a\n"
      "accept never\n"
      "a *** -> b *1 SSSS\n"
      "b *** -> a *0 SSSS\n");
  return tm;
}

Model Template::instance(std::uint32_t param) const {
  if (param < min_param || param > max_param) {
    throw InputError("template '" + name + "' takes parameters in [" + std::to_string(min_param) + ", " +
                     std::to_string(max_param) + "], got " + std::to_string(param));
  }
  return generate(param);
}

const std::vector<Template>& template_registry() {
  static const std::vector<Template> registry = {
      {"coffee", "Fibonacci coffee machine with n cups; Alice orders first, Bob last", 2, 2000,
       {"Alice", "Bob"}, {"sugar_Alice", "sugar_Bob"}, [](std::uint32_t n) { return gen_coffee(n); }},
      {"satchain", "SAT game of the unit-clause chain (x1) & ... & (xk)", 1, 30, {"v", "r"}, {"win"},
       [](std::uint32_t k) { return gen_satgame(satchain_cnf(k)); }},
      {"tmrun_halt", "run prefix of the shipped accepting machine, cut at horizon h", 1, 100000, {"runner"},
       {"accepting"}, [](std::uint32_t h) { return gen_tmrun(halting_machine(), h); }},
      {"tmrun_loop", "run prefix of the shipped looping machine, cut at horizon h", 1, 100000, {"runner"},
       {"accepting"}, [](std::uint32_t h) { return gen_tmrun(looping_machine(), h); }},
  };
  return registry;
}

const Template& find_template(std::string_view name) {
  for (const auto& t : template_registry()) {
    if (t.name == name) return t;
  }
  std::string known;
  for (const auto& t : template_registry()) known += (known.empty() ? "" : ", ") + t.name;
  throw InputError("unknown template '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace stratbound
