// Acceptance harness: one [PASS]/[FAIL] line per criterion.
// Time limits are wall-clock on the build machine; a criterion passes only
// when the result is right and the limit holds.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "game_oracles.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "stratbound/counters.hpp"
#include "stratbound/encoding.hpp"
#include "stratbound/knowledge.hpp"
#include "stratbound/model_text.hpp"
#include "stratbound/profiler.hpp"
#include "stratbound/report.hpp"
#include "stratbound/strategies.hpp"
#include "stratbound/templates.hpp"

#ifdef STRATBOUND_HAVE_CLI
#include "cli.hpp"
#endif

using namespace stratbound;

namespace {

// pinned tolerances
constexpr double kLimitC1 = 1.0;
constexpr double kLimitC2 = 1.0;
constexpr double kLimitC3 = 30.0;
constexpr double kLimitC4 = 120.0;
constexpr double kLimitC5 = 300.0;
constexpr double kLimitC6 = 60.0;
constexpr double kLimitC7 = 120.0;
constexpr double kLimitC8 = 300.0;
constexpr double kLimitC9 = 10.0;
constexpr double kMinR2 = 0.98;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= limit;
  const bool pass = r.ok && in_time;
  failures += !pass;
  std::printf("[%s] C%d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, title, r.detail.c_str(), secs,
              limit, in_time ? "" : ", over time");
  std::fflush(stdout);
}

std::vector<ComputationalStrategy> one(const char* name, const Model& m, AgentId a) {
  return {ComputationalStrategy(builtin_machine(name), m, a)};
}

GeneralStrategy solo(AgentId a, const char* name) { return GeneralStrategy{{{a, builtin_machine(name)}}}; }

std::vector<std::uint32_t> range(std::uint32_t lo, std::uint32_t hi, std::uint32_t step = 1) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / n, vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
  return vy == 0 ? 1.0 : cov * cov / (vx * vy);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---- C1

Outcome c1() {
  const std::string golden = slurp(std::string(STRATBOUND_TEST_DATA) + "/coffee3.model");
  if (golden.empty()) return {false, "golden file missing"};
#ifdef STRATBOUND_HAVE_CLI
  std::ostringstream out, err;
  if (cli::run_command({"generate", "--template", "coffee", "--param", "3"}, out, err) != 0) {
    return {false, "generate failed: " + err.str()};
  }
  const std::string text = out.str();
#else
  const std::string text = format_model(gen_coffee(3));
#endif
  if (text != golden) return {false, "output differs from the golden file"};
  const Model m = parse_model(text);
  // edges as (from, to) pairs, derived by hand from the turn structure
  const std::set<std::pair<std::string, std::string>> by_hand{
      {"0/0", "0/1"}, {"0/0", "1/1"}, {"0/1", "0/2"}, {"0/1", "1/2"}, {"1/1", "1/2"}, {"1/1", "2/2"},
      {"0/2", "0/3"}, {"0/2", "1/3"}, {"1/2", "1/3"}, {"1/2", "2/3"}, {"2/2", "2/3"}, {"2/2", "3/3"},
      {"0/3", "0/3"}, {"1/3", "1/3"}, {"2/3", "2/3"}, {"3/3", "3/3"}};
  std::set<std::pair<std::string, std::string>> edges;
  for (StateId q = 0; q < m.states.size(); ++q) {
    for (const auto& t : m.transitions[q]) edges.insert({m.states[q], m.states[t.target]});
  }
  auto names = [&](PropId p) {
    std::set<std::string> s;
    for (StateId q : m.valuation[p]) s.insert(m.states[q]);
    return s;
  };
  const bool ok = m.states.size() == 10 && names(coffee::sugar_bob) == std::set<std::string>{"1/3", "2/3"} &&
                  names(coffee::sugar_alice) == std::set<std::string>{"3/3"} && edges == by_hand;
  return {ok, ok ? "golden match, 10 states, 16 edges" : "structure differs from the hand-derived edge set"};
}

// ---- C2

Outcome c2() {
  const Model m = gen_coffee(3);
  const auto tree = simulate_outcomes(m, Coalition({coffee::bob}), one("bob_fib_naive", m, coffee::bob),
                                      default_depth(m), kDefaultBudget);
  auto at = [&](const char* s) { return *find_state(m, s); };
  const std::vector<LassoPath> expected{{{at("0/0"), at("0/1"), at("0/2")}, {at("1/3")}},
                                        {{at("0/0"), at("1/1"), at("1/2")}, {at("1/3")}}};
  const auto lassos = tree.lassos();
  std::string got;
  for (const auto& l : lassos) got += (got.empty() ? "" : " ; ") + format_lasso(m, l);
  bool same = lassos.size() == expected.size();
  for (const auto& l : expected) same = same && std::find(lassos.begin(), lassos.end(), l) != lassos.end();
  return {same, std::to_string(lassos.size()) + " lassos, expected 2: " + got};
}

// ---- C3

Outcome c3() {
  const Formula f = parse_formula("F sugar_Bob");
  int agree = 0, total = 0;
  std::string bad;
  for (const char* name : {"bob_fib_naive", "bob_fib_memo", "bob_fib_matrix"}) {
    for (std::uint32_t n = 2; n <= 12; ++n) {
      const Model m = gen_coffee(n);
      bool oracle_ok = true;
      for (unsigned c : oracle::coffee_final_counts_bob_policy(n)) oracle_ok = oracle_ok && oracle::fib_bit(c, 0) == 1;
      const auto rep = enforce_bounded(m, Coalition({coffee::bob}), one(name, m, coffee::bob), f, n + 2, kDefaultBudget);
      const bool match = rep.verdict == (oracle_ok ? Enforcement::enforced : Enforcement::violated) && oracle_ok;
      agree += match;
      ++total;
      if (!match && bad.empty()) bad = std::string(" first mismatch ") + name + " n=" + std::to_string(n);
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " enforced, oracle agrees" + bad};
}

// ---- C4

// Every normalized clause over `vars` variables: each variable absent, positive or negative, not all absent.
std::vector<std::vector<int>> all_clauses(unsigned vars) {
  std::vector<std::vector<int>> out;
  unsigned total = 1;
  for (unsigned i = 0; i < vars; ++i) total *= 3;
  for (unsigned code = 1; code < total; ++code) {
    std::vector<int> c;
    unsigned x = code;
    for (unsigned v = 1; v <= vars; ++v, x /= 3) {
      if (x % 3 == 1) c.push_back(static_cast<int>(v));
      if (x % 3 == 2) c.push_back(-static_cast<int>(v));
    }
    out.push_back(c);
  }
  return out;
}

Outcome c4() {
  const Formula f = parse_formula("F win");
  std::size_t total = 0, agree = 0, sat = 0;
  for (unsigned vars = 1; vars <= 3; ++vars) {
    const auto clauses = all_clauses(vars);
    const std::size_t c = clauses.size();
    auto check = [&](std::vector<std::vector<int>> cs) {
      const bool expected = oracle::satisfiable(vars, cs);
      const Model m = gen_satgame(Cnf(vars, cs));
      agree += synthesize(m, satgame::verifier, f).result.winning == expected;
      sat += expected;
      ++total;
    };
    for (std::size_t a = 0; a < c; ++a) {
      check({clauses[a]});
      for (std::size_t b = a + 1; b < c; ++b) {
        check({clauses[a], clauses[b]});
        for (std::size_t d = b + 1; d < c; ++d) check({clauses[a], clauses[b], clauses[d]});
      }
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " CNFs agree (" + std::to_string(sat) +
                              " satisfiable)"};
}

// ---- C5

Outcome c5() {
  SamplerConfig sampler;
  sampler.kind = SamplerKind::all_paths;
  sampler.cap = 256;
  const Template& coffee = find_template("coffee");
  const auto naive = classify_growth(
      profile_strategy(coffee, solo(coffee::bob, "bob_fib_naive"), range(4, 22), sampler, kDefaultBudget));
  const auto memo = classify_growth(
      profile_strategy(coffee, solo(coffee::bob, "bob_fib_memo"), range(4, 200, 4), sampler, kDefaultBudget));
  const bool naive_ok = naive.bound.cls == GrowthClass::exponential && naive.r2 >= kMinR2;
  const bool memo_ok = memo.bound.to_string() == "polynomial(1)" && memo.r2 >= kMinR2;

  // compiled knowledge strategies on satisfiable CNFs, replayed along a real play
  const Formula f = parse_formula("F win");
  double worst = 1;
  std::size_t programs = 0;
  gen::Rng rng(505);
  while (programs < 12) {
    const Cnf cnf = gen::random_cnf(rng, 4, 4);
    if (!cnf.satisfiable()) continue;
    const Model m = gen_satgame(cnf);
    const auto s = synthesize(m, satgame::verifier, f);
    const ComputationalStrategy cs(std::make_shared<const Machine>(compile_knowledge_strategy(m, s.game, s.result)), m,
                                   satgame::verifier);
    const auto canonical = canonical_table(m);
    const ActionId clause = satgame::clause_action(1 + static_cast<std::uint32_t>(gen::below(rng, cnf.clauses().size())));
    std::vector<StateId> play{m.initial};
    std::vector<double> len, steps;
    for (std::size_t n = 1; n <= 40; ++n) {
      const auto obs = observe(m, canonical, satgame::verifier, play);
      const auto r = cs.decide(obs, kDefaultBudget);
      len.push_back(static_cast<double>(n));
      steps.push_back(static_cast<double>(r.steps));
      JointAction joint(2);
      joint[satgame::verifier] = r.action;
      joint[satgame::refuter] = play.back() == m.initial ? clause : satgame::idle;
      play.push_back(successor(m, play.back(), joint));
    }
    worst = std::min(worst, steps.back() > steps.front() ? linear_r2(len, steps) : 0.0);
    ++programs;
  }
  const bool compiled_ok = worst >= kMinR2;
  char buf[256];
  std::snprintf(buf, sizeof buf, "naive %s R2=%.4f; memo %s R2=%.4f; compiled linear R2>=%.4f over %zu programs",
                naive.bound.to_string().c_str(), naive.r2, memo.bound.to_string().c_str(), memo.r2, worst, programs);
  return {naive_ok && memo_ok && compiled_ok, buf};
}

// ---- C6

Outcome c6() {
  struct Case {
    const char* tpl;
    std::vector<std::uint32_t> params;
    GeneralStrategy gs;
    const char* formula;
    const char* bound;
  };
  const std::vector<Case> cases{
      {"coffee", range(2, 12), solo(coffee::bob, "bob_fib_memo"), "F sugar_Bob", "poly(1)"},
      {"coffee", range(2, 12), solo(coffee::bob, "bob_fib_matrix"), "F sugar_Bob", "poly(2)"},
      {"coffee", range(2, 12), solo(coffee::alice, "alice_skip"), "G !sugar_Alice", "constant"},
      {"coffee", range(2, 12), solo(coffee::alice, "alice_skip_vm"), "G !sugar_Alice", "constant"},
      {"satchain", range(1, 7), solo(satgame::verifier, "sat_bruteforce"), "F win", "exp"},
      {"tmrun_loop", {8, 16, 32, 64, 128, 256}, solo(0, "idle"), "G !accepting", "constant"},
  };
  std::size_t supported = 0, kept = 0;
  std::string lost;
  for (const auto& c : cases) {
    const auto inst = instances_of(find_template(c.tpl), c.params);
    const Formula f = parse_formula(c.formula);
    const auto bound = *parse_growth_bound(c.bound);
    const auto u = check_uniform_ability(inst, c.gs, f, bound, {});
    if (u.verdict != AbilityVerdict::supported) continue;
    ++supported;
    const auto a = check_adaptive_ability(inst, constant_provider(c.gs), f, bound, {});
    if (a.verdict == AbilityVerdict::supported) {
      ++kept;
    } else if (lost.empty()) {
      lost = std::string("; lost on ") + c.tpl + " " + c.formula + ": " + a.reason;
    }
  }
  return {supported > 0 && kept == supported,
          std::to_string(kept) + "/" + std::to_string(supported) + " supported uniform reports stay supported" + lost};
}

// ---- C7

Outcome c7() {
  int agree = 0, total = 0, wins = 0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    gen::Rng rng(seed);
    const std::uint32_t n0 = static_cast<std::uint32_t>(gen::below(rng, 2));
    const auto cm = gen::random_counter_model(rng, n0);
    const Formula f = parse_formula("F p0");
    const bool v0 = energy_reduce_check(cm, n0, 0, f).winning;
    bool ok = true;
    for (std::uint32_t k = 1; k <= 3; ++k) ok = ok && solve_counter_game(cm, n0, k, 0, f).winning == v0;
    agree += ok;
    wins += v0;
    ++total;
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " models agree (" +
                              std::to_string(wins) + " winning at k=0)"};
}

// ---- C8

Outcome c8() {
  std::size_t ltl_fail = 0, enc_fail = 0, game_fail = 0, agree_fail = 0;
  std::size_t games = 0, decided = 0;
  {
    gen::Rng rng(801);
    for (int it = 0; it < 200; ++it) {
      const Model m = gen::random_model(rng);
      const LassoPath l = gen::random_lasso(rng, m);
      const Formula a = gen::random_formula(rng, m.propositions, 3);
      const Formula b = gen::random_formula(rng, m.propositions, 3);
      auto ev = [&](const Formula& x) { return eval_lasso(m, l, x); };
      bool ok = ev(Formula::release(a, b)) == !ev(Formula::until(Formula::neg(a), Formula::neg(b)));
      ok = ok && ev(Formula::always(a)) == !ev(Formula::eventually(Formula::neg(a)));
      ok = ok && ev(Formula::until(a, b)) ==
                     ev(Formula::disj(b, Formula::conj(a, Formula::next(Formula::until(a, b)))));
      ok = ok && ev(Formula::eventually(a)) == ev(Formula::disj(a, Formula::next(Formula::eventually(a))));
      ok = ok && ev(Formula::always(a)) == ev(Formula::conj(a, Formula::next(Formula::always(a))));
      ok = ok && ev(a) == oracle::LassoEval(m, l).at(a, 0);
      ltl_fail += !ok;
    }
  }
  {
    gen::Rng rng(802);
    for (int it = 0; it < 100; ++it) {
      const Model m = gen::random_model(rng);
      const TapeWord w = encode_model(m);
      const Model back = decode_model(w);
      enc_fail += !(same_structure(back, m) && encode_model(back) == w);
    }
  }
  {
    using namespace game_oracle;
    gen::Rng rng(803);
    for (int it = 0; it < 300; ++it) {
      const Model m = gen::random_model(rng, gen::ModelShape{2, 8, 2, 2, true});
      if (m.propositions.empty()) continue;
      const AgentId a = static_cast<AgentId>(gen::below(rng, m.agents.size()));
      const auto g = knowledge_game(m, a);
      if (combinations(g) > 4096) continue;
      for (bool reach : {true, false}) {
        const auto pred = lift_predicate(m, g, parse_formula("p0"));
        const auto sr = reach ? solve_reachability(g, pred) : solve_safety(g, pred);
        bool ok = sr.winning == brute_force(g, pred, reach);
        if (sr.winning) {
          const auto choice = choice_of(g, sr);
          ok = ok && (reach ? forces_reach(g, choice, pred) : forces_safe(g, choice, pred));
        }
        game_fail += !ok;
        ++games;
      }
    }
  }
  {
    gen::Rng rng(804);
    for (int it = 0; it < 80; ++it) {
      auto s = gen::random_setup(rng, gen::ModelShape{2, 5, 2, 2, true});
      if (s.m.propositions.empty()) continue;
      std::vector<ComputationalStrategy> cs;
      for (const auto& fms : s.fms) {
        cs.emplace_back(std::make_shared<const Machine>(compile_fms(s.m, fms)), s.m, fms.agent);
      }
      const auto p = build_product(s.m, s.coalition, s.fms);
      for (const char* text : {"F p0", "G p0"}) {
        const Formula f = parse_formula(text);
        const auto exact = enforce_exact(p, f);
        const auto b = enforce_bounded(s.m, s.coalition, cs, f, default_depth(s.m), 100000);
        if (b.verdict == Enforcement::inconclusive) continue;
        ++decided;
        agree_fail += b.verdict != exact.verdict;
      }
    }
  }
  const bool ok = ltl_fail + enc_fail + game_fail + agree_fail == 0 && games > 200 && decided > 50;
  return {ok, "ltl 200 cases " + std::to_string(ltl_fail) + " failed; encoding 100 models " + std::to_string(enc_fail) +
                  " failed; games " + std::to_string(games) + " checked " + std::to_string(game_fail) +
                  " failed; bounded/exact " + std::to_string(decided) + " decided " + std::to_string(agree_fail) +
                  " disagree"};
}

// ---- C9

Outcome c9() {
  const Formula f = parse_formula("G !accepting");
  const Model halt = gen_tmrun(halting_machine(), 64);
  const auto h = enforce_bounded(halt, Coalition({0}), one("idle", halt, 0), f, default_depth(halt), kDefaultBudget);
  const bool witness = h.verdict == Enforcement::violated && h.lasso && !eval_lasso(halt, *h.lasso, f);

  const auto inst = instances_of(find_template("tmrun_loop"), std::vector<std::uint32_t>{16, 32, 64, 128, 256, 512});
  const auto rep = check_uniform_ability(inst, solo(0, "idle"), f, *parse_growth_bound("constant"), {});
  bool all_enforced = true;
  for (const auto& in : rep.instances) all_enforced = all_enforced && in.enforcement->verdict == Enforcement::enforced;
  const bool caveat = rep.caveat.rfind("bounded evidence", 0) == 0;
  const bool ok = witness && all_enforced && rep.verdict == AbilityVerdict::supported && caveat;
  std::string detail = "halting: " + std::string(to_string(h.verdict));
  if (h.lasso) detail += " witness " + format_lasso(halt, *h.lasso);
  detail += "; looping: " + std::string(to_string(rep.verdict)) + " to horizon 512, caveat \"" +
            rep.caveat.substr(0, 16) + "\"";
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "generate coffee 3 golden", kLimitC1, c1);
  criterion(2, "Bob outcome lassos on coffee 3", kLimitC2, c2);
  criterion(3, "Bob enforcement sweep", kLimitC3, c3);
  criterion(4, "SAT correspondence", kLimitC4, c4);
  criterion(5, "complexity profiles", kLimitC5, c5);
  criterion(6, "uniform implies adaptive", kLimitC6, c6);
  criterion(7, "energy reduction", kLimitC7, c7);
  criterion(8, "soundness suites", kLimitC8, c8);
  criterion(9, "TM-run template", kLimitC9, c9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
