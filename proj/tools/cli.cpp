#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stratbound/cnf.hpp"
#include "stratbound/counters.hpp"
#include "stratbound/encoding.hpp"
#include "stratbound/errors.hpp"
#include "stratbound/knowledge.hpp"
#include "stratbound/model_text.hpp"
#include "stratbound/outcome.hpp"
#include "stratbound/profiler.hpp"
#include "stratbound/report.hpp"
#include "stratbound/strategies.hpp"
#include "stratbound/templates.hpp"

namespace stratbound::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string tpl;
  std::uint32_t param = 0;
  std::string params;
  std::string model_file;
  std::vector<std::string> dimacs;
  std::string counters_file;

  std::string coalition;
  std::vector<std::string> strategies;
  std::string formula;
  std::string agent;
  std::string reach, safe;
  std::string compile_out;
  std::uint32_t n0 = 0, k = 0;

  std::size_t depth = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 1;
  std::string sampler = "closed_loop";
  std::size_t cap = 10'000;
  std::size_t walks = 64;
  std::string axis = "param";
  std::string bound = "polynomial(1)";
  std::string mode = "uniform";
  std::string provider = "constant";

  std::string history;
  bool encoding = false;
  std::string format = "text";
  std::string output;
  bool no_timestamp = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::uint32_t> parse_params(const std::string& text) {
  std::vector<std::uint32_t> out;
  auto number = [&](const std::string& s) {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad parameter list '" + text + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(s));
  };
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (auto dots = part.find(".."); dots != std::string::npos) {
      const auto lo = number(part.substr(0, dots)), hi = number(part.substr(dots + 2));
      if (lo > hi || hi - lo > 100'000) throw UsageError("bad parameter range '" + part + "'");
      for (auto n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(number(part));
    }
  }
  if (out.empty()) throw UsageError("empty parameter list");
  return out;
}

struct Loaded {
  Model model;
  std::string label;
};

Loaded load_model(const Options& o) {
  const int sources = !o.tpl.empty() + !o.model_file.empty() + !o.dimacs.empty();
  if (sources != 1) throw UsageError("give exactly one of --template, --model, --dimacs");
  if (!o.tpl.empty()) {
    const Template& t = find_template(o.tpl);
    if (o.param == 0) throw UsageError("--template needs --param");
    return {t.instance(o.param), o.tpl + "(" + std::to_string(o.param) + ")"};
  }
  if (!o.model_file.empty()) return {parse_model(read_file(o.model_file)), o.model_file};
  if (o.dimacs.size() != 1) throw UsageError("give a single --dimacs file here");
  return {gen_satgame(parse_dimacs(read_file(o.dimacs.front()))), o.dimacs.front()};
}

AgentId agent_named(const Model& m, const std::string& name) {
  auto a = find_agent(m, name);
  if (!a) throw InputError("unknown agent '" + name + "'");
  return *a;
}

Coalition coalition_of(const Model& m, const std::string& list) {
  std::vector<AgentId> agents;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) agents.push_back(agent_named(m, name));
  }
  if (agents.empty()) throw UsageError("empty coalition");
  return Coalition(std::move(agents));
}

MachinePtr machine_ref(const std::string& ref) {
  if (find_builtin(ref)) return builtin_machine(ref);
  if (std::filesystem::exists(ref)) {
    return std::make_shared<const Machine>(parse_machine(read_file(ref), kind_for_path(ref)));
  }
  throw InputError("'" + ref + "' is neither a shipped strategy nor a readable machine file");
}

GeneralStrategy strategies_of(const Model& m, const Options& o) {
  GeneralStrategy gs;
  std::optional<Coalition> declared;
  if (!o.coalition.empty()) declared = coalition_of(m, o.coalition);
  for (const auto& spec : o.strategies) {
    std::string agent, ref = spec;
    if (auto eq = spec.find('='); eq != std::string::npos) {
      agent = spec.substr(0, eq);
      ref = spec.substr(eq + 1);
    } else if (const auto* b = find_builtin(spec); b && !b->agent.empty()) {
      agent = b->agent;
    } else if (declared && declared->size() == 1) {
      agent = m.agents.at(declared->agents().front());
    } else {
      throw UsageError("strategy '" + spec + "' needs an agent: use AGENT=" + spec);
    }
    gs.members.emplace_back(agent_named(m, agent), machine_ref(ref));
  }
  if (gs.members.empty()) throw UsageError("give at least one --strategy");
  if (declared && !(gs.coalition() == *declared)) {
    throw UsageError("strategies must cover exactly the agents of --coalition");
  }
  return gs;
}

Formula formula_of(const Model* m, const std::string& text) {
  if (text.empty()) throw UsageError("missing --formula");
  Formula f = parse_formula(text);
  if (m) {
    for (const auto& p : f.propositions()) {
      if (!find_proposition(*m, p)) throw InputError("formula mentions unknown proposition '" + p + "'");
    }
  }
  return f;
}

ReportFormat format_of(const Options& o) {
  auto f = parse_report_format(o.format);
  if (!f) throw UsageError("--format must be json, csv or text");
  return *f;
}

std::uint64_t budget_of(const Options& o) { return o.budget ? o.budget : default_budget(); }

SamplerConfig sampler_of(const Options& o) {
  SamplerConfig s;
  auto k = parse_sampler_kind(o.sampler);
  if (!k) throw UsageError("--sampler must be closed_loop, all_paths or random_paths");
  s.kind = *k;
  s.cap = o.cap;
  s.depth = o.depth;
  s.seed = o.seed;
  s.walks = o.walks;
  return s;
}

std::string spec_of(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "-o" || args[i] == "--output") {
      ++i;
      continue;
    }
    if (!out.empty()) out += ' ';
    out += args[i];
  }
  return out;
}

class Emitter {
 public:
  Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {}
  void write(const std::string& text) {
    if (o_.output.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(o_.output, std::ios::binary);
    if (!f || !(f << text)) throw UsageError("cannot write '" + o_.output + "'");
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

std::vector<StateId> history_of(const Model& m, const std::string& text) {
  std::vector<StateId> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto q = find_state(m, name);
    if (!q) throw InputError("unknown state '" + name + "' in --history");
    out.push_back(*q);
  }
  return out;
}

// ---- commands

int cmd_validate(const Options& o, std::ostream& out) {
  const auto [m, label] = load_model(o);
  const auto diags = validate_model(m);
  std::ostringstream os;
  if (diags.empty()) {
    os << label << ": valid (" << m.states.size() << " states, abstract size " << abstract_size(m) << ")\n";
  } else {
    os << label << ": " << diags.size() << " problem" << (diags.size() == 1 ? "" : "s") << "\n";
    for (const auto& d : diags) os << "  [" << to_string(d.invariant) << "] " << d.message << "\n";
  }
  Emitter(o, out).write(os.str());
  return diags.empty() ? ok : refuted;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const auto [m, label] = load_model(o);
  require_valid(m);
  Emitter(o, out).write(o.encoding ? encode_model(m).str() + "\n" : format_model(m));
  return ok;
}

int cmd_encode(const Options& o, std::ostream& out) {
  const auto [m, label] = load_model(o);
  require_valid(m);
  std::string text;
  if (!o.history.empty() || !o.agent.empty()) {
    if (o.agent.empty()) throw UsageError("--history needs --agent");
    const AgentId a = agent_named(m, o.agent);
    const auto states = history_of(m, o.history);
    const auto canonical = canonical_table(m);
    text = encode_history_indices(observe(m, canonical, a, states)).str();
  } else {
    text = encode_model(m).str();
  }
  Emitter(o, out).write(text + "\n");
  return ok;
}

int cmd_simulate(const Options& o, const ReportMeta& meta, std::ostream& out) {
  const auto [m, label] = load_model(o);
  require_valid(m);
  const auto gs = strategies_of(m, o);
  const auto tree =
      simulate_outcomes(m, gs.coalition(), instantiate(gs, m), o.depth ? o.depth : default_depth(m), budget_of(o));
  Emitter(o, out).write(render_outcomes(m, tree, meta, format_of(o)));
  return ok;
}

int cmd_check(const Options& o, const ReportMeta& meta, std::ostream& out) {
  const auto [m, label] = load_model(o);
  require_valid(m);
  const auto gs = strategies_of(m, o);
  const Formula f = formula_of(&m, o.formula);
  const auto rep = enforce_bounded(m, gs.coalition(), instantiate(gs, m), f, o.depth ? o.depth : default_depth(m),
                                   budget_of(o));
  Emitter(o, out).write(render_enforcement(m, rep, meta, format_of(o)));
  switch (rep.verdict) {
    case Enforcement::enforced: return ok;
    case Enforcement::violated: return refuted;
    case Enforcement::inconclusive: return inconclusive;
  }
  return inconclusive;
}

Formula objective_of(const Model* m, const Options& o) {
  const int given = !o.formula.empty() + !o.reach.empty() + !o.safe.empty();
  if (given != 1) throw UsageError("give exactly one of --formula, --reach, --safe");
  if (!o.reach.empty()) return Formula::eventually(formula_of(m, o.reach));
  if (!o.safe.empty()) return Formula::always(formula_of(m, o.safe));
  return formula_of(m, o.formula);
}

int cmd_synthesize(const Options& o, const ReportMeta& meta, std::ostream& out) {
  if (o.agent.empty()) throw UsageError("synthesize needs --agent");
  if (!o.counters_file.empty()) {
    if (!o.tpl.empty() || !o.model_file.empty() || !o.dimacs.empty()) {
      throw UsageError("--counters replaces the model source");
    }
    const CounterModel cm = parse_counter_model(read_file(o.counters_file));
    check_counter_model(cm);
    const AgentId a = agent_named(cm.skeleton, o.agent);
    const Formula f = objective_of(nullptr, o);
    const auto v = solve_counter_game(cm, o.n0, o.k, a, f);
    Emitter(o, out).write(render_energy(v, o.n0, o.k, meta, format_of(o)));
    return v.winning ? ok : refuted;
  }
  const auto [m, label] = load_model(o);
  require_valid(m);
  const AgentId a = agent_named(m, o.agent);
  const Formula f = objective_of(&m, o);
  const auto s = synthesize(m, a, f);
  if (!o.compile_out.empty() && s.result.winning) {
    const auto prog = compile_knowledge_strategy(m, s.game, s.result);
    std::ofstream file(o.compile_out, std::ios::binary);
    if (!file || !(file << prog.source())) throw UsageError("cannot write '" + o.compile_out + "'");
  }
  Emitter(o, out).write(render_synthesis(m, s, meta, format_of(o)));
  return s.result.winning ? ok : refuted;
}

ProfileAxis axis_of(const Options& o) {
  if (o.axis == "param") return ProfileAxis::param;
  if (o.axis == "enc_size" || o.axis == "enc") return ProfileAxis::enc_size;
  if (o.axis == "abstract_size" || o.axis == "abstract") return ProfileAxis::abstract_size;
  throw UsageError("--axis must be param, enc_size or abstract_size");
}

int cmd_profile(const Options& o, const ReportMeta& meta, std::ostream& out) {
  if (o.tpl.empty()) throw UsageError("profile needs --template");
  if (o.params.empty()) throw UsageError("profile needs --params");
  const Template& t = find_template(o.tpl);
  const auto params = parse_params(o.params);
  const Model first = t.instance(params.front());
  const auto gs = strategies_of(first, o);
  const auto p = profile_strategy(t, gs, params, sampler_of(o), budget_of(o));
  std::optional<GrowthVerdict> g;
  const auto axis = axis_of(o);
  if (p.rows.size() >= kMinGrowthPoints) g = classify_growth(p, axis);
  Emitter(o, out).write(render_profile(p, g, axis, meta, format_of(o)));
  return ok;
}

int cmd_ability(const Options& o, const ReportMeta& meta, std::ostream& out) {
  std::vector<Instance> instances;
  if (!o.tpl.empty()) {
    if (o.params.empty()) throw UsageError("ability needs --params with --template");
    instances = instances_of(find_template(o.tpl), parse_params(o.params));
  } else if (!o.dimacs.empty()) {
    for (std::size_t i = 0; i < o.dimacs.size(); ++i) {
      instances.push_back({static_cast<std::uint32_t>(i + 1), o.dimacs[i], gen_satgame(parse_dimacs(read_file(o.dimacs[i])))});
    }
  } else {
    throw UsageError("ability needs --template or --dimacs");
  }
  auto bound = parse_growth_bound(o.bound);
  if (!bound) throw UsageError("bad --bound '" + o.bound + "'");
  const Formula f = formula_of(&instances.front().model, o.formula);
  AbilityOptions opt;
  opt.depth = o.depth;
  opt.budget = budget_of(o);
  opt.sampler = sampler_of(o);
  AbilityReport rep;
  if (o.mode == "uniform") {
    if (o.provider != "constant") throw UsageError("--provider applies to adaptive mode");
    rep = check_uniform_ability(instances, strategies_of(instances.front().model, o), f, *bound, opt);
  } else if (o.mode == "adaptive") {
    StrategyProvider provider;
    if (o.provider == "constant") {
      provider = constant_provider(strategies_of(instances.front().model, o));
    } else if (o.provider == "synthesis") {
      if (o.agent.empty()) throw UsageError("--provider synthesis needs --agent");
      provider = synthesis_provider(agent_named(instances.front().model, o.agent), f);
    } else {
      throw UsageError("--provider must be constant or synthesis");
    }
    rep = check_adaptive_ability(instances, provider, f, *bound, opt);
  } else {
    throw UsageError("--mode must be uniform or adaptive");
  }
  Emitter(o, out).write(render_ability(instances, rep, meta, format_of(o)));
  switch (rep.verdict) {
    case AbilityVerdict::supported: return ok;
    case AbilityVerdict::refuted: return refuted;
    case AbilityVerdict::inconclusive: return inconclusive;
  }
  return inconclusive;
}

void model_source(CLI::App* c, Options& o) {
  c->add_option("--template,-t", o.tpl, "template name");
  c->add_option("--param,-p", o.param, "template parameter");
  c->add_option("--model,-m", o.model_file, "model file");
  c->add_option("--dimacs", o.dimacs, "DIMACS CNF file (SAT game)");
}

void strategy_options(CLI::App* c, Options& o) {
  c->add_option("--coalition,-c", o.coalition, "comma-separated agent names");
  c->add_option("--strategy,-s", o.strategies, "[AGENT=]builtin name or machine file; repeatable");
  c->add_option("--depth,-d", o.depth, "states per path (default 2|St|+2)");
  c->add_option("--budget,-b", o.budget, "step budget per run");
}

void output_options(CLI::App* c, Options& o) {
  c->add_option("--format,-f", o.format, "json, csv or text");
  c->add_option("--output,-o", o.output, "write the report to a file");
  c->add_option("--seed", o.seed, "sampler seed");
  c->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp from JSON reports");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"stratbound: strategies under computational bounds", "stratbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  auto* validate = app.add_subcommand("validate", "check the model invariants");
  model_source(validate, o);
  output_options(validate, o);

  auto* generate = app.add_subcommand("generate", "write a model in the text format or its tape encoding");
  model_source(generate, o);
  generate->add_flag("--encoding", o.encoding, "emit the {0,1,#} encoding");
  output_options(generate, o);

  auto* encode = app.add_subcommand("encode", "tape encoding of a model or of an observation history");
  model_source(encode, o);
  encode->add_option("--agent,-a", o.agent, "observing agent for --history");
  encode->add_option("--history", o.history, "comma-separated state names");
  output_options(encode, o);

  auto* simulate = app.add_subcommand("simulate", "outcome tree of a coalition strategy");
  model_source(simulate, o);
  strategy_options(simulate, o);
  output_options(simulate, o);

  auto* check = app.add_subcommand("check", "bounded enforcement check of an LTL objective");
  model_source(check, o);
  strategy_options(check, o);
  check->add_option("--formula,-F", o.formula, "LTL objective");
  output_options(check, o);

  auto* synth = app.add_subcommand("synthesize", "knowledge-game synthesis for F b / G b");
  model_source(synth, o);
  synth->add_option("--agent,-a", o.agent, "protagonist")->required();
  synth->add_option("--formula,-F", o.formula, "objective F b or G b");
  synth->add_option("--reach", o.reach, "state formula b of F b");
  synth->add_option("--safe", o.safe, "state formula b of G b");
  synth->add_option("--compile", o.compile_out, "write the winning strategy as a program");
  synth->add_option("--counters", o.counters_file, "counter model file");
  synth->add_option("--n0", o.n0, "counter bound N0");
  synth->add_option("--k", o.k, "extra counter headroom");
  output_options(synth, o);

  auto* profile = app.add_subcommand("profile", "step-count profile over template instances");
  profile->add_option("--template,-t", o.tpl, "template name");
  profile->add_option("--params,-P", o.params, "e.g. 4..22 or 2,4,8");
  strategy_options(profile, o);
  profile->add_option("--sampler", o.sampler, "closed_loop, all_paths or random_paths");
  profile->add_option("--cap", o.cap, "histories per instance");
  profile->add_option("--walks", o.walks, "random walks per instance");
  profile->add_option("--axis", o.axis, "param, enc_size or abstract_size");
  output_options(profile, o);

  auto* ability = app.add_subcommand("ability", "bounded uniform or adaptive ability check");
  ability->add_option("--template,-t", o.tpl, "template name");
  ability->add_option("--params,-P", o.params, "e.g. 2..12");
  ability->add_option("--dimacs", o.dimacs, "DIMACS files forming the family; repeatable");
  strategy_options(ability, o);
  ability->add_option("--formula,-F", o.formula, "LTL objective")->required();
  ability->add_option("--bound", o.bound, "constant, log, polynomial(d) or exponential");
  ability->add_option("--mode", o.mode, "uniform or adaptive");
  ability->add_option("--provider", o.provider, "adaptive: constant or synthesis");
  ability->add_option("--agent,-a", o.agent, "protagonist for --provider synthesis");
  ability->add_option("--sampler", o.sampler, "closed_loop, all_paths or random_paths");
  ability->add_option("--cap", o.cap, "histories per instance");
  output_options(ability, o);

  std::vector<const char*> argv{"stratbound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  ReportMeta meta;
  meta.seed = o.seed;
  meta.spec = spec_of(args);
  meta.timestamp = !o.no_timestamp;
  try {
    for (auto* sub : app.get_subcommands()) {
      meta.command = sub->get_name();
      if (sub == validate) return cmd_validate(o, out);
      if (sub == generate) return cmd_generate(o, out);
      if (sub == encode) return cmd_encode(o, out);
      if (sub == simulate) return cmd_simulate(o, meta, out);
      if (sub == check) return cmd_check(o, meta, out);
      if (sub == synth) return cmd_synthesize(o, meta, out);
      if (sub == profile) return cmd_profile(o, meta, out);
      if (sub == ability) return cmd_ability(o, meta, out);
    }
  } catch (const ParseError& e) {
    err << "stratbound: parse error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "stratbound: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace stratbound::cli
