#include "stratbound/machine.hpp"

#include <algorithm>
#include <cstdlib>

namespace stratbound {

namespace {

ActionId parse_output(const std::string& out) {
  if (out.empty()) throw MalformedOutput("machine halted with an empty output tape");
  if (out.size() > 32) throw MalformedOutput("output '" + out.substr(0, 32) + "...' is too long for an action index");
  if (out.size() > 1 && out[0] == '0') throw MalformedOutput("output '" + out + "' has a leading zero");
  std::uint64_t v = 0;
  for (char c : out) {
    if (c != '0' && c != '1') throw MalformedOutput("output '" + out + "' is not a binary index");
    v = (v << 1U) | static_cast<std::uint64_t>(c - '0');
  }
  return static_cast<ActionId>(v);
}

ActionId program_action(const Int& v) {
  auto small = v.to_int64();
  if (!small || *small < 0 || *small > 0xffffffffLL) {
    throw MalformedOutput("program emitted " + v.str() + ", which is not an action index");
  }
  return static_cast<ActionId>(*small);
}

void check_legal(const Model& m, AgentId a, std::span<const StateId> history, ActionId action) {
  const StateId q = history.empty() ? m.initial : history.back();
  if (q >= m.states.size()) throw InputError("history mentions an unknown state");
  const auto& rep = m.repertoire[a][q];
  if (!std::binary_search(rep.begin(), rep.end(), action)) {
    throw IllegalAction("action " + std::to_string(action) + " is not available to agent " + std::to_string(a) +
                        " at observation " + std::to_string(q));
  }
}

RunResult run_tape(const TapeMachine& tm, std::string_view model_word, std::string_view history_word,
                   std::uint64_t budget) {
  auto ex = tm.execute(model_word, history_word, budget);
  if (!ex.halted) throw BudgetExceeded("step budget of " + std::to_string(budget) + " exhausted");
  return RunResult{parse_output(ex.output), ex.steps};
}

}  // namespace

Machine parse_machine(std::string_view text, MachineKind kind) {
  if (kind == MachineKind::tape) return TapeMachine::parse(text);
  return StrategyProgram::parse(text);
}

MachineKind kind_for_path(std::string_view path) {
  return path.size() >= 3 && path.substr(path.size() - 3) == ".tm" ? MachineKind::tape : MachineKind::program;
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("STRATBOUND_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

RunResult run(const Machine& machine, const TapeWord& enc_model, const TapeWord& enc_history, std::uint64_t budget,
              std::optional<AgentId> agent) {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  std::optional<Model> model;
  std::vector<StateId> history;
  auto decoded = [&]() -> const Model& {
    if (!model) {
      model = decode_model(enc_model);
      history = decode_history(enc_history);
    }
    return *model;
  };
  RunResult r;
  if (const auto* tm = std::get_if<TapeMachine>(&machine)) {
    r = run_tape(*tm, enc_model.str(), enc_history.str(), budget);
  } else {
    const auto& prog = std::get<StrategyProgram>(machine);
    const Model& m = decoded();
    const auto canonical = canonical_table(m);
    ProgramInput in;
    in.model = &m;
    in.canonical = &canonical;
    in.history = history;
    in.tape1 = enc_model.str();
    in.tape2 = enc_history.str();
    in.agent = agent ? static_cast<std::int64_t>(*agent) : -1;
    auto res = prog.execute(in, budget);
    r = RunResult{program_action(res.emitted), res.steps};
  }
  if (agent) {
    const Model& m = decoded();
    if (*agent >= m.agents.size()) throw InputError("unknown agent");
    check_legal(m, *agent, history, r.action);
  }
  return r;
}

ComputationalStrategy::ComputationalStrategy(MachinePtr machine, const Model& m, AgentId agent)
    : machine_(std::move(machine)), model_(std::make_shared<Model>(m)), agent_(agent) {
  if (agent >= m.agents.size()) throw InputError("unknown agent index " + std::to_string(agent));
  canonical_ = std::make_shared<std::vector<std::vector<StateId>>>(canonical_table(m));
  word_ = std::make_shared<TapeWord>(encode_model(m));
}

RunResult ComputationalStrategy::decide(std::span<const StateId> history, std::uint64_t budget) const {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  RunResult r;
  if (const auto* tm = std::get_if<TapeMachine>(machine_.get())) {
    r = run_tape(*tm, word_->str(), encode_history_indices(history).str(), budget);
  } else {
    const auto& prog = std::get<StrategyProgram>(*machine_);
    std::string tape2;
    if (prog.reads_tape2()) tape2 = encode_history_indices(history).str();
    ProgramInput in;
    in.model = model_.get();
    in.canonical = canonical_.get();
    in.history = history;
    in.tape1 = word_->str();
    in.tape2 = tape2;
    in.agent = agent_;
    auto res = prog.execute(in, budget);
    r = RunResult{program_action(res.emitted), res.steps};
  }
  check_legal(*model_, agent_, history, r.action);
  return r;
}

RunResult ComputationalStrategy::run(const TapeWord& enc_history, std::uint64_t budget) const {
  return decide(decode_history(enc_history), budget);
}

Coalition GeneralStrategy::coalition() const {
  std::vector<AgentId> agents;
  for (const auto& [a, _] : members) agents.push_back(a);
  return Coalition(std::move(agents));
}

std::vector<ComputationalStrategy> instantiate(const GeneralStrategy& gs, const Model& m) {
  gs.coalition().check_against(m);
  std::vector<ComputationalStrategy> out;
  out.reserve(gs.members.size());
  for (const auto& [a, machine] : gs.members) out.emplace_back(machine, m, a);
  return out;
}

std::vector<StateId> observe(const Model& m, std::span<const std::vector<StateId>> canonical, AgentId a,
                             std::span<const StateId> states) {
  std::vector<StateId> out;
  out.reserve(states.size());
  for (StateId q : states) {
    if (q >= m.states.size()) throw InputError("history mentions an unknown state");
    out.push_back(canonical[a][q]);
  }
  return out;
}

StepMeasurement measure_steps(const GeneralStrategy& gs, const Model& m,
                              std::span<const std::vector<StateId>> histories, std::uint64_t budget) {
  const auto strategies = instantiate(gs, m);
  const auto canonical = canonical_table(m);
  const std::size_t model_len = strategies.empty() ? encode_model(m).size() : strategies.front().model_word().size();
  std::map<std::size_t, StepBucket> buckets;
  StepMeasurement out;
  for (const auto& h : histories) {
    for (const auto& s : strategies) {
      ++out.runs;
      try {
        const auto obs = observe(m, canonical, s.agent(), h);
        const auto r = s.decide(obs, budget);
        auto& b = buckets[encoded_history_length(obs)];
        b.enc_model_len = model_len;
        b.enc_history_len = encoded_history_length(obs);
        b.max_steps = std::max(b.max_steps, r.steps);
        ++b.runs;
        out.max_steps = std::max(out.max_steps, r.steps);
      } catch (const BudgetExceeded& e) {
        ++out.budget_hits;
        out.errors.push_back(e.what());
      } catch (const std::exception& e) {
        out.errors.push_back(e.what());
      }
    }
  }
  for (auto& [_, b] : buckets) out.buckets.push_back(b);
  return out;
}

}  // namespace stratbound
