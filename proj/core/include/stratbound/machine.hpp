#pragma once

// Strategy machines: the common interface over tape machines and strategy
// programs, instantiation on a model, and step measurement.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stratbound/encoding.hpp"
#include "stratbound/errors.hpp"
#include "stratbound/model.hpp"
#include "stratbound/program.hpp"
#include "stratbound/tape_machine.hpp"

namespace stratbound {

using Machine = std::variant<TapeMachine, StrategyProgram>;
using MachinePtr = std::shared_ptr<const Machine>;

enum class MachineKind { tape, program };

/// Throws ParseError.
Machine parse_machine(std::string_view text, MachineKind kind);
/// ".tm" files are tape machines, anything else a strategy program.
MachineKind kind_for_path(std::string_view path);

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;
/// kDefaultBudget, or STRATBOUND_BUDGET when set to a positive integer.
std::uint64_t default_budget();

struct RunResult {
  ActionId action = 0;
  std::uint64_t steps = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Runs the machine with tape 1 = enc_model and tape 2 = enc_history.
/// budget must be positive (std::invalid_argument otherwise). With `agent`
/// set, the action is checked against the agent's repertoire at the last
/// observation (the initial state for an empty history).
RunResult run(const Machine& machine, const TapeWord& enc_model, const TapeWord& enc_history, std::uint64_t budget,
              std::optional<AgentId> agent = std::nullopt);

/// A general strategy with tape 1 fixed to one model.
class ComputationalStrategy {
 public:
  ComputationalStrategy(MachinePtr machine, const Model& m, AgentId agent);

  AgentId agent() const { return agent_; }
  const Machine& machine() const { return *machine_; }
  const Model& model() const { return *model_; }
  const TapeWord& model_word() const { return *word_; }

  /// Decision on a history of canonical observation indices. Equivalent to
  /// run(machine, encode_model(m), encode_history_indices(history), ...).
  RunResult decide(std::span<const StateId> history, std::uint64_t budget) const;
  /// Same, from the encoded history word.
  RunResult run(const TapeWord& enc_history, std::uint64_t budget) const;

 private:
  MachinePtr machine_;
  std::shared_ptr<const Model> model_;
  std::shared_ptr<const std::vector<std::vector<StateId>>> canonical_;
  std::shared_ptr<const TapeWord> word_;
  AgentId agent_;
};

/// One machine per coalition member.
struct GeneralStrategy {
  std::vector<std::pair<AgentId, MachinePtr>> members;

  Coalition coalition() const;
};

/// Throws InputError when a member agent is not in m.
std::vector<ComputationalStrategy> instantiate(const GeneralStrategy& gs, const Model& m);

struct StepBucket {
  std::size_t enc_model_len = 0;
  std::size_t enc_history_len = 0;
  std::uint64_t max_steps = 0;
  std::size_t runs = 0;
};

struct StepMeasurement {
  /// Sorted by (enc_model_len, enc_history_len).
  std::vector<StepBucket> buckets;
  /// Max over all runs and all members.
  std::uint64_t max_steps = 0;
  std::size_t runs = 0;
  std::size_t budget_hits = 0;
  /// One message per failed run.
  std::vector<std::string> errors;
};

/// Runs every member on its own observation sequence of each state history.
/// Run errors are recorded, not thrown.
StepMeasurement measure_steps(const GeneralStrategy& gs, const Model& m,
                              std::span<const std::vector<StateId>> histories, std::uint64_t budget);

/// Canonical observation sequence of agent a along a state sequence.
std::vector<StateId> observe(const Model& m, std::span<const std::vector<StateId>> canonical, AgentId a,
                             std::span<const StateId> states);

}  // namespace stratbound
