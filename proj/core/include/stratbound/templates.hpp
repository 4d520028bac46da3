#pragma once

// Model families and the template registry.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stratbound/cnf.hpp"
#include "stratbound/model.hpp"
#include "stratbound/tape_machine.hpp"

namespace stratbound {

// ---- coffee machine: Alice and Bob order n cups of espresso

namespace coffee {
inline constexpr AgentId alice = 0;
inline constexpr AgentId bob = 1;
inline constexpr ActionId request = 0;
inline constexpr ActionId skip = 1;
inline constexpr PropId sugar_alice = 0;
inline constexpr PropId sugar_bob = 1;

/// Index of state i/j (i requests after j choices).
inline StateId state(std::uint32_t i, std::uint32_t j) { return j * (j + 1) / 2 + i; }
inline std::size_t state_count(std::uint32_t n) { return static_cast<std::size_t>(n + 1) * (n + 2) / 2; }
/// Number of choices made by Alice (ceil(n/2)).
inline std::uint32_t alice_turns(std::uint32_t n) { return (n + 1) / 2; }
}  // namespace coffee

/// Throws InputError for n < 2.
Model gen_coffee(std::uint32_t n);

// ---- SAT game: refuter picks a clause, verifier walks its literals

namespace satgame {
inline constexpr AgentId verifier = 0;
inline constexpr AgentId refuter = 1;
inline constexpr ActionId top = 0;
inline constexpr ActionId bot = 1;
inline constexpr ActionId idle = 2;
inline constexpr ActionId clause_action(std::uint32_t i) { return 3 + i - 1; }  // C_i, 1-based
inline constexpr StateId literal(std::uint32_t k, std::uint32_t i, std::uint32_t j) {  // 1-based clause, variable
  return 1 + (i - 1) * k + (j - 1);
}
inline constexpr StateId win_state(std::uint32_t k, std::uint32_t n) { return 1 + n * k; }
inline constexpr StateId lose_state(std::uint32_t k, std::uint32_t n) { return 2 + n * k; }
}  // namespace satgame

/// Throws InputError for zero variables or no clauses.
Model gen_satgame(const Cnf& cnf);

/// The chain of unit clauses (x1) & ... & (xk); its only model is all-true.
Cnf satchain_cnf(std::uint32_t k);

// ---- run of a tape machine from blank input, cut at a horizon

/// One agent with the single action idle; states t0, t1, ... are the first
/// min(h, halting step + 1) configurations; states whose control state is
/// accepting carry `accepting`; the last state loops. Throws InputError for h = 0.
Model gen_tmrun(const TapeMachine& tm, std::uint32_t horizon);

/// Accepts after three steps.
const TapeMachine& halting_machine();
/// Alternates between two control states forever, never accepting.
const TapeMachine& looping_machine();

// ---- registry

struct Template {
  std::string name;
  std::string description;
  std::uint32_t min_param = 1;
  std::uint32_t max_param = 0xffffffffU;
  std::vector<std::string> agents;
  std::vector<std::string> propositions;
  std::function<Model(std::uint32_t)> generate;

  /// Throws InputError when param is outside [min_param, max_param].
  Model instance(std::uint32_t param) const;
};

const std::vector<Template>& template_registry();
/// Throws InputError listing the known names.
const Template& find_template(std::string_view name);

}  // namespace stratbound
