#pragma once

// Multi-counter (energy) models: an iCGS skeleton whose transition entries
// carry a positive guard over "c_i > 0" atoms and counter updates. Bounded
// instances cap every counter at N0 + k and are expanded to explicit models.
//
// Expansion semantics:
//  * configurations are (state, counter vector) with counters in [0, cap];
//  * an entry whose guard fails at the source configuration, or that
//    decrements a counter at 0, leads to the absorbing sink "exhausted";
//  * incrementing a counter at the cap leaves it unchanged;
//  * agents see the counters: (q, c) ~_a (q', c') iff q ~_a q' and c = c'.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratbound/knowledge.hpp"
#include "stratbound/ltl.hpp"
#include "stratbound/model.hpp"

namespace stratbound {

struct Guard {
  enum class Kind : std::uint8_t { truth, positive, all, any } kind = Kind::truth;
  std::uint32_t counter = 0;  // for positive
  std::vector<Guard> parts;   // for all / any

  static Guard always() { return {}; }
  static Guard positive_counter(std::uint32_t c) { return {Kind::positive, c, {}}; }
  static Guard both(Guard a, Guard b) { return {Kind::all, 0, {std::move(a), std::move(b)}}; }
  static Guard either(Guard a, Guard b) { return {Kind::any, 0, {std::move(a), std::move(b)}}; }

  bool eval(std::span<const std::uint32_t> counters) const;
  std::uint32_t max_counter() const;  // 1 + largest counter mentioned, 0 if none
  /// "true", "c0>0", "(c0>0 & c1>0)", ...
  std::string to_string() const;

  friend bool operator==(const Guard&, const Guard&) = default;
};

/// Parses the guard syntax produced by to_string ("&" and "|", parentheses,
/// atoms "cN>0", "true"). Throws ParseError (column = offset + 1).
Guard parse_guard(std::string_view text);

struct CounterUpdate {
  std::uint32_t counter = 0;
  int delta = +1;  // +1 or -1

  friend bool operator==(const CounterUpdate&, const CounterUpdate&) = default;
};

struct CounterLabel {
  Guard guard;
  std::vector<CounterUpdate> updates;  // each counter at most once

  friend bool operator==(const CounterLabel&, const CounterLabel&) = default;
};

struct CounterModel {
  /// Valid iCGS; its transition table gives the successor states.
  Model skeleton;
  std::uint32_t counters = 0;
  std::vector<std::uint32_t> initial;  // one per counter
  /// labels[q][i] belongs to skeleton.transitions[q][i].
  std::vector<std::vector<CounterLabel>> labels;

  friend bool operator==(const CounterModel&, const CounterModel&) = default;
};

/// Throws InputError on shape errors, bad counter indices, repeated updates.
void check_counter_model(const CounterModel& cm);

inline constexpr const char* kExhaustedProp = "exhausted";

/// Explicit model over all configurations plus the sink (when counters > 0).
/// Configuration (q, c) has index q * (cap+1)^n + mixed-radix(c), the sink
/// comes last.
Model expand_counter_model(const CounterModel& cm, std::uint32_t n0, std::uint32_t k);

struct EnergyVerdict {
  bool winning = false;
  std::uint32_t cap = 0;
  std::size_t configurations = 0;
  std::size_t knowledge_nodes = 0;
};

/// Solves F b / G b for agent a on the expansion with cap n0 + k; the
/// objective is strengthened with !exhausted. Throws UnsupportedObjective.
EnergyVerdict solve_counter_game(const CounterModel& cm, std::uint32_t n0, std::uint32_t k, AgentId a,
                                 const Formula& f);

/// The family verdict: the k = 0 instance decides all caps >= n0.
EnergyVerdict energy_reduce_check(const CounterModel& cm, std::uint32_t n0, AgentId a, const Formula& f);

}  // namespace stratbound
