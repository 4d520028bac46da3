#pragma once

// Sectioned plain-text model format.
//
//   agents: Alice Bob
//   actions: request skip
//   propositions: sugar_Alice sugar_Bob
//   states: 0/0 0/1 1/1
//   initial: 0/0
//   valuation:
//     sugar_Bob = 1/1
//   repertoire:
//     Alice 0/0 = request skip
//   transitions:
//     0/0 request skip -> 1/1
//   indist:
//     Alice = 0/1 1/1 | ...
//
// Names are whitespace-free tokens other than = | -> when do, not ending in
// ':' and not starting with '#'. Lines whose first non-blank character is
// '#' are comments. Joint actions list one action per agent in agent order.
// States missing from an agent's indist classes are singletons.
//
// Counter models add `counters: <n>`, `init: <v1> ... <vn>`, and optional
// suffixes on transition lines: `when <guard> do ++c0 --c1`.

#include <string>
#include <string_view>

#include "stratbound/counters.hpp"
#include "stratbound/model.hpp"

namespace stratbound {

/// Structural parse; the result is normalized but not validated (use
/// validate_model). Throws ParseError, also when counter syntax is present.
Model parse_model(std::string_view text);
/// Counter-free text yields counters = 0 with trivial labels.
CounterModel parse_counter_model(std::string_view text);

/// Throws InputError when a name cannot be written as a token.
std::string format_model(const Model& m);
std::string format_counter_model(const CounterModel& cm);

}  // namespace stratbound
