#pragma once

// Shipped strategy machines.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratbound/cnf.hpp"
#include "stratbound/machine.hpp"
#include "stratbound/outcome.hpp"

namespace stratbound {

struct BuiltinStrategy {
  std::string name;
  std::string description;
  MachineKind kind;
  std::string source;
  /// Agent the strategy is written for, by name; empty when any agent fits.
  std::string agent;
};

/// alice_skip (tape machine), alice_skip_vm, bob_fib_naive, bob_fib_memo,
/// bob_fib_matrix, sat_bruteforce, idle.
const std::vector<BuiltinStrategy>& builtin_strategies();
const BuiltinStrategy* find_builtin(std::string_view name);
/// Parsed once and shared. Throws InputError for unknown names.
MachinePtr builtin_machine(std::string_view name);

/// Memoryless verifier on gen_satgame(cnf): at literal x_j play top iff
/// assignment[j-1], idle elsewhere.
FiniteMemoryStrategy verifier_from_assignment(const Cnf& cnf, const std::vector<bool>& assignment);

/// Bob's coffee decision as a memoryless table on gen_coffee(n).
FiniteMemoryStrategy bob_memoryless(std::uint32_t n);

}  // namespace stratbound
