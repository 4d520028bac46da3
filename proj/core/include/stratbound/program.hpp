#pragma once

// Strategy programs: a small register machine with unbounded integers.
//
// Source is line oriented. `;` starts a comment. A line is empty, a label
// (`name:`, optionally followed by an instruction), a data directive
// (`.data name v1 v2 ...`) or an instruction `op arg arg ...` (commas between
// arguments are allowed). Registers are identifiers and start at 0; operands
// marked v may also be integer literals.
//
//   set d v            add/sub/mul/div/mod/shl/shr/band d v v
//   jmp L              jeq/jne/jlt/jle/jgt/jge v v L
//   call L   ret       push v   pop d
//   alloc A v          ld d A v     st A v v     alen d A
//   len1 d   sym1 d v  len2 d   sym2 d v     raw tape symbols: 0, 1, 2 (#), -1 past the end
//   hlen d   hobs d v                         history length / canonical index at position
//   nagents d  nstates d  nactions d  nprops d  init d  agent d
//   replen d v v   rep d v v v               repertoire size / i-th action of (agent, state)
//   succ d q v...  (one action per agent; -1 when not a transition)
//   val d v v      (1 iff proposition holds at state)   obs d v v  (canonical of class)
//   emit v
//
// Every executed instruction costs one step. `.data` arrays are loaded before
// the first step at no cost.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stratbound/bigint.hpp"
#include "stratbound/model.hpp"

namespace stratbound {

/// What a program can see during one run.
struct ProgramInput {
  const Model* model = nullptr;
  /// canonical_table(*model); required.
  const std::vector<std::vector<StateId>>* canonical = nullptr;
  std::span<const StateId> history;
  /// Raw words; only read by len1/sym1 and len2/sym2.
  std::string_view tape1;
  std::string_view tape2;
  std::int64_t agent = -1;
};

struct ProgramResult {
  Int emitted;
  std::uint64_t steps = 0;
};

class StrategyProgram {
 public:
  /// Throws ParseError.
  static StrategyProgram parse(std::string_view text);

  /// Throws BudgetExceeded when more than `budget` instructions would run,
  /// ProgramFault on runtime faults.
  ProgramResult execute(const ProgramInput& input, std::uint64_t budget) const;

  bool reads_tape1() const { return reads_tape1_; }
  bool reads_tape2() const { return reads_tape2_; }
  std::size_t instruction_count() const { return code_.size(); }
  const std::string& source() const { return source_; }

  enum class Op : std::uint8_t;

  struct Operand {
    enum Kind : std::uint8_t { reg, imm, label, array } kind;
    std::uint32_t index;
  };

  struct Instruction {
    Op op;
    std::vector<Operand> args;
    std::size_t line;
  };

 private:
  std::string source_;
  std::vector<Instruction> code_;
  std::vector<Int> constants_;
  std::vector<std::string> registers_;
  std::vector<std::string> arrays_;
  std::vector<std::vector<Int>> data_;
  bool reads_tape1_ = false;
  bool reads_tape2_ = false;
};

}  // namespace stratbound
