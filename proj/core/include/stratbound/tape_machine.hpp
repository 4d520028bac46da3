#pragma once

// Deterministic multi-tape machines over {0, 1, #} plus blank.
//
// Tape roster, in this order: input 1 (model, read-only), input 2 (history,
// read-only), output (write-only, append), then `work` work tapes. One rule
// per line:
//
//   <state> <read> -> <next> <write> <move>
//
// <read>  one symbol per readable tape (input 1, input 2, work...), from
//         0 1 # _ (blank) or * (any);
// <write> one symbol per writable tape (output, work...), from 0 1 # _ or *
//         (leave unchanged); the output tape never takes _;
// <move>  one of L R S per tape (input 1, input 2, output, work...). The
//         output head moves R exactly when the rule writes to it.
//
// Directives: `work <n>` (default 2), `start <state>`, `accept <states...>`.
// `#` starts a comment only when it is the first non-blank character of a
// line. A machine halts when no rule matches; it is deterministic by
// construction (overlapping rules are rejected).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratbound {

enum class TapeSymbol : std::uint8_t { zero = 0, one = 1, hash = 2, blank = 3 };
enum class HeadMove : std::uint8_t { left, right, stay };

struct TapeRule {
  std::uint32_t state = 0;
  std::vector<std::optional<TapeSymbol>> read;
  std::uint32_t next = 0;
  std::vector<std::optional<TapeSymbol>> write;
  std::vector<HeadMove> move;
};

class TapeMachine {
 public:
  /// Throws ParseError.
  static TapeMachine parse(std::string_view text);

  std::size_t work_tapes() const { return work_; }
  std::size_t tape_count() const { return 3 + work_; }
  std::uint32_t start() const { return start_; }
  bool is_accepting(std::uint32_t state) const;
  const std::vector<std::string>& state_names() const { return names_; }
  const std::vector<TapeRule>& rules() const { return rules_; }
  std::string to_text() const;

  struct Execution {
    std::string output;
    std::uint64_t steps = 0;
    bool halted = false;
    std::uint32_t final_state = 0;
  };

  /// Runs on the two input words for at most `budget` transitions.
  /// `halted` is false when the budget ran out with a rule still applicable.
  Execution execute(std::string_view input1, std::string_view input2, std::uint64_t budget) const;

  /// Step-by-step execution, used to unfold a run into configurations.
  class Simulation {
   public:
    Simulation(const TapeMachine& machine, std::string_view input1, std::string_view input2);

    /// Applies one rule. Returns false (and changes nothing) when halted.
    bool step();
    bool halted() const;
    std::uint32_t state() const { return state_; }
    std::uint64_t steps() const { return steps_; }
    std::string output() const;
    /// Canonical text of the whole configuration (control state, trimmed
    /// tape contents, head positions).
    std::string configuration() const;

   private:
    struct Tape {
      std::vector<TapeSymbol> right;  // cells 0, 1, 2, ...
      std::vector<TapeSymbol> left;   // cells -1, -2, ...
      std::int64_t head = 0;

      TapeSymbol read() const;
      void write(TapeSymbol s);
    };

    const TapeRule* match() const;

    const TapeMachine* machine_;
    std::vector<Tape> tapes_;
    std::uint32_t state_;
    std::uint64_t steps_ = 0;
  };

 private:
  std::size_t work_ = 2;
  std::uint32_t start_ = 0;
  std::vector<std::string> names_;
  std::vector<bool> accepting_;
  std::vector<TapeRule> rules_;
  std::vector<std::vector<std::size_t>> by_state_;
};

}  // namespace stratbound
