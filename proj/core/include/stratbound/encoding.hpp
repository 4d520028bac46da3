#pragma once

// Canonical words over the ternary alphabet {0, 1, #}.
//
// Indices are written in binary without leading zeros. A sequence is
// "#00#" item1 "#" item2 ... "#" itemN "#01#" (no separator after the last
// item). A model is the concatenation of eight sequences, in this order:
//
//   1. (agent count)
//   2. (state count)
//   3. (initial state)
//   4. valuation:    ((prop, (states...)) ...)      every proposition, by index
//   5. (action count)
//   6. repertoires:  ((agent, state, (actions...)) ...)   agent-major
//   7. transitions:  ((state, (joint...), successor) ...)  table order
//   8. indist:       (((class states...) ...) ...)          per agent
//
// Layout version 1. Names are not encoded.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stratbound/model.hpp"

namespace stratbound {

inline constexpr int kEncodingLayoutVersion = 1;

class TapeWord {
 public:
  TapeWord() = default;
  /// Throws InputError if `symbols` contains anything outside {0,1,#}.
  explicit TapeWord(std::string symbols);

  const std::string& str() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  char operator[](std::size_t i) const { return symbols_[i]; }

  TapeWord& operator+=(const TapeWord& other) {
    symbols_ += other.symbols_;
    return *this;
  }

  friend bool operator==(const TapeWord&, const TapeWord&) = default;
  friend auto operator<=>(const TapeWord&, const TapeWord&) = default;

 private:
  std::string symbols_;
};

TapeWord encode_index(std::uint64_t i);
TapeWord encode_sequence(std::span<const TapeWord> items);
TapeWord encode_model(const Model& m);

/// Canonical state indices of the observations, as one sequence. Every
/// observation must belong to agent a.
TapeWord encode_history(const Model& m, AgentId a, std::span<const Observation> obs);
/// Same word, from canonical indices directly.
TapeWord encode_history_indices(std::span<const StateId> canonical);
/// |encode_history_indices(canonical)| without building the word.
std::size_t encoded_history_length(std::span<const StateId> canonical);

struct EncodingSizes {
  std::size_t enc_model_len = 0;
  std::size_t enc_history_len = 0;
  std::size_t abstract_model_size = 0;
  std::size_t history_len = 0;
};

EncodingSizes measure_sizes(const Model& m, std::span<const Observation> obs);

/// Parsed form of a bracketed word: either a binary atom or a nested list.
struct EncodedItem {
  bool is_list = false;
  std::uint64_t value = 0;
  std::vector<EncodedItem> items;
};

/// Parses one sequence starting at `pos`, advancing past its closing
/// bracket. Throws ParseError (column = symbol offset + 1) on malformed input.
EncodedItem parse_sequence(std::string_view word, std::size_t& pos);

/// Inverse of encode_model. The result carries generated names
/// (a0.., q0.., x0.., p0..) since names are not part of the encoding.
Model decode_model(const TapeWord& word);

/// Inverse of encode_history_indices.
std::vector<StateId> decode_history(const TapeWord& word);

/// True when the two models agree on everything except display names.
bool same_structure(const Model& a, const Model& b);

}  // namespace stratbound
