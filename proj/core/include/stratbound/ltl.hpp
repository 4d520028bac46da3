#pragma once

// LTL objectives over the propositions of a model.
//
// Formulas are stored desugared over  true | p | !f | f & g | X f | f U g.
// Derived operators expand as
//   false = !true        f | g  = !(!f & !g)     f -> g = !(f & !g)
//   f R g = !(!f U !g)   F f    = true U f       G f    = false R f
//
// Surface syntax, loosest first (-> right associative, U and R right
// associative):
//
//   impl   := disj ( "->" impl )?
//   disj   := conj ( "|" conj )*
//   conj   := temp ( "&" temp )*
//   temp   := unary ( ("U" | "R") temp )?
//   unary  := ("!" | "X" | "F" | "G") unary | atom
//   atom   := "true" | "false" | identifier | "(" impl ")"
//
// "&&", "||" and "~" are accepted as synonyms.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stratbound/model.hpp"

namespace stratbound {

enum class FormulaKind : std::uint8_t { truth, prop, neg, conj, next, until };

class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula until(Formula a, Formula b);
  static Formula release(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  FormulaKind kind() const;
  /// Proposition name (kind() == prop).
  const std::string& name() const;
  /// Operands: neg/next have one, conj/until two.
  const Formula& left() const;
  const Formula& right() const;

  /// Distinct proposition names, in first-occurrence order.
  std::vector<std::string> propositions() const;
  /// Core-syntax rendering, fully parenthesized; parse(to_string()) == *this.
  std::string to_string() const;
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Throws ParseError (line 1, column of the offending token).
Formula parse_formula(std::string_view text);

struct LassoPath {
  std::vector<StateId> stem;
  std::vector<StateId> loop;

  friend bool operator==(const LassoPath&, const LassoPath&) = default;
};

/// Throws InputError when consecutive states are not connected by a
/// transition or the loop is empty.
void check_lasso(const Model& m, const LassoPath& path);

/// Exact satisfaction at position 0. Throws InputError for an invalid path or
/// a proposition the model does not define.
bool eval_lasso(const Model& m, const LassoPath& path, const Formula& f);

enum class Verdict3 : std::uint8_t { holds, fails, unknown };
const char* to_string(Verdict3 v);

/// Weak three-valued verdict on a finite prefix. Throws InputError for an
/// empty prefix or an unknown proposition.
Verdict3 eval_bounded(const Model& m, std::span<const StateId> prefix, const Formula& f);

/// Boolean state predicate: built from true, propositions, ! and & only.
bool is_state_formula(const Formula& f);
/// Satisfaction of a state formula at q.
bool eval_state(const Model& m, StateId q, const Formula& f);

/// Recognizes the desugared shapes of F b and G b for state formulas b.
/// Returns the body when the formula has that shape.
std::optional<Formula> match_eventually(const Formula& f);
std::optional<Formula> match_always(const Formula& f);

}  // namespace stratbound
