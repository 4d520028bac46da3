#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stratbound {

/// CNF over variables 1..variables. Clauses are normalized on construction:
/// one literal per variable, sorted by variable.
class Cnf {
 public:
  Cnf() = default;
  /// Throws InputError on empty clauses, zero or out-of-range literals, and
  /// tautological clauses (x and -x together).
  Cnf(std::uint32_t variables, std::vector<std::vector<int>> clauses);

  std::uint32_t variables() const { return variables_; }
  const std::vector<std::vector<int>>& clauses() const { return clauses_; }

  /// assignment[j] is the value of x_{j+1}.
  bool satisfied_by(const std::vector<bool>& assignment) const;
  /// Truth-table search; first satisfying assignment in counting order
  /// (x1 is the least significant bit), or empty.
  std::vector<bool> find_model() const;
  bool satisfiable() const;

  std::string to_dimacs() const;

  friend bool operator==(const Cnf&, const Cnf&) = default;

 private:
  std::uint32_t variables_ = 0;
  std::vector<std::vector<int>> clauses_;
};

/// DIMACS "p cnf V C" format; `c` comment lines, clauses terminated by 0 and
/// free to span lines, optional trailing "%" line. Throws ParseError with the
/// line number.
Cnf parse_dimacs(std::string_view text);

}  // namespace stratbound
