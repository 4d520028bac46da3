#include "stratbound/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "stratbound/errors.hpp"

namespace stratbound {

namespace {

std::vector<int> normalize_clause(std::uint32_t variables, std::vector<int> clause) {
  if (clause.empty()) throw InputError("empty clause");
  for (int lit : clause) {
    if (lit == 0) throw InputError("literal 0 inside a clause");
    if (static_cast<std::uint32_t>(std::abs(lit)) > variables) {
      throw InputError("literal " + std::to_string(lit) + " exceeds the variable count");
    }
  }
  std::sort(clause.begin(), clause.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 0; i + 1 < clause.size(); ++i) {
    if (std::abs(clause[i]) == std::abs(clause[i + 1])) {
      throw InputError("tautological clause mentions x" + std::to_string(std::abs(clause[i])) +
                       " with both polarities");
    }
  }
  return clause;
}

}  // namespace

Cnf::Cnf(std::uint32_t variables, std::vector<std::vector<int>> clauses) : variables_(variables) {
  if (variables > 30) throw InputError("at most 30 variables");
  clauses_.reserve(clauses.size());
  for (auto& c : clauses) clauses_.push_back(normalize_clause(variables, std::move(c)));
}

bool Cnf::satisfied_by(const std::vector<bool>& assignment) const {
  if (assignment.size() != variables_) throw InputError("assignment has the wrong number of variables");
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const std::vector<int>& c) {
    return std::any_of(c.begin(), c.end(), [&](int lit) {
      const bool v = assignment[static_cast<std::size_t>(std::abs(lit) - 1)];
      return lit > 0 ? v : !v;
    });
  });
}

std::vector<bool> Cnf::find_model() const {
  std::vector<bool> a(variables_);
  for (std::uint64_t bits = 0; bits < (1ULL << variables_); ++bits) {
    for (std::uint32_t j = 0; j < variables_; ++j) a[j] = ((bits >> j) & 1U) != 0;
    if (satisfied_by(a)) return a;
  }
  return {};
}

bool Cnf::satisfiable() const { return clauses_.empty() || !find_model().empty(); }

std::string Cnf::to_dimacs() const {
  std::ostringstream os;
  os << "p cnf " << variables_ << ' ' << clauses_.size() << '\n';
  for (const auto& c : clauses_) {
    for (int lit : c) os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream input{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  long variables = 0, declared = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  std::size_t clause_line = 0;
  while (std::getline(input, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c') continue;
    if (line[first] == '%') break;
    std::istringstream words(line);
    if (line[first] == 'p') {
      if (have_header) throw ParseError("duplicate problem line", line_no);
      std::string p, fmt;
      if (!(words >> p >> fmt >> variables >> declared) || p != "p" || fmt != "cnf" || variables < 0 ||
          declared < 0) {
        throw ParseError("expected 'p cnf <variables> <clauses>'", line_no);
      }
      std::string extra;
      if (words >> extra) throw ParseError("trailing text after the problem line", line_no);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before the problem line", line_no);
    std::string w;
    while (words >> w) {
      char* end = nullptr;
      const long lit = std::strtol(w.c_str(), &end, 10);
      if (*end != '\0' || end == w.c_str()) throw ParseError("bad literal '" + w + "'", line_no);
      if (lit == 0) {
        if (current.empty()) throw ParseError("empty clause", line_no);
        try {
          clauses.push_back(normalize_clause(static_cast<std::uint32_t>(variables), std::move(current)));
        } catch (const InputError& e) {
          throw ParseError(e.what(), clause_line);
        }
        current.clear();
        continue;
      }
      if (std::labs(lit) > variables) throw ParseError("literal " + w + " exceeds the variable count", line_no);
      if (current.empty()) clause_line = line_no;
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!have_header) throw ParseError("missing problem line", line_no);
  if (!current.empty()) throw ParseError("last clause is not terminated by 0", line_no);
  if (static_cast<long>(clauses.size()) != declared) {
    throw ParseError("problem line declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(clauses.size()),
                     line_no);
  }
  if (variables > 30) throw ParseError("at most 30 variables", 1);
  return Cnf(static_cast<std::uint32_t>(variables), std::move(clauses));
}

}  // namespace stratbound
