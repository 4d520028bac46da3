#include "stratbound/tape_machine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stratbound/errors.hpp"

namespace stratbound {

namespace {

std::optional<TapeSymbol> symbol_of(char c) {
  switch (c) {
    case '0': return TapeSymbol::zero;
    case '1': return TapeSymbol::one;
    case '#': return TapeSymbol::hash;
    case '_': return TapeSymbol::blank;
    default: return std::nullopt;
  }
}

char char_of(TapeSymbol s) {
  switch (s) {
    case TapeSymbol::zero: return '0';
    case TapeSymbol::one: return '1';
    case TapeSymbol::hash: return '#';
    case TapeSymbol::blank: return '_';
  }
  return '?';
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream is{std::string(line)};
  std::string w;
  while (is >> w) words.push_back(w);
  return words;
}

bool overlapping(const TapeRule& a, const TapeRule& b) {
  for (std::size_t i = 0; i < a.read.size(); ++i) {
    if (a.read[i] && b.read[i] && *a.read[i] != *b.read[i]) return false;
  }
  return true;
}

}  // namespace

TapeMachine TapeMachine::parse(std::string_view text) {
  TapeMachine tm;
  std::map<std::string, std::uint32_t> ids;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<std::uint32_t>(tm.names_.size()));
    if (inserted) tm.names_.push_back(name);
    return it->second;
  };

  std::optional<std::string> start;
  std::vector<std::string> accept;
  bool saw_rule = false;
  std::size_t line_no = 0;
  std::istringstream input{std::string(text)};
  std::string line;
  while (std::getline(input, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto words = split_words(line);
    if (words[0] == "work") {
      if (saw_rule) throw ParseError("'work' must precede the rules", line_no);
      if (words.size() != 2) throw ParseError("usage: work <count>", line_no);
      try {
        tm.work_ = std::stoul(words[1]);
      } catch (const std::exception&) {
        throw ParseError("work tape count must be a number", line_no);
      }
      if (tm.work_ > 16) throw ParseError("at most 16 work tapes", line_no);
      continue;
    }
    if (words[0] == "start") {
      if (words.size() != 2) throw ParseError("usage: start <state>", line_no);
      start = words[1];
      continue;
    }
    if (words[0] == "accept") {
      accept.insert(accept.end(), words.begin() + 1, words.end());
      continue;
    }
    if (words.size() != 6 || words[2] != "->") {
      throw ParseError("expected '<state> <read> -> <next> <write> <move>'", line_no);
    }
    saw_rule = true;
    TapeRule rule;
    rule.state = intern(words[0]);
    rule.next = intern(words[3]);
    const std::string& read = words[1];
    const std::string& write = words[4];
    const std::string& move = words[5];
    if (read.size() != 2 + tm.work_) {
      throw ParseError("read pattern needs " + std::to_string(2 + tm.work_) + " symbols", line_no);
    }
    if (write.size() != 1 + tm.work_) {
      throw ParseError("write pattern needs " + std::to_string(1 + tm.work_) + " symbols", line_no);
    }
    if (move.size() != 3 + tm.work_) {
      throw ParseError("move pattern needs " + std::to_string(3 + tm.work_) + " symbols", line_no);
    }
    for (char c : read) {
      if (c == '*') rule.read.emplace_back();
      else if (auto s = symbol_of(c)) rule.read.emplace_back(*s);
      else throw ParseError(std::string("bad read symbol '") + c + "'", line_no);
    }
    for (char c : write) {
      if (c == '*') rule.write.emplace_back();
      else if (auto s = symbol_of(c)) rule.write.emplace_back(*s);
      else throw ParseError(std::string("bad write symbol '") + c + "'", line_no);
    }
    for (char c : move) {
      switch (c) {
        case 'L': rule.move.push_back(HeadMove::left); break;
        case 'R': rule.move.push_back(HeadMove::right); break;
        case 'S': rule.move.push_back(HeadMove::stay); break;
        default: throw ParseError(std::string("bad move '") + c + "'", line_no);
      }
    }
    if (rule.write[0] == TapeSymbol::blank) throw ParseError("the output tape cannot be erased", line_no);
    const bool writes_output = rule.write[0].has_value();
    if (rule.move[2] == HeadMove::left || (rule.move[2] == HeadMove::right) != writes_output) {
      throw ParseError("the output head moves right exactly when the rule writes output", line_no);
    }
    tm.rules_.push_back(std::move(rule));
  }
  if (tm.rules_.empty() && !start) throw ParseError("machine has no rules", line_no);

  tm.start_ = start ? intern(*start) : tm.rules_.front().state;
  tm.accepting_.assign(tm.names_.size(), false);
  for (const auto& name : accept) {
    const auto id = intern(name);
    tm.accepting_.resize(tm.names_.size(), false);
    tm.accepting_[id] = true;
  }
  tm.by_state_.assign(tm.names_.size(), {});
  for (std::size_t i = 0; i < tm.rules_.size(); ++i) {
    auto& bucket = tm.by_state_[tm.rules_[i].state];
    for (std::size_t j : bucket) {
      if (overlapping(tm.rules_[i], tm.rules_[j])) {
        throw ParseError("rules for state '" + tm.names_[tm.rules_[i].state] + "' overlap (nondeterministic)", 0);
      }
    }
    bucket.push_back(i);
  }
  return tm;
}

bool TapeMachine::is_accepting(std::uint32_t state) const {
  return state < accepting_.size() && accepting_[state];
}

std::string TapeMachine::to_text() const {
  std::ostringstream os;
  os << "work " << work_ << "\n";
  os << "start " << names_[start_] << "\n";
  std::string acc;
  for (std::uint32_t s = 0; s < accepting_.size(); ++s) {
    if (accepting_[s]) acc += " " + names_[s];
  }
  if (!acc.empty()) os << "accept" << acc << "\n";
  for (const auto& r : rules_) {
    os << names_[r.state] << ' ';
    for (const auto& s : r.read) os << (s ? char_of(*s) : '*');
    os << " -> " << names_[r.next] << ' ';
    for (const auto& s : r.write) os << (s ? char_of(*s) : '*');
    os << ' ';
    for (auto mv : r.move) os << (mv == HeadMove::left ? 'L' : mv == HeadMove::right ? 'R' : 'S');
    os << "\n";
  }
  return os.str();
}

TapeMachine::Execution TapeMachine::execute(std::string_view input1, std::string_view input2,
                                            std::uint64_t budget) const {
  Simulation sim(*this, input1, input2);
  while (!sim.halted() && sim.steps() < budget) sim.step();
  Execution ex;
  ex.halted = sim.halted();
  ex.steps = sim.steps();
  ex.final_state = sim.state();
  ex.output = sim.output();
  return ex;
}

TapeSymbol TapeMachine::Simulation::Tape::read() const {
  if (head >= 0) {
    const auto i = static_cast<std::size_t>(head);
    return i < right.size() ? right[i] : TapeSymbol::blank;
  }
  const auto i = static_cast<std::size_t>(-head - 1);
  return i < left.size() ? left[i] : TapeSymbol::blank;
}

void TapeMachine::Simulation::Tape::write(TapeSymbol s) {
  auto& cells = head >= 0 ? right : left;
  const auto i = static_cast<std::size_t>(head >= 0 ? head : -head - 1);
  if (i >= cells.size()) {
    if (s == TapeSymbol::blank) return;
    cells.resize(i + 1, TapeSymbol::blank);
  }
  cells[i] = s;
}

TapeMachine::Simulation::Simulation(const TapeMachine& machine, std::string_view input1, std::string_view input2)
    : machine_(&machine), tapes_(machine.tape_count()), state_(machine.start_) {
  for (char c : input1) tapes_[0].right.push_back(*symbol_of(c));
  for (char c : input2) tapes_[1].right.push_back(*symbol_of(c));
}

const TapeRule* TapeMachine::Simulation::match() const {
  if (state_ >= machine_->by_state_.size()) return nullptr;
  const std::size_t work = machine_->work_;
  for (std::size_t idx : machine_->by_state_[state_]) {
    const TapeRule& r = machine_->rules_[idx];
    bool ok = true;
    for (std::size_t i = 0; i < 2 + work && ok; ++i) {
      const std::size_t tape = i < 2 ? i : i + 1;  // skip the output tape
      if (r.read[i] && *r.read[i] != tapes_[tape].read()) ok = false;
    }
    if (ok) return &r;
  }
  return nullptr;
}

bool TapeMachine::Simulation::halted() const { return match() == nullptr; }

bool TapeMachine::Simulation::step() {
  const TapeRule* r = match();
  if (!r) return false;
  for (std::size_t i = 0; i < r->write.size(); ++i) {
    if (r->write[i]) tapes_[i + 2].write(*r->write[i]);
  }
  for (std::size_t t = 0; t < tapes_.size(); ++t) {
    switch (r->move[t]) {
      case HeadMove::left: --tapes_[t].head; break;
      case HeadMove::right: ++tapes_[t].head; break;
      case HeadMove::stay: break;
    }
  }
  state_ = r->next;
  ++steps_;
  return true;
}

std::string TapeMachine::Simulation::output() const {
  std::string out;
  for (TapeSymbol s : tapes_[2].right) out.push_back(char_of(s));
  return out;
}

std::string TapeMachine::Simulation::configuration() const {
  std::ostringstream os;
  os << machine_->names_[state_];
  for (std::size_t t = 2; t < tapes_.size(); ++t) {
    const Tape& tape = tapes_[t];
    std::string cells;
    for (auto it = tape.left.rbegin(); it != tape.left.rend(); ++it) cells.push_back(char_of(*it));
    for (TapeSymbol s : tape.right) cells.push_back(char_of(s));
    const auto offset = static_cast<std::int64_t>(tape.left.size());
    // trim blanks, keeping head position relative to the first nonblank cell
    const auto first = cells.find_first_not_of('_');
    std::int64_t origin = -offset;
    if (first == std::string::npos) {
      cells.clear();
    } else {
      const auto last = cells.find_last_not_of('_');
      origin += static_cast<std::int64_t>(first);
      cells = cells.substr(first, last - first + 1);
    }
    os << '|' << cells << '@' << (tape.head - origin);
  }
  os << "|in@" << tapes_[0].head << ',' << tapes_[1].head;
  return os.str();
}

}  // namespace stratbound
