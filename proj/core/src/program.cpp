#include "stratbound/program.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "stratbound/errors.hpp"

namespace stratbound {

enum class StrategyProgram::Op : std::uint8_t {
  set, add, sub, mul, div, mod, shl, shr, band,
  jmp, jeq, jne, jlt, jle, jgt, jge,
  call, ret, push, pop,
  alloc, ld, st, alen,
  len1, sym1, len2, sym2,
  hlen, hobs, nagents, nstates, nactions, nprops, init, agent,
  replen, rep, succ, val, obs,
  emit,
};

namespace {

using Op = StrategyProgram::Op;
using Operand = StrategyProgram::Operand;

// d = destination register, v = register or literal, L = label, A = array,
// + = one or more further v operands
struct OpInfo {
  Op op;
  const char* signature;
};

const std::unordered_map<std::string_view, OpInfo>& op_table() {
  static const std::unordered_map<std::string_view, OpInfo> table = {
      {"set", {Op::set, "dv"}},       {"add", {Op::add, "dvv"}},     {"sub", {Op::sub, "dvv"}},
      {"mul", {Op::mul, "dvv"}},      {"div", {Op::div, "dvv"}},     {"mod", {Op::mod, "dvv"}},
      {"shl", {Op::shl, "dvv"}},      {"shr", {Op::shr, "dvv"}},     {"band", {Op::band, "dvv"}},
      {"jmp", {Op::jmp, "L"}},        {"jeq", {Op::jeq, "vvL"}},     {"jne", {Op::jne, "vvL"}},
      {"jlt", {Op::jlt, "vvL"}},      {"jle", {Op::jle, "vvL"}},     {"jgt", {Op::jgt, "vvL"}},
      {"jge", {Op::jge, "vvL"}},      {"call", {Op::call, "L"}},     {"ret", {Op::ret, ""}},
      {"push", {Op::push, "v"}},      {"pop", {Op::pop, "d"}},       {"alloc", {Op::alloc, "Av"}},
      {"ld", {Op::ld, "dAv"}},        {"st", {Op::st, "Avv"}},       {"alen", {Op::alen, "dA"}},
      {"len1", {Op::len1, "d"}},      {"sym1", {Op::sym1, "dv"}},    {"len2", {Op::len2, "d"}},
      {"sym2", {Op::sym2, "dv"}},     {"hlen", {Op::hlen, "d"}},     {"hobs", {Op::hobs, "dv"}},
      {"nagents", {Op::nagents, "d"}}, {"nstates", {Op::nstates, "d"}}, {"nactions", {Op::nactions, "d"}},
      {"nprops", {Op::nprops, "d"}},  {"init", {Op::init, "d"}},     {"agent", {Op::agent, "d"}},
      {"replen", {Op::replen, "dvv"}}, {"rep", {Op::rep, "dvvv"}},   {"succ", {Op::succ, "dv+"}},
      {"val", {Op::val, "dvv"}},      {"obs", {Op::obs, "dvv"}},     {"emit", {Op::emit, "v"}},
  };
  return table;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return true;
}

std::optional<Int> parse_literal(std::string_view s) {
  std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
  }
  return Int(Int::Big(std::string(s)));
}

std::vector<std::string> tokens(std::string_view line) {
  std::string cleaned(line);
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(cleaned);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fault(std::size_t line, const std::string& msg) {
  throw ProgramFault("program fault at line " + std::to_string(line) + ": " + msg);
}

std::int64_t small_or_fault(const Int& v, std::size_t line, const char* what) {
  if (auto s = v.to_int64()) return *s;
  fault(line, std::string(what) + " out of range");
}

}  // namespace

StrategyProgram StrategyProgram::parse(std::string_view text) {
  StrategyProgram p;
  p.source_ = std::string(text);
  std::map<std::string, std::uint32_t, std::less<>> regs, arrays, labels;
  std::map<std::string, std::uint32_t, std::less<>> label_uses;
  std::vector<std::pair<std::size_t, std::size_t>> fixups;  // (instruction, arg)
  std::vector<std::string> fixup_names;
  std::vector<std::size_t> fixup_lines;

  auto reg = [&](const std::string& name) {
    auto [it, inserted] = regs.emplace(name, static_cast<std::uint32_t>(p.registers_.size()));
    if (inserted) p.registers_.push_back(name);
    return it->second;
  };
  auto array = [&](const std::string& name) {
    auto [it, inserted] = arrays.emplace(name, static_cast<std::uint32_t>(p.arrays_.size()));
    if (inserted) {
      p.arrays_.push_back(name);
      p.data_.emplace_back();
    }
    return it->second;
  };

  std::istringstream input(p.source_);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto c = line.find(';'); c != std::string_view::npos) line = line.substr(0, c);
    auto words = tokens(line);
    if (words.empty()) continue;

    while (!words.empty() && words[0].size() > 1 && words[0].back() == ':') {
      const std::string name = words[0].substr(0, words[0].size() - 1);
      if (!is_identifier(name)) throw ParseError("bad label '" + name + "'", line_no);
      if (!labels.emplace(name, static_cast<std::uint32_t>(p.code_.size())).second) {
        throw ParseError("duplicate label '" + name + "'", line_no);
      }
      words.erase(words.begin());
    }
    if (words.empty()) continue;

    if (words[0] == ".data") {
      if (words.size() < 2 || !is_identifier(words[1])) throw ParseError("usage: .data <name> <values...>", line_no);
      const auto a = array(words[1]);
      if (!p.data_[a].empty()) throw ParseError("array '" + words[1] + "' already has data", line_no);
      for (std::size_t i = 2; i < words.size(); ++i) {
        auto v = parse_literal(words[i]);
        if (!v) throw ParseError("bad literal '" + words[i] + "'", line_no);
        p.data_[a].push_back(*v);
      }
      continue;
    }

    auto it = op_table().find(words[0]);
    if (it == op_table().end()) throw ParseError("unknown instruction '" + words[0] + "'", line_no);
    const std::string_view sig = it->second.signature;
    const bool variadic = !sig.empty() && sig.back() == '+';
    const std::size_t fixed = variadic ? sig.size() - 1 : sig.size();
    const std::size_t given = words.size() - 1;
    if (variadic ? given < fixed + 1 : given != fixed) {
      throw ParseError("wrong number of operands for '" + words[0] + "'", line_no);
    }

    Instruction ins{it->second.op, {}, line_no};
    for (std::size_t i = 0; i < given; ++i) {
      const char kind = i < fixed ? sig[i] : 'v';
      const std::string& w = words[i + 1];
      switch (kind) {
        case 'd':
          if (!is_identifier(w)) throw ParseError("expected a register, got '" + w + "'", line_no);
          ins.args.push_back({Operand::reg, reg(w)});
          break;
        case 'v':
          if (auto lit = parse_literal(w)) {
            ins.args.push_back({Operand::imm, static_cast<std::uint32_t>(p.constants_.size())});
            p.constants_.push_back(*lit);
          } else if (is_identifier(w)) {
            ins.args.push_back({Operand::reg, reg(w)});
          } else {
            throw ParseError("bad operand '" + w + "'", line_no);
          }
          break;
        case 'A':
          if (!is_identifier(w)) throw ParseError("expected an array name, got '" + w + "'", line_no);
          ins.args.push_back({Operand::array, array(w)});
          break;
        case 'L':
          if (!is_identifier(w)) throw ParseError("expected a label, got '" + w + "'", line_no);
          fixups.emplace_back(p.code_.size(), ins.args.size());
          fixup_names.push_back(w);
          fixup_lines.push_back(line_no);
          ins.args.push_back({Operand::label, 0});
          break;
      }
    }
    switch (ins.op) {
      case Op::len1: case Op::sym1: p.reads_tape1_ = true; break;
      case Op::len2: case Op::sym2: p.reads_tape2_ = true; break;
      default: break;
    }
    p.code_.push_back(std::move(ins));
  }

  for (std::size_t f = 0; f < fixups.size(); ++f) {
    auto it = labels.find(fixup_names[f]);
    if (it == labels.end()) throw ParseError("undefined label '" + fixup_names[f] + "'", fixup_lines[f]);
    p.code_[fixups[f].first].args[fixups[f].second].index = it->second;
  }
  if (p.code_.empty()) throw ParseError("program has no instructions", line_no);
  return p;
}

ProgramResult StrategyProgram::execute(const ProgramInput& in, std::uint64_t budget) const {
  if (!in.model || !in.canonical) throw std::invalid_argument("program input needs a decoded model");
  const Model& m = *in.model;
  std::vector<Int> regs(registers_.size());
  std::vector<std::vector<Int>> arrays = data_;
  std::vector<std::size_t> calls;
  std::vector<Int> stack;
  std::uint64_t steps = 0;
  std::size_t pc = 0;

  auto value = [&](const Operand& o) -> const Int& {
    return o.kind == Operand::imm ? constants_[o.index] : regs[o.index];
  };
  auto index_of = [&](const Operand& o, std::size_t line) -> std::int64_t {
    return small_or_fault(value(o), line, "index");
  };
  auto tape_symbol = [](std::string_view tape, std::int64_t i) -> std::int64_t {
    if (i < 0 || static_cast<std::size_t>(i) >= tape.size()) return -1;
    const char c = tape[static_cast<std::size_t>(i)];
    return c == '0' ? 0 : c == '1' ? 1 : 2;
  };
  auto in_range = [](std::int64_t v, std::size_t bound) { return v >= 0 && static_cast<std::uint64_t>(v) < bound; };

  std::vector<ActionId> joint;
  for (;;) {
    if (pc >= code_.size()) {
      const std::size_t last = code_.back().line;
      fault(last, "fell off the end of the program");
    }
    if (steps == budget) throw BudgetExceeded("step budget of " + std::to_string(budget) + " exhausted");
    ++steps;
    const Instruction& ins = code_[pc];
    const auto& a = ins.args;
    ++pc;
    switch (ins.op) {
      case Op::set: regs[a[0].index] = value(a[1]); break;
      case Op::add: regs[a[0].index] = value(a[1]) + value(a[2]); break;
      case Op::sub: regs[a[0].index] = value(a[1]) - value(a[2]); break;
      case Op::mul: regs[a[0].index] = value(a[1]) * value(a[2]); break;
      case Op::div:
      case Op::mod:
      case Op::shl:
      case Op::shr:
      case Op::band:
        try {
          const Int& x = value(a[1]);
          const Int& y = value(a[2]);
          Int r;
          switch (ins.op) {
            case Op::div: r = x / y; break;
            case Op::mod: r = x % y; break;
            case Op::shl: r = x.shifted_left(y); break;
            case Op::shr: r = x.shifted_right(y); break;
            default: r = x.bit_and(y); break;
          }
          regs[a[0].index] = std::move(r);
        } catch (const std::domain_error& e) {
          fault(ins.line, e.what());
        }
        break;
      case Op::jmp: pc = a[0].index; break;
      case Op::jeq: if (value(a[0]) == value(a[1])) pc = a[2].index; break;
      case Op::jne: if (value(a[0]) != value(a[1])) pc = a[2].index; break;
      case Op::jlt: if (value(a[0]) < value(a[1])) pc = a[2].index; break;
      case Op::jle: if (value(a[0]) <= value(a[1])) pc = a[2].index; break;
      case Op::jgt: if (value(a[0]) > value(a[1])) pc = a[2].index; break;
      case Op::jge: if (value(a[0]) >= value(a[1])) pc = a[2].index; break;
      case Op::call:
        if (calls.size() >= (1U << 20U)) fault(ins.line, "call stack overflow");
        calls.push_back(pc);
        pc = a[0].index;
        break;
      case Op::ret:
        if (calls.empty()) fault(ins.line, "ret with empty call stack");
        pc = calls.back();
        calls.pop_back();
        break;
      case Op::push:
        if (stack.size() >= (1U << 24U)) fault(ins.line, "value stack overflow");
        stack.push_back(value(a[0]));
        break;
      case Op::pop:
        if (stack.empty()) fault(ins.line, "pop from empty stack");
        regs[a[0].index] = std::move(stack.back());
        stack.pop_back();
        break;
      case Op::alloc: {
        const auto n = index_of(a[1], ins.line);
        if (n < 0 || n > (1 << 24)) fault(ins.line, "bad array size");
        arrays[a[0].index].assign(static_cast<std::size_t>(n), Int(0));
        break;
      }
      case Op::ld: {
        const auto& arr = arrays[a[1].index];
        const auto i = index_of(a[2], ins.line);
        if (!in_range(i, arr.size())) fault(ins.line, "array index out of range");
        regs[a[0].index] = arr[static_cast<std::size_t>(i)];
        break;
      }
      case Op::st: {
        auto& arr = arrays[a[0].index];
        const auto i = index_of(a[1], ins.line);
        if (!in_range(i, arr.size())) fault(ins.line, "array index out of range");
        arr[static_cast<std::size_t>(i)] = value(a[2]);
        break;
      }
      case Op::alen: regs[a[0].index] = Int(static_cast<std::int64_t>(arrays[a[1].index].size())); break;
      case Op::len1: regs[a[0].index] = Int(static_cast<std::int64_t>(in.tape1.size())); break;
      case Op::len2: regs[a[0].index] = Int(static_cast<std::int64_t>(in.tape2.size())); break;
      case Op::sym1: regs[a[0].index] = tape_symbol(in.tape1, index_of(a[1], ins.line)); break;
      case Op::sym2: regs[a[0].index] = tape_symbol(in.tape2, index_of(a[1], ins.line)); break;
      case Op::hlen: regs[a[0].index] = Int(static_cast<std::int64_t>(in.history.size())); break;
      case Op::hobs: {
        const auto t = index_of(a[1], ins.line);
        if (!in_range(t, in.history.size())) fault(ins.line, "history position out of range");
        regs[a[0].index] = Int(static_cast<std::int64_t>(in.history[static_cast<std::size_t>(t)]));
        break;
      }
      case Op::nagents: regs[a[0].index] = Int(static_cast<std::int64_t>(m.agents.size())); break;
      case Op::nstates: regs[a[0].index] = Int(static_cast<std::int64_t>(m.states.size())); break;
      case Op::nactions: regs[a[0].index] = Int(static_cast<std::int64_t>(m.actions.size())); break;
      case Op::nprops: regs[a[0].index] = Int(static_cast<std::int64_t>(m.propositions.size())); break;
      case Op::init: regs[a[0].index] = Int(static_cast<std::int64_t>(m.initial)); break;
      case Op::agent: regs[a[0].index] = Int(in.agent); break;
      case Op::replen:
      case Op::rep: {
        const auto ag = index_of(a[1], ins.line);
        const auto q = index_of(a[2], ins.line);
        if (!in_range(ag, m.agents.size()) || !in_range(q, m.states.size())) fault(ins.line, "repertoire lookup out of range");
        const auto& r = m.repertoire[static_cast<std::size_t>(ag)][static_cast<std::size_t>(q)];
        if (ins.op == Op::replen) {
          regs[a[0].index] = Int(static_cast<std::int64_t>(r.size()));
        } else {
          const auto i = index_of(a[3], ins.line);
          if (!in_range(i, r.size())) fault(ins.line, "repertoire index out of range");
          regs[a[0].index] = Int(static_cast<std::int64_t>(r[static_cast<std::size_t>(i)]));
        }
        break;
      }
      case Op::succ: {
        const auto q = index_of(a[1], ins.line);
        std::int64_t result = -1;
        if (in_range(q, m.states.size()) && a.size() - 2 == m.agents.size()) {
          joint.clear();
          bool ok = true;
          for (std::size_t i = 2; i < a.size() && ok; ++i) {
            const auto act = value(a[i]).to_int64();
            ok = act && in_range(*act, m.actions.size());
            if (ok) joint.push_back(static_cast<ActionId>(*act));
          }
          if (ok) {
            if (auto t = find_successor(m, static_cast<StateId>(q), joint)) result = *t;
          }
        }
        regs[a[0].index] = Int(result);
        break;
      }
      case Op::val: {
        const auto p = index_of(a[1], ins.line);
        const auto q = index_of(a[2], ins.line);
        const bool h = in_range(p, m.valuation.size()) && in_range(q, m.states.size()) &&
                       holds(m, static_cast<PropId>(p), static_cast<StateId>(q));
        regs[a[0].index] = Int(h ? 1 : 0);
        break;
      }
      case Op::obs: {
        const auto ag = index_of(a[1], ins.line);
        const auto q = index_of(a[2], ins.line);
        if (!in_range(ag, m.agents.size()) || !in_range(q, m.states.size())) fault(ins.line, "observation lookup out of range");
        regs[a[0].index] = Int(static_cast<std::int64_t>((*in.canonical)[static_cast<std::size_t>(ag)][static_cast<std::size_t>(q)]));
        break;
      }
      case Op::emit: return ProgramResult{value(a[0]), steps};
    }
  }
}

}  // namespace stratbound
