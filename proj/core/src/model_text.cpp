#include "stratbound/model_text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "stratbound/errors.hpp"

namespace stratbound {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(b, i - b), b + 1});
  }
  return out;
}

const char* const kSections[] = {"agents",      "actions",     "propositions", "states",  "initial",
                                 "valuation",   "repertoire",  "transitions",  "indist",  "counters",
                                 "init"};

bool reserved(std::string_view s) {
  return s == "=" || s == "|" || s == "->" || s == "when" || s == "do";
}

bool valid_name(std::string_view s) {
  if (s.empty() || reserved(s) || s.back() == ':' || s.front() == '#') return false;
  return std::none_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  explicit Parser(std::string_view text, bool allow_counters) : allow_counters_(allow_counters) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto toks = tokenize(line);
      if (toks.empty() || toks.front().text.front() == '#') continue;
      lines_.push_back({no, std::move(toks)});
    }
  }

  CounterModel parse() {
    std::string section;
    std::map<std::string, std::size_t> seen;
    for (auto& [no, toks] : lines_) {
      line_ = no;
      const std::string& head = toks.front().text;
      if (head.back() == ':' && is_section(head.substr(0, head.size() - 1))) {
        section = head.substr(0, head.size() - 1);
        if (seen.count(section)) fail("duplicate section '" + section + "'", toks.front().column);
        seen[section] = no;
        std::vector<Token> rest(toks.begin() + 1, toks.end());
        header(section, rest, toks.front().column);
        continue;
      }
      if (section.empty()) fail("expected a section header such as 'agents:'", toks.front().column);
      body(section, toks);
    }
    line_ = lines_.empty() ? 0 : lines_.back().first;
    for (const char* need : {"agents", "actions", "states", "initial"}) {
      if (!seen.count(need)) fail(std::string("missing section '") + need + ":'", 0);
    }
    if (seen.count("counters") && !allow_counters_) fail("counter sections need a counter-model reader", 0);
    if (cm_.counters > 0 && cm_.initial.size() != cm_.counters) {
      line_ = seen.count("init") ? seen["init"] : 0;
      fail("init: needs " + std::to_string(cm_.counters) + " values", 0);
    }
    if (cm_.counters == 0 && seen.count("init")) {
      line_ = seen["init"];
      fail("init: without counters:", 0);
    }
    finish();
    return std::move(cm_);
  }

 private:
  static bool is_section(const std::string& s) {
    return std::any_of(std::begin(kSections), std::end(kSections), [&](const char* k) { return s == k; });
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t col) const { throw ParseError(msg, line_, col); }

  std::vector<std::string> names(const std::vector<Token>& toks, const char* what) {
    std::vector<std::string> out;
    for (const auto& t : toks) {
      if (!valid_name(t.text)) fail(std::string("bad ") + what + " name '" + t.text + "'", t.column);
      if (std::find(out.begin(), out.end(), t.text) != out.end()) {
        fail(std::string("duplicate ") + what + " '" + t.text + "'", t.column);
      }
      out.push_back(t.text);
    }
    return out;
  }

  Model& m() { return cm_.skeleton; }

  void need(bool declared, const char* what, std::size_t col) {
    if (!declared) fail(std::string(what) + " must be declared first", col);
  }

  std::uint32_t lookup(const std::map<std::string, std::uint32_t>& table, const Token& t, const char* what) {
    auto it = table.find(t.text);
    if (it == table.end()) fail(std::string("unknown ") + what + " '" + t.text + "'", t.column);
    return it->second;
  }

  static std::map<std::string, std::uint32_t> index(const std::vector<std::string>& v) {
    std::map<std::string, std::uint32_t> out;
    for (std::uint32_t i = 0; i < v.size(); ++i) out[v[i]] = i;
    return out;
  }

  std::uint32_t number(const Token& t) {
    if (t.text.empty() || t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail("expected a nonnegative integer, got '" + t.text + "'", t.column);
    }
    return static_cast<std::uint32_t>(std::stoul(t.text));
  }

  void header(const std::string& s, const std::vector<Token>& rest, std::size_t col) {
    const bool list = s == "agents" || s == "actions" || s == "propositions" || s == "states" || s == "initial" ||
                      s == "counters" || s == "init";
    if (!list && !rest.empty()) fail("section '" + s + ":' takes its entries on the following lines", rest[0].column);
    if (s == "agents") {
      m().agents = names(rest, "agent");
      agents_ = index(m().agents);
    } else if (s == "actions") {
      m().actions = names(rest, "action");
      actions_ = index(m().actions);
    } else if (s == "propositions") {
      m().propositions = names(rest, "proposition");
      props_ = index(m().propositions);
      m().valuation.assign(m().propositions.size(), {});
    } else if (s == "states") {
      m().states = names(rest, "state");
      states_ = index(m().states);
    } else if (s == "initial") {
      need(!m().states.empty(), "states", col);
      if (rest.size() != 1) fail("initial: takes exactly one state", col);
      m().initial = lookup(states_, rest[0], "state");
    } else if (s == "counters") {
      if (!allow_counters_) fail("counter sections need a counter-model reader", col);
      if (rest.size() != 1) fail("counters: takes one number", col);
      cm_.counters = number(rest[0]);
      if (cm_.counters > 8) fail("at most 8 counters", rest[0].column);
    } else if (s == "init") {
      if (!allow_counters_) fail("counter sections need a counter-model reader", col);
      for (const auto& t : rest) cm_.initial.push_back(number(t));
    } else {
      need(!m().agents.empty(), "agents", col);
      need(!m().states.empty(), "states", col);
      if (s == "repertoire") {
        m().repertoire.assign(m().agents.size(), std::vector<std::vector<ActionId>>(m().states.size()));
      } else if (s == "transitions") {
        need(!m().actions.empty(), "actions", col);
        rows_.assign(m().states.size(), {});
      } else if (s == "indist") {
        indist_.assign(m().agents.size(), {});
      }
    }
  }

  void body(const std::string& s, const std::vector<Token>& toks) {
    if (s == "valuation") {
      if (toks.size() < 2 || toks[1].text != "=") fail("expected '<proposition> = <states...>'", toks[0].column);
      const auto p = lookup(props_, toks[0], "proposition");
      if (valued_[p]++) fail("proposition listed twice", toks[0].column);
      for (std::size_t i = 2; i < toks.size(); ++i) m().valuation[p].push_back(lookup(states_, toks[i], "state"));
    } else if (s == "repertoire") {
      if (toks.size() < 3 || toks[2].text != "=") fail("expected '<agent> <state> = <actions...>'", toks[0].column);
      const auto a = lookup(agents_, toks[0], "agent");
      const auto q = lookup(states_, toks[1], "state");
      auto& rep = m().repertoire[a][q];
      if (!rep.empty()) fail("repertoire listed twice", toks[0].column);
      for (std::size_t i = 3; i < toks.size(); ++i) rep.push_back(lookup(actions_, toks[i], "action"));
      if (rep.empty()) fail("empty repertoire", toks[2].column);
    } else if (s == "transitions") {
      transition(toks);
    } else if (s == "indist") {
      if (toks.size() < 2 || toks[1].text != "=") fail("expected '<agent> = <states> | <states> ...'", toks[0].column);
      const auto a = lookup(agents_, toks[0], "agent");
      std::vector<StateId> cls;
      for (std::size_t i = 2; i <= toks.size(); ++i) {
        if (i == toks.size() || toks[i].text == "|") {
          if (cls.empty()) fail("empty indistinguishability class", i < toks.size() ? toks[i].column : 0);
          indist_[a].push_back(std::move(cls));
          cls.clear();
          continue;
        }
        cls.push_back(lookup(states_, toks[i], "state"));
      }
    } else {
      fail("section '" + s + ":' takes no entry lines", toks[0].column);
    }
  }

  void transition(const std::vector<Token>& toks) {
    const std::size_t k = m().agents.size();
    if (toks.size() < k + 3 || toks[k + 1].text != "->") {
      fail("expected '<state> <action per agent> -> <state>'", toks[0].column);
    }
    const auto q = lookup(states_, toks[0], "state");
    Row row;
    for (std::size_t i = 0; i < k; ++i) row.t.joint.push_back(lookup(actions_, toks[1 + i], "action"));
    row.t.target = lookup(states_, toks[k + 2], "state");
    std::size_t i = k + 3;
    if (i < toks.size() && toks[i].text == "when") {
      if (!allow_counters_) fail("counter guards need a counter-model reader", toks[i].column);
      const std::size_t b = ++i;
      std::string guard;
      while (i < toks.size() && toks[i].text != "do") guard += toks[i++].text + " ";
      if (b == i) fail("missing guard after 'when'", toks[b - 1].column);
      try {
        row.label.guard = parse_guard(guard);
      } catch (const ParseError& e) {
        fail(std::string("bad guard: ") + e.what(), toks[b].column);
      }
    }
    if (i < toks.size() && toks[i].text == "do") {
      if (!allow_counters_) fail("counter updates need a counter-model reader", toks[i].column);
      if (++i == toks.size()) fail("missing updates after 'do'", toks[i - 1].column);
      for (; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (t.text.size() < 4 || (t.text.substr(0, 2) != "++" && t.text.substr(0, 2) != "--") || t.text[2] != 'c') {
          fail("expected an update ++cN or --cN, got '" + t.text + "'", t.column);
        }
        const Token idx{t.text.substr(3), t.column + 3};
        row.label.updates.push_back({number(idx), t.text[0] == '+' ? 1 : -1});
      }
    }
    if (i != toks.size()) fail("unexpected '" + toks[i].text + "'", toks[i].column);
    for (const auto& r : rows_[q]) {
      if (r.t.joint == row.t.joint) fail("duplicate transition", toks[0].column);
    }
    rows_[q].push_back(std::move(row));
  }

  void finish() {
    Model& mm = m();
    if (mm.valuation.size() != mm.propositions.size()) mm.valuation.assign(mm.propositions.size(), {});
    if (mm.repertoire.empty()) {
      mm.repertoire.assign(mm.agents.size(), std::vector<std::vector<ActionId>>(mm.states.size()));
    }
    if (rows_.empty()) rows_.assign(mm.states.size(), {});
    mm.transitions.assign(mm.states.size(), {});
    cm_.labels.assign(mm.states.size(), {});
    for (StateId q = 0; q < mm.states.size(); ++q) {
      auto& rs = rows_[q];
      std::sort(rs.begin(), rs.end(), [](const Row& a, const Row& b) { return a.t.joint < b.t.joint; });
      for (auto& r : rs) {
        mm.transitions[q].push_back(std::move(r.t));
        cm_.labels[q].push_back(std::move(r.label));
      }
    }
    if (indist_.empty()) indist_.assign(mm.agents.size(), {});
    mm.indist.assign(mm.agents.size(), {});
    for (AgentId a = 0; a < mm.agents.size(); ++a) {
      std::vector<char> covered(mm.states.size(), 0);
      for (auto& cls : indist_[a]) {
        for (StateId q : cls) covered[q] = 1;
        mm.indist[a].push_back(std::move(cls));
      }
      for (StateId q = 0; q < mm.states.size(); ++q) {
        if (!covered[q]) mm.indist[a].push_back({q});
      }
    }
    normalize(mm);
  }

  struct Row {
    Transition t;
    CounterLabel label;
  };

  bool allow_counters_;
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines_;
  std::size_t line_ = 0;
  CounterModel cm_;
  std::map<std::string, std::uint32_t> agents_, actions_, props_, states_;
  std::map<PropId, int> valued_;
  std::vector<std::vector<Row>> rows_;
  std::vector<std::vector<std::vector<StateId>>> indist_;
};

void check_names(const std::vector<std::string>& v, const char* what) {
  for (const auto& s : v) {
    if (!valid_name(s)) throw InputError(std::string("cannot write ") + what + " name '" + s + "' as a token");
  }
}

void write_model(std::ostream& os, const Model& m, const CounterModel* cm) {
  check_names(m.agents, "agent");
  check_names(m.actions, "action");
  check_names(m.propositions, "proposition");
  check_names(m.states, "state");
  auto list = [&](const char* key, const std::vector<std::string>& v) {
    os << key << ':';
    for (const auto& s : v) os << ' ' << s;
    os << '\n';
  };
  list("agents", m.agents);
  list("actions", m.actions);
  list("propositions", m.propositions);
  list("states", m.states);
  os << "initial: " << m.states.at(m.initial) << '\n';
  if (cm && cm->counters > 0) {
    os << "counters: " << cm->counters << '\n';
    os << "init:";
    for (auto v : cm->initial) os << ' ' << v;
    os << '\n';
  }
  os << "\nvaluation:\n";
  for (PropId p = 0; p < m.propositions.size(); ++p) {
    os << "  " << m.propositions[p] << " =";
    if (p < m.valuation.size()) {
      for (StateId q : m.valuation[p]) os << ' ' << m.states.at(q);
    }
    os << '\n';
  }
  os << "\nrepertoire:\n";
  for (AgentId a = 0; a < m.agents.size() && a < m.repertoire.size(); ++a) {
    for (StateId q = 0; q < m.states.size() && q < m.repertoire[a].size(); ++q) {
      if (m.repertoire[a][q].empty()) continue;
      os << "  " << m.agents[a] << ' ' << m.states[q] << " =";
      for (ActionId x : m.repertoire[a][q]) os << ' ' << m.actions.at(x);
      os << '\n';
    }
  }
  os << "\ntransitions:\n";
  for (StateId q = 0; q < m.states.size() && q < m.transitions.size(); ++q) {
    for (std::size_t i = 0; i < m.transitions[q].size(); ++i) {
      const auto& t = m.transitions[q][i];
      os << "  " << m.states[q];
      for (ActionId x : t.joint) os << ' ' << m.actions.at(x);
      os << " -> " << m.states.at(t.target);
      if (cm && cm->counters > 0) {
        const auto& l = cm->labels.at(q).at(i);
        if (l.guard.kind != Guard::Kind::truth) os << " when " << l.guard.to_string();
        if (!l.updates.empty()) {
          os << " do";
          for (const auto& u : l.updates) os << ' ' << (u.delta > 0 ? "++" : "--") << 'c' << u.counter;
        }
      }
      os << '\n';
    }
  }
  os << "\nindist:\n";
  for (AgentId a = 0; a < m.agents.size() && a < m.indist.size(); ++a) {
    std::string line;
    for (const auto& cls : m.indist[a]) {
      if (cls.size() < 2) continue;
      if (!line.empty()) line += " |";
      for (StateId q : cls) line += ' ' + m.states.at(q);
    }
    if (!line.empty()) os << "  " << m.agents[a] << " =" << line << '\n';
  }
}

}  // namespace

Model parse_model(std::string_view text) { return Parser(text, false).parse().skeleton; }

CounterModel parse_counter_model(std::string_view text) { return Parser(text, true).parse(); }

std::string format_model(const Model& m) {
  std::ostringstream os;
  write_model(os, m, nullptr);
  return os.str();
}

std::string format_counter_model(const CounterModel& cm) {
  std::ostringstream os;
  write_model(os, cm.skeleton, &cm);
  return os.str();
}

}  // namespace stratbound
