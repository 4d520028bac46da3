#include "stratbound/encoding.hpp"

#include <algorithm>

#include "stratbound/errors.hpp"

namespace stratbound {

namespace {

constexpr std::string_view kOpen = "#00#";
constexpr std::string_view kClose = "#01#";

void append_index(std::string& out, std::uint64_t i) {
  if (i == 0) {
    out.push_back('0');
    return;
  }
  char buf[64];
  int len = 0;
  while (i != 0) {
    buf[len++] = static_cast<char>('0' + (i & 1U));
    i >>= 1U;
  }
  while (len > 0) out.push_back(buf[--len]);
}

std::size_t index_length(std::uint64_t i) {
  std::size_t len = 1;
  while (i > 1) {
    i >>= 1U;
    ++len;
  }
  return len;
}

// Builds nested sequences directly into one string.
class Writer {
 public:
  void open() {
    separate();
    out_ += kOpen;
    first_.push_back(true);
  }
  void close() {
    out_ += kClose;
    first_.pop_back();
    if (!first_.empty()) first_.back() = false;
  }
  void atom(std::uint64_t i) {
    separate();
    append_index(out_, i);
    if (!first_.empty()) first_.back() = false;
  }
  template <typename Range>
  void list(const Range& values) {
    open();
    for (auto v : values) atom(v);
    close();
  }
  std::string take() { return std::move(out_); }

 private:
  void separate() {
    if (!first_.empty() && !first_.back()) out_.push_back('#');
  }

  std::string out_;
  std::vector<bool> first_;
};

bool starts_with(std::string_view word, std::size_t pos, std::string_view token) {
  return word.substr(pos, token.size()) == token;
}

[[noreturn]] void fail(const std::string& msg, std::size_t pos) {
  throw ParseError(msg, 0, pos + 1);
}

}  // namespace

TapeWord::TapeWord(std::string symbols) : symbols_(std::move(symbols)) {
  auto bad = std::find_if(symbols_.begin(), symbols_.end(), [](char c) { return c != '0' && c != '1' && c != '#'; });
  if (bad != symbols_.end()) {
    throw InputError("tape word contains symbol '" + std::string(1, *bad) + "' outside {0,1,#}");
  }
}

TapeWord encode_index(std::uint64_t i) {
  std::string s;
  append_index(s, i);
  return TapeWord(std::move(s));
}

TapeWord encode_sequence(std::span<const TapeWord> items) {
  std::string s(kOpen);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s.push_back('#');
    s += items[i].str();
  }
  s += kClose;
  return TapeWord(std::move(s));
}

TapeWord encode_model(const Model& m) {
  require_valid(m);
  Writer w;
  w.open(); w.atom(m.agents.size()); w.close();
  w.open(); w.atom(m.states.size()); w.close();
  w.open(); w.atom(m.initial); w.close();

  w.open();
  for (PropId p = 0; p < m.valuation.size(); ++p) {
    w.open();
    w.atom(p);
    w.list(m.valuation[p]);
    w.close();
  }
  w.close();

  w.open(); w.atom(m.actions.size()); w.close();

  w.open();
  for (AgentId a = 0; a < m.agents.size(); ++a) {
    for (StateId q = 0; q < m.states.size(); ++q) {
      w.open();
      w.atom(a);
      w.atom(q);
      w.list(m.repertoire[a][q]);
      w.close();
    }
  }
  w.close();

  w.open();
  for (StateId q = 0; q < m.states.size(); ++q) {
    for (const auto& t : m.transitions[q]) {
      w.open();
      w.atom(q);
      w.list(t.joint);
      w.atom(t.target);
      w.close();
    }
  }
  w.close();

  w.open();
  for (const auto& classes : m.indist) {
    w.open();
    for (const auto& cls : classes) w.list(cls);
    w.close();
  }
  w.close();

  return TapeWord(w.take());
}

TapeWord encode_history_indices(std::span<const StateId> canonical) {
  Writer w;
  w.list(canonical);
  return TapeWord(w.take());
}

std::size_t encoded_history_length(std::span<const StateId> canonical) {
  std::size_t len = kOpen.size() + kClose.size();
  for (StateId q : canonical) len += index_length(q);
  if (!canonical.empty()) len += canonical.size() - 1;
  return len;
}

TapeWord encode_history(const Model& m, AgentId a, std::span<const Observation> obs) {
  std::vector<StateId> canonical;
  canonical.reserve(obs.size());
  for (const auto& o : obs) {
    if (o.agent != a) throw InputError("observation belongs to another agent");
    if (o.members.empty() || o.canonical >= m.states.size() || observation_of(m, a, o.canonical) != o) {
      throw InputError("observation is not a class of agent '" + m.agents.at(a) + "'");
    }
    canonical.push_back(o.canonical);
  }
  return encode_history_indices(canonical);
}

EncodingSizes measure_sizes(const Model& m, std::span<const Observation> obs) {
  EncodingSizes sizes;
  sizes.enc_model_len = encode_model(m).size();
  std::vector<StateId> canonical;
  for (const auto& o : obs) canonical.push_back(o.canonical);
  if (!obs.empty()) sizes.enc_history_len = encode_history(m, obs.front().agent, obs).size();
  else sizes.enc_history_len = encoded_history_length({});
  sizes.abstract_model_size = abstract_size(m);
  sizes.history_len = obs.size();
  return sizes;
}

EncodedItem parse_sequence(std::string_view word, std::size_t& pos) {
  if (!starts_with(word, pos, kOpen)) fail("expected opening bracket #00#", pos);
  pos += kOpen.size();
  EncodedItem list;
  list.is_list = true;
  if (starts_with(word, pos, kClose)) {
    pos += kClose.size();
    return list;
  }
  for (;;) {
    if (starts_with(word, pos, kOpen)) {
      list.items.push_back(parse_sequence(word, pos));
    } else {
      const std::size_t begin = pos;
      std::uint64_t value = 0;
      while (pos < word.size() && (word[pos] == '0' || word[pos] == '1')) {
        if (value >> 63U) fail("index does not fit in 64 bits", begin);
        value = (value << 1U) | static_cast<std::uint64_t>(word[pos] - '0');
        ++pos;
      }
      if (pos == begin) fail("expected an index or a nested sequence", pos);
      if (word[begin] == '0' && pos - begin > 1) fail("index has a leading zero", begin);
      EncodedItem atom;
      atom.value = value;
      list.items.push_back(atom);
    }
    if (starts_with(word, pos, kClose)) {
      pos += kClose.size();
      return list;
    }
    if (pos >= word.size() || word[pos] != '#') fail("expected separator or closing bracket", pos);
    ++pos;
    if (starts_with(word, pos, "#")) {
      // a separator may only be followed by a nested sequence when it starts with #00#
      if (!starts_with(word, pos, kOpen)) fail("unexpected separator", pos);
    }
  }
}

namespace {

const EncodedItem& expect_list(const EncodedItem& item, std::size_t arity, const char* what) {
  if (!item.is_list || (arity != 0 && item.items.size() != arity)) {
    throw ParseError(std::string("malformed ") + what, 0);
  }
  return item;
}

std::uint64_t expect_atom(const EncodedItem& item, const char* what) {
  if (item.is_list) throw ParseError(std::string("expected an index for ") + what, 0);
  return item.value;
}

std::uint32_t narrow(std::uint64_t v, std::uint64_t bound, const char* what) {
  if (v >= bound) throw ParseError(std::string(what) + " index out of range", 0);
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint32_t> atoms(const EncodedItem& list, std::uint64_t bound, const char* what) {
  expect_list(list, 0, what);
  std::vector<std::uint32_t> out;
  for (const auto& it : list.items) out.push_back(narrow(expect_atom(it, what), bound, what));
  return out;
}

std::uint64_t single(const EncodedItem& item, const char* what) {
  return expect_atom(expect_list(item, 1, what).items[0], what);
}

std::vector<std::string> generated_names(char prefix, std::size_t count) {
  std::vector<std::string> names(count);
  for (std::size_t i = 0; i < count; ++i) names[i] = prefix + std::to_string(i);
  return names;
}

}  // namespace

Model decode_model(const TapeWord& word) {
  const std::string_view text = word.str();
  std::size_t pos = 0;
  std::vector<EncodedItem> fields;
  for (int i = 0; i < 8; ++i) fields.push_back(parse_sequence(text, pos));
  if (pos != text.size()) throw ParseError("trailing symbols after model encoding", 0, pos + 1);

  constexpr std::uint64_t kMaxCount = 1ULL << 31U;
  const std::uint64_t k = single(fields[0], "agent count");
  const std::uint64_t n = single(fields[1], "state count");
  const std::uint64_t acts = single(fields[4], "action count");
  if (k == 0 || n == 0 || acts == 0 || k > kMaxCount || n > kMaxCount || acts > kMaxCount) {
    throw ParseError("counts must be positive", 0);
  }

  Model m;
  m.agents = generated_names('a', k);
  m.states = generated_names('q', n);
  m.actions = generated_names('x', acts);
  m.initial = narrow(single(fields[2], "initial state"), n, "initial state");

  const auto& valuation = expect_list(fields[3], 0, "valuation");
  for (std::size_t p = 0; p < valuation.items.size(); ++p) {
    const auto& entry = expect_list(valuation.items[p], 2, "valuation entry");
    if (expect_atom(entry.items[0], "proposition") != p) throw ParseError("valuation out of order", 0);
    m.valuation.push_back(atoms(entry.items[1], n, "state"));
  }
  m.propositions = generated_names('p', m.valuation.size());

  m.repertoire.assign(k, std::vector<std::vector<ActionId>>(n));
  for (const auto& item : expect_list(fields[5], 0, "repertoires").items) {
    const auto& entry = expect_list(item, 3, "repertoire entry");
    const auto a = narrow(expect_atom(entry.items[0], "agent"), k, "agent");
    const auto q = narrow(expect_atom(entry.items[1], "state"), n, "state");
    m.repertoire[a][q] = atoms(entry.items[2], acts, "action");
  }

  m.transitions.assign(n, {});
  for (const auto& item : expect_list(fields[6], 0, "transitions").items) {
    const auto& entry = expect_list(item, 3, "transition entry");
    const auto q = narrow(expect_atom(entry.items[0], "state"), n, "state");
    Transition t;
    t.joint = atoms(entry.items[1], acts, "action");
    t.target = narrow(expect_atom(entry.items[2], "state"), n, "state");
    m.transitions[q].push_back(std::move(t));
  }

  for (const auto& per_agent : expect_list(fields[7], k, "indistinguishability").items) {
    std::vector<std::vector<StateId>> classes;
    for (const auto& cls : expect_list(per_agent, 0, "partition").items) classes.push_back(atoms(cls, n, "state"));
    m.indist.push_back(std::move(classes));
  }
  return m;
}

std::vector<StateId> decode_history(const TapeWord& word) {
  std::size_t pos = 0;
  const auto list = parse_sequence(word.str(), pos);
  if (pos != word.size()) throw ParseError("trailing symbols after history encoding", 0, pos + 1);
  std::vector<StateId> out;
  for (const auto& it : list.items) {
    out.push_back(narrow(expect_atom(it, "observation"), 1ULL << 32U, "observation"));
  }
  return out;
}

bool same_structure(const Model& a, const Model& b) {
  return a.agents.size() == b.agents.size() && a.states.size() == b.states.size() &&
         a.actions.size() == b.actions.size() && a.propositions.size() == b.propositions.size() &&
         a.initial == b.initial && a.valuation == b.valuation && a.repertoire == b.repertoire &&
         a.transitions == b.transitions && a.indist == b.indist;
}

}  // namespace stratbound
