#include "stratbound/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "stratbound/errors.hpp"

namespace stratbound {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  Formula a;
  Formula b;
};

Formula::Formula() : node_(nullptr) {}

Formula Formula::top() { return Formula(); }
Formula Formula::bottom() { return neg(top()); }

Formula Formula::prop(std::string name) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::prop, std::move(name), {}, {}}));
}
Formula Formula::neg(Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::neg, {}, std::move(f), {}}));
}
Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::conj, {}, std::move(a), std::move(b)}));
}
Formula Formula::disj(Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); }
Formula Formula::implies(Formula a, Formula b) { return neg(conj(std::move(a), neg(std::move(b)))); }
Formula Formula::next(Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::next, {}, std::move(f), {}}));
}
Formula Formula::until(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::until, {}, std::move(a), std::move(b)}));
}
Formula Formula::release(Formula a, Formula b) { return neg(until(neg(std::move(a)), neg(std::move(b)))); }
Formula Formula::eventually(Formula f) { return until(top(), std::move(f)); }
Formula Formula::always(Formula f) { return release(bottom(), std::move(f)); }

// the null node is the constant true
FormulaKind Formula::kind() const { return node_ ? node_->kind : FormulaKind::truth; }

const std::string& Formula::name() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}
const Formula& Formula::left() const {
  if (!node_) throw std::logic_error("true has no operands");
  return node_->a;
}
const Formula& Formula::right() const {
  if (!node_) throw std::logic_error("true has no operands");
  return node_->b;
}

bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case FormulaKind::truth: return true;
    case FormulaKind::prop: return x.name() == y.name();
    case FormulaKind::neg:
    case FormulaKind::next: return x.left() == y.left();
    case FormulaKind::conj:
    case FormulaKind::until: return x.left() == y.left() && x.right() == y.right();
  }
  return false;
}

std::vector<std::string> Formula::propositions() const {
  std::vector<std::string> out;
  std::vector<const Formula*> todo{this};
  while (!todo.empty()) {
    const Formula* f = todo.back();
    todo.pop_back();
    switch (f->kind()) {
      case FormulaKind::truth: break;
      case FormulaKind::prop:
        if (std::find(out.begin(), out.end(), f->name()) == out.end()) out.push_back(f->name());
        break;
      case FormulaKind::neg:
      case FormulaKind::next: todo.push_back(&f->left()); break;
      case FormulaKind::conj:
      case FormulaKind::until:
        todo.push_back(&f->right());
        todo.push_back(&f->left());
        break;
    }
  }
  return out;
}

std::string Formula::to_string() const {
  switch (kind()) {
    case FormulaKind::truth: return "true";
    case FormulaKind::prop: return name();
    case FormulaKind::neg: return "!" + left().to_string();
    case FormulaKind::next: return "X " + left().to_string();
    case FormulaKind::conj: return "(" + left().to_string() + " & " + right().to_string() + ")";
    case FormulaKind::until: return "(" + left().to_string() + " U " + right().to_string() + ")";
  }
  return {};
}

std::size_t Formula::size() const {
  switch (kind()) {
    case FormulaKind::truth:
    case FormulaKind::prop: return 1;
    case FormulaKind::neg:
    case FormulaKind::next: return 1 + left().size();
    default: return 1 + left().size() + right().size();
  }
}

// ---------------------------------------------------------------- parser

namespace {

struct Token {
  enum Kind { ident, lparen, rparen, op, end } kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
      out.push_back({Token::ident, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (c == '(') {
      out.push_back({Token::lparen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::rparen, ")", col});
      ++i;
    } else if (s.substr(i, 2) == "->" || s.substr(i, 2) == "&&" || s.substr(i, 2) == "||") {
      const std::string t(s.substr(i, 2));
      out.push_back({Token::op, t == "&&" ? "&" : t == "||" ? "|" : t, col});
      i += 2;
    } else if (c == '!' || c == '~' || c == '&' || c == '|') {
      out.push_back({Token::op, c == '~' ? "!" : std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", 1, col);
    }
  }
  out.push_back({Token::end, "", s.size() + 1});
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "X" || w == "U" || w == "R" || w == "F" || w == "G" || w == "true" || w == "false";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = impl();
    if (peek().kind != Token::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept_op(const char* op) {
    if (peek().kind == Token::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(const char* w) {
    if (peek().kind == Token::ident && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 1, peek().column); }

  Formula impl() {
    Formula lhs = disj();
    if (accept_op("->")) return Formula::implies(std::move(lhs), impl());
    return lhs;
  }
  Formula disj() {
    Formula f = conj();
    while (accept_op("|")) f = Formula::disj(std::move(f), conj());
    return f;
  }
  Formula conj() {
    Formula f = temp();
    while (accept_op("&")) f = Formula::conj(std::move(f), temp());
    return f;
  }
  Formula temp() {
    Formula lhs = unary();
    if (accept_word("U")) return Formula::until(std::move(lhs), temp());
    if (accept_word("R")) return Formula::release(std::move(lhs), temp());
    return lhs;
  }
  Formula unary() {
    if (accept_op("!")) return Formula::neg(unary());
    if (accept_word("X")) return Formula::next(unary());
    if (accept_word("F")) return Formula::eventually(unary());
    if (accept_word("G")) return Formula::always(unary());
    return atom();
  }
  Formula atom() {
    const Token& t = peek();
    if (t.kind == Token::lparen) {
      ++pos_;
      Formula f = impl();
      if (peek().kind != Token::rparen) fail("expected ')'");
      ++pos_;
      return f;
    }
    if (t.kind == Token::ident) {
      if (t.text == "true") {
        ++pos_;
        return Formula::top();
      }
      if (t.text == "false") {
        ++pos_;
        return Formula::bottom();
      }
      if (is_keyword(t.text)) fail("operator '" + t.text + "' is missing its left operand");
      ++pos_;
      return Formula::prop(t.text);
    }
    if (t.kind == Token::end) fail("unexpected end of formula");
    fail("unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Flattened formula with propositions resolved against one model.
struct Flat {
  struct Item {
    FormulaKind kind;
    PropId prop = 0;
    std::size_t a = 0, b = 0;
  };
  std::vector<Item> items;  // children before parents; root last
};

std::size_t flatten(const Model& m, const Formula& f, Flat& out) {
  Flat::Item it{f.kind()};
  switch (f.kind()) {
    case FormulaKind::truth: break;
    case FormulaKind::prop: {
      auto p = find_proposition(m, f.name());
      if (!p) throw InputError("unknown proposition '" + f.name() + "'");
      it.prop = *p;
      break;
    }
    case FormulaKind::neg:
    case FormulaKind::next: it.a = flatten(m, f.left(), out); break;
    case FormulaKind::conj:
    case FormulaKind::until:
      it.a = flatten(m, f.left(), out);
      it.b = flatten(m, f.right(), out);
      break;
  }
  out.items.push_back(it);
  return out.items.size() - 1;
}

bool connected(const Model& m, StateId from, StateId to) {
  for (const auto& t : m.transitions[from]) {
    if (t.target == to) return true;
  }
  return false;
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(lex(text)).parse(); }

// ------------------------------------------------------------ evaluation

void check_lasso(const Model& m, const LassoPath& path) {
  if (path.loop.empty()) throw InputError("lasso loop must be nonempty");
  std::vector<StateId> seq = path.stem;
  seq.insert(seq.end(), path.loop.begin(), path.loop.end());
  seq.push_back(path.loop.front());
  for (StateId q : seq) {
    if (q >= m.states.size()) throw InputError("lasso mentions unknown state " + std::to_string(q));
  }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!connected(m, seq[i], seq[i + 1])) {
      throw InputError("no transition from " + m.states[seq[i]] + " to " + m.states[seq[i + 1]]);
    }
  }
}

bool eval_lasso(const Model& m, const LassoPath& path, const Formula& f) {
  check_lasso(m, path);
  Flat flat;
  flatten(m, f, flat);
  const std::size_t s = path.stem.size();
  const std::size_t l = path.loop.size();
  const std::size_t n = s + l;
  auto state = [&](std::size_t i) { return i < s ? path.stem[i] : path.loop[i - s]; };
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : s; };

  std::vector<std::vector<char>> sat(flat.items.size(), std::vector<char>(n, 0));
  for (std::size_t k = 0; k < flat.items.size(); ++k) {
    const auto& it = flat.items[k];
    auto& out = sat[k];
    switch (it.kind) {
      case FormulaKind::truth: std::fill(out.begin(), out.end(), 1); break;
      case FormulaKind::prop:
        for (std::size_t i = 0; i < n; ++i) out[i] = holds(m, it.prop, state(i));
        break;
      case FormulaKind::neg:
        for (std::size_t i = 0; i < n; ++i) out[i] = !sat[it.a][i];
        break;
      case FormulaKind::conj:
        for (std::size_t i = 0; i < n; ++i) out[i] = sat[it.a][i] && sat[it.b][i];
        break;
      case FormulaKind::next:
        for (std::size_t i = 0; i < n; ++i) out[i] = sat[it.a][succ(i)];
        break;
      case FormulaKind::until: {
        const auto& lhs = sat[it.a];
        const auto& rhs = sat[it.b];
        // two backward passes over the loop settle the least fixpoint there
        char after = 0;
        for (int round = 0; round < 2; ++round) {
          for (std::size_t i = n; i-- > s;) {
            out[i] = rhs[i] || (lhs[i] && after);
            after = out[i];
          }
        }
        after = out[s];
        for (std::size_t i = s; i-- > 0;) {
          out[i] = rhs[i] || (lhs[i] && after);
          after = out[i];
        }
        break;
      }
    }
  }
  return sat.back()[0] != 0;
}

const char* to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::holds: return "holds";
    case Verdict3::fails: return "fails";
    case Verdict3::unknown: return "unknown";
  }
  return "?";
}

namespace {

Verdict3 v_not(Verdict3 a) {
  return a == Verdict3::holds ? Verdict3::fails : a == Verdict3::fails ? Verdict3::holds : Verdict3::unknown;
}
Verdict3 v_and(Verdict3 a, Verdict3 b) {
  if (a == Verdict3::fails || b == Verdict3::fails) return Verdict3::fails;
  if (a == Verdict3::holds && b == Verdict3::holds) return Verdict3::holds;
  return Verdict3::unknown;
}
Verdict3 v_or(Verdict3 a, Verdict3 b) { return v_not(v_and(v_not(a), v_not(b))); }

}  // namespace

Verdict3 eval_bounded(const Model& m, std::span<const StateId> prefix, const Formula& f) {
  if (prefix.empty()) throw InputError("bounded evaluation needs a nonempty prefix");
  for (StateId q : prefix) {
    if (q >= m.states.size()) throw InputError("prefix mentions unknown state " + std::to_string(q));
  }
  Flat flat;
  flatten(m, f, flat);
  const std::size_t n = prefix.size();
  std::vector<std::vector<Verdict3>> val(flat.items.size(), std::vector<Verdict3>(n, Verdict3::unknown));
  for (std::size_t k = 0; k < flat.items.size(); ++k) {
    const auto& it = flat.items[k];
    auto& out = val[k];
    switch (it.kind) {
      case FormulaKind::truth: std::fill(out.begin(), out.end(), Verdict3::holds); break;
      case FormulaKind::prop:
        for (std::size_t i = 0; i < n; ++i) out[i] = holds(m, it.prop, prefix[i]) ? Verdict3::holds : Verdict3::fails;
        break;
      case FormulaKind::neg:
        for (std::size_t i = 0; i < n; ++i) out[i] = v_not(val[it.a][i]);
        break;
      case FormulaKind::conj:
        for (std::size_t i = 0; i < n; ++i) out[i] = v_and(val[it.a][i], val[it.b][i]);
        break;
      case FormulaKind::next:
        for (std::size_t i = 0; i + 1 < n; ++i) out[i] = val[it.a][i + 1];
        out[n - 1] = Verdict3::unknown;
        break;
      case FormulaKind::until: {
        Verdict3 after = Verdict3::unknown;
        for (std::size_t i = n; i-- > 0;) {
          out[i] = v_or(val[it.b][i], v_and(val[it.a][i], after));
          after = out[i];
        }
        break;
      }
    }
  }
  return val.back()[0];
}

bool is_state_formula(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::truth:
    case FormulaKind::prop: return true;
    case FormulaKind::neg: return is_state_formula(f.left());
    case FormulaKind::conj: return is_state_formula(f.left()) && is_state_formula(f.right());
    default: return false;
  }
}

bool eval_state(const Model& m, StateId q, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::truth: return true;
    case FormulaKind::prop: {
      auto p = find_proposition(m, f.name());
      if (!p) throw InputError("unknown proposition '" + f.name() + "'");
      return holds(m, *p, q);
    }
    case FormulaKind::neg: return !eval_state(m, q, f.left());
    case FormulaKind::conj: return eval_state(m, q, f.left()) && eval_state(m, q, f.right());
    default: throw InputError("not a state formula: " + f.to_string());
  }
}

namespace {

// true, !!true, !!!!true, ...
bool is_true_constant(const Formula& f) {
  if (f.kind() == FormulaKind::truth) return true;
  return f.kind() == FormulaKind::neg && f.left().kind() == FormulaKind::neg && is_true_constant(f.left().left());
}

}  // namespace

std::optional<Formula> match_eventually(const Formula& f) {
  if (f.kind() == FormulaKind::until && is_true_constant(f.left()) && is_state_formula(f.right())) return f.right();
  return std::nullopt;
}

std::optional<Formula> match_always(const Formula& f) {
  // !(true U !b)  or  !(!false U !b)
  if (f.kind() != FormulaKind::neg || f.left().kind() != FormulaKind::until) return std::nullopt;
  const Formula& u = f.left();
  if (!is_true_constant(u.left()) || u.right().kind() != FormulaKind::neg) return std::nullopt;
  if (!is_state_formula(u.right().left())) return std::nullopt;
  return u.right().left();
}

}  // namespace stratbound
