#pragma once

// LTLf formulas over named atoms: AST, concrete syntax, negation normal
// form, and the direct finite-trace evaluator that serves as the semantics
// ground truth for everything built on top.

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tiersynth/errors.hpp"

namespace tiersynth {

// A propositional interpretation: the atoms that hold at one instant.
using Symbol = std::set<std::string>;
// Finite trace. Satisfaction queries require it to be non-empty.
using Trace = std::vector<Symbol>;

enum class FormulaKind {
  atom,
  constant_true,
  constant_false,
  negation,
  conjunction,
  disjunction,
  implication,
  next,
  weak_next,
  until,
  release,
  eventually,
  always,
};

inline bool is_valid_atom_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  // Operator tokens share the identifier lexical space and are reserved.
  static const std::set<std::string> reserved = {"true", "false", "X", "WX",
                                                 "F",    "G",     "U", "R"};
  return reserved.find(name) == reserved.end();
}

class Formula {
public:
  Formula() : Formula(True()) {}

  static Formula Atom(const std::string& name) {
    if (!is_valid_atom_name(name))
      throw SemanticError("invalid atom name: '" + name + "'");
    return Formula(std::make_shared<Node>(FormulaKind::atom, name, nullptr, nullptr));
  }
  static Formula True() {
    return Formula(std::make_shared<Node>(FormulaKind::constant_true, "", nullptr, nullptr));
  }
  static Formula False() {
    return Formula(std::make_shared<Node>(FormulaKind::constant_false, "", nullptr, nullptr));
  }
  static Formula Not(Formula f) { return unary(FormulaKind::negation, std::move(f)); }
  static Formula And(Formula l, Formula r) {
    return binary(FormulaKind::conjunction, std::move(l), std::move(r));
  }
  static Formula Or(Formula l, Formula r) {
    return binary(FormulaKind::disjunction, std::move(l), std::move(r));
  }
  static Formula Implies(Formula l, Formula r) {
    return binary(FormulaKind::implication, std::move(l), std::move(r));
  }
  static Formula Next(Formula f) { return unary(FormulaKind::next, std::move(f)); }
  static Formula WeakNext(Formula f) { return unary(FormulaKind::weak_next, std::move(f)); }
  static Formula Until(Formula l, Formula r) {
    return binary(FormulaKind::until, std::move(l), std::move(r));
  }
  static Formula Release(Formula l, Formula r) {
    return binary(FormulaKind::release, std::move(l), std::move(r));
  }
  static Formula Eventually(Formula f) { return unary(FormulaKind::eventually, std::move(f)); }
  static Formula Always(Formula f) { return unary(FormulaKind::always, std::move(f)); }

  FormulaKind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  // Sole child of a unary operator.
  Formula child() const { return Formula(node_->lhs); }

  bool is_atom() const { return node_->kind == FormulaKind::atom; }
  bool is_unary() const {
    switch (node_->kind) {
      case FormulaKind::negation:
      case FormulaKind::next:
      case FormulaKind::weak_next:
      case FormulaKind::eventually:
      case FormulaKind::always:
        return true;
      default:
        return false;
    }
  }
  bool is_binary() const { return node_->rhs != nullptr; }
  bool is_leaf() const { return node_->lhs == nullptr; }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return equal_nodes(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
  struct Node {
    Node(FormulaKind k, std::string n, std::shared_ptr<const Node> l,
         std::shared_ptr<const Node> r)
        : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {
      std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ull;
      for (char c : name) h = h * 131 + static_cast<unsigned char>(c);
      if (lhs) h = h * 0x100000001b3ull ^ lhs->hash;
      if (rhs) h = h * 0x100000001b3ull ^ (rhs->hash + 0x517cc1b727220a95ull);
      hash = h;
    }
    FormulaKind kind;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
    std::size_t hash;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula unary(FormulaKind k, Formula f) {
    return Formula(std::make_shared<Node>(k, "", f.node_, nullptr));
  }
  static Formula binary(FormulaKind k, Formula l, Formula r) {
    return Formula(std::make_shared<Node>(k, "", l.node_, r.node_));
  }

  static bool equal_nodes(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind || a->name != b->name) return false;
    return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
  }

  std::shared_ptr<const Node> node_;

  friend struct FormulaHash;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// ---------------------------------------------------------------------------
// Printing. Precedence, loosest to tightest: -> | & unary {U,R} primary.
// '->', 'U' and 'R' associate to the right.

namespace detail {

inline int precedence_level(FormulaKind k) {
  switch (k) {
    case FormulaKind::implication: return 1;
    case FormulaKind::disjunction: return 2;
    case FormulaKind::conjunction: return 3;
    case FormulaKind::negation:
    case FormulaKind::next:
    case FormulaKind::weak_next:
    case FormulaKind::eventually:
    case FormulaKind::always: return 4;
    case FormulaKind::until:
    case FormulaKind::release: return 5;
    default: return 6;
  }
}

inline void print_formula(std::ostream& os, const Formula& f, int min_level) {
  const int level = precedence_level(f.kind());
  const bool parens = level < min_level;
  if (parens) os << '(';
  switch (f.kind()) {
    case FormulaKind::atom: os << f.atom_name(); break;
    case FormulaKind::constant_true: os << "true"; break;
    case FormulaKind::constant_false: os << "false"; break;
    case FormulaKind::negation:
      os << '!';
      print_formula(os, f.child(), 4);
      break;
    case FormulaKind::next:
      os << "X ";
      print_formula(os, f.child(), 4);
      break;
    case FormulaKind::weak_next:
      os << "WX ";
      print_formula(os, f.child(), 4);
      break;
    case FormulaKind::eventually:
      os << "F ";
      print_formula(os, f.child(), 4);
      break;
    case FormulaKind::always:
      os << "G ";
      print_formula(os, f.child(), 4);
      break;
    case FormulaKind::conjunction:
      print_formula(os, f.lhs(), 3);
      os << " & ";
      print_formula(os, f.rhs(), 4);
      break;
    case FormulaKind::disjunction:
      print_formula(os, f.lhs(), 2);
      os << " | ";
      print_formula(os, f.rhs(), 3);
      break;
    case FormulaKind::implication:
      print_formula(os, f.lhs(), 2);
      os << " -> ";
      print_formula(os, f.rhs(), 1);
      break;
    case FormulaKind::until:
      print_formula(os, f.lhs(), 6);
      os << " U ";
      print_formula(os, f.rhs(), 4);
      break;
    case FormulaKind::release:
      print_formula(os, f.lhs(), 6);
      os << " R ";
      print_formula(os, f.rhs(), 4);
      break;
  }
  if (parens) os << ')';
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f, 0);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  detail::print_formula(os, f, 0);
  return os;
}

// ---------------------------------------------------------------------------
// Parser.

namespace detail {

struct Token {
  enum class Type {
    ident, kw_true, kw_false, op_not, op_and, op_or, op_implies,
    op_next, op_weak_next, op_eventually, op_always, op_until, op_release,
    lparen, rparen, end,
  };
  Type type;
  std::string text;
  std::size_t offset;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Token::Type::end, "", start};
    const char c = text_[pos_];
    if (c == '(') { ++pos_; return {Token::Type::lparen, "(", start}; }
    if (c == ')') { ++pos_; return {Token::Type::rparen, ")", start}; }
    if (c == '!') { ++pos_; return {Token::Type::op_not, "!", start}; }
    if (c == '&') { ++pos_; return {Token::Type::op_and, "&", start}; }
    if (c == '|') { ++pos_; return {Token::Type::op_or, "|", start}; }
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        pos_ += 2;
        return {Token::Type::op_implies, "->", start};
      }
      throw SyntaxError("syntax error at offset " + std::to_string(start) + ": stray '-'",
                        start, "'->'");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      std::string word = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "true") return {Token::Type::kw_true, word, start};
      if (word == "false") return {Token::Type::kw_false, word, start};
      if (word == "X") return {Token::Type::op_next, word, start};
      if (word == "WX") return {Token::Type::op_weak_next, word, start};
      if (word == "F") return {Token::Type::op_eventually, word, start};
      if (word == "G") return {Token::Type::op_always, word, start};
      if (word == "U") return {Token::Type::op_until, word, start};
      if (word == "R") return {Token::Type::op_release, word, start};
      return {Token::Type::ident, word, start};
    }
    throw SyntaxError("syntax error at offset " + std::to_string(start) +
                          ": unexpected character '" + std::string(1, c) + "'",
                      start, "formula");
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  Formula parse() {
    Formula f = parse_implies();
    if (tok_.type != Token::Type::end)
      throw SyntaxError("syntax error at offset " + std::to_string(tok_.offset) +
                            ": unexpected '" + tok_.text + "'",
                        tok_.offset, "end of input or binary operator");
    return f;
  }

private:
  void advance() { tok_ = lexer_.next(); }

  Formula parse_implies() {
    Formula l = parse_or();
    if (tok_.type == Token::Type::op_implies) {
      advance();
      return Formula::Implies(std::move(l), parse_implies());
    }
    return l;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (tok_.type == Token::Type::op_or) {
      advance();
      f = Formula::Or(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (tok_.type == Token::Type::op_and) {
      advance();
      f = Formula::And(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (tok_.type) {
      case Token::Type::op_not: advance(); return Formula::Not(parse_unary());
      case Token::Type::op_next: advance(); return Formula::Next(parse_unary());
      case Token::Type::op_weak_next: advance(); return Formula::WeakNext(parse_unary());
      case Token::Type::op_eventually: advance(); return Formula::Eventually(parse_unary());
      case Token::Type::op_always: advance(); return Formula::Always(parse_unary());
      default: return parse_until();
    }
  }

  Formula parse_until() {
    Formula l = parse_primary();
    // The right operand may start with a prefix operator: that reading is
    // unambiguous, and U/R still stop at '&'.
    if (tok_.type == Token::Type::op_until) {
      advance();
      return Formula::Until(std::move(l), parse_unary());
    }
    if (tok_.type == Token::Type::op_release) {
      advance();
      return Formula::Release(std::move(l), parse_unary());
    }
    return l;
  }

  Formula parse_primary() {
    switch (tok_.type) {
      case Token::Type::kw_true: advance(); return Formula::True();
      case Token::Type::kw_false: advance(); return Formula::False();
      case Token::Type::ident: {
        Formula f = Formula::Atom(tok_.text);
        advance();
        return f;
      }
      case Token::Type::lparen: {
        advance();
        Formula f = parse_implies();
        if (tok_.type != Token::Type::rparen)
          throw SyntaxError("syntax error at offset " + std::to_string(tok_.offset) +
                                ": expected ')'",
                            tok_.offset, "')'");
        advance();
        return f;
      }
      default:
        throw SyntaxError("syntax error at offset " + std::to_string(tok_.offset) +
                              ": expected a formula",
                          tok_.offset,
                          "'(', 'true', 'false', identifier, '!', 'X', 'WX', 'F', 'G'");
    }
  }

  Lexer lexer_;
  Token tok_{Token::Type::end, "", 0};
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) {
  if (text.empty()) throw SemanticError("empty formula text");
  return detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Size: the number of distinct subformulas of the AST as written. Derived
// operators count as single nodes.

namespace detail {
inline void collect_subformulas(const Formula& f,
                                std::unordered_set<Formula, FormulaHash>& seen) {
  if (!seen.insert(f).second) return;
  if (f.is_leaf()) return;
  collect_subformulas(f.lhs(), seen);
  if (f.is_binary()) collect_subformulas(f.rhs(), seen);
}
}  // namespace detail

inline std::size_t formula_size(const Formula& f) {
  std::unordered_set<Formula, FormulaHash> seen;
  detail::collect_subformulas(f, seen);
  return seen.size();
}

inline std::set<std::string> formula_atoms(const Formula& f) {
  std::set<std::string> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.is_atom()) {
      out.insert(g.atom_name());
    } else if (!g.is_leaf()) {
      stack.push_back(g.lhs());
      if (g.is_binary()) stack.push_back(g.rhs());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-trace satisfaction. Traces must be non-empty; Next is strong.

namespace detail {

class Evaluator {
public:
  Evaluator(const Trace& t, std::size_t n) : trace_(t), last_(n - 1) {}

  bool eval(const Formula& f, std::size_t i) {
    switch (f.kind()) {
      case FormulaKind::atom:
        return trace_[i].count(f.atom_name()) > 0;
      case FormulaKind::constant_true: return true;
      case FormulaKind::constant_false: return false;
      case FormulaKind::negation: return !eval(f.child(), i);
      case FormulaKind::conjunction: return eval(f.lhs(), i) && eval(f.rhs(), i);
      case FormulaKind::disjunction: return eval(f.lhs(), i) || eval(f.rhs(), i);
      case FormulaKind::implication: return !eval(f.lhs(), i) || eval(f.rhs(), i);
      case FormulaKind::next: return i < last_ && eval(f.child(), i + 1);
      case FormulaKind::weak_next: return i == last_ || eval(f.child(), i + 1);
      case FormulaKind::until: {
        for (std::size_t j = i; j <= last_; ++j) {
          if (eval(f.rhs(), j)) return true;
          if (!eval(f.lhs(), j)) return false;
        }
        return false;
      }
      case FormulaKind::release: {
        for (std::size_t j = i; j <= last_; ++j) {
          if (!eval(f.rhs(), j)) return false;
          if (eval(f.lhs(), j)) return true;
        }
        return true;
      }
      case FormulaKind::eventually: {
        for (std::size_t j = i; j <= last_; ++j)
          if (eval(f.child(), j)) return true;
        return false;
      }
      case FormulaKind::always: {
        for (std::size_t j = i; j <= last_; ++j)
          if (!eval(f.child(), j)) return false;
        return true;
      }
    }
    return false;
  }

private:
  const Trace& trace_;
  std::size_t last_;
};

}  // namespace detail

inline bool evaluate(const Trace& trace, const Formula& f) {
  if (trace.empty())
    throw SemanticError("satisfaction is undefined on the empty trace");
  return detail::Evaluator(trace, trace.size()).eval(f, 0);
}

// ---------------------------------------------------------------------------
// Negation normal form. Negations end up on atoms only; implications are
// rewritten away; the temporal operators X, WX, U, R, F, G all survive.

inline Formula to_nnf(const Formula& f);

namespace detail {
inline Formula nnf_negated(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::atom: return Formula::Not(f);
    case FormulaKind::constant_true: return Formula::False();
    case FormulaKind::constant_false: return Formula::True();
    case FormulaKind::negation: return to_nnf(f.child());
    case FormulaKind::conjunction:
      return Formula::Or(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case FormulaKind::disjunction:
      return Formula::And(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case FormulaKind::implication:
      return Formula::And(to_nnf(f.lhs()), nnf_negated(f.rhs()));
    case FormulaKind::next: return Formula::WeakNext(nnf_negated(f.child()));
    case FormulaKind::weak_next: return Formula::Next(nnf_negated(f.child()));
    case FormulaKind::until:
      return Formula::Release(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case FormulaKind::release:
      return Formula::Until(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case FormulaKind::eventually: return Formula::Always(nnf_negated(f.child()));
    case FormulaKind::always: return Formula::Eventually(nnf_negated(f.child()));
  }
  throw SemanticError("unreachable formula kind");
}
}  // namespace detail

inline Formula to_nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::atom:
    case FormulaKind::constant_true:
    case FormulaKind::constant_false:
      return f;
    case FormulaKind::negation: return detail::nnf_negated(f.child());
    case FormulaKind::conjunction: return Formula::And(to_nnf(f.lhs()), to_nnf(f.rhs()));
    case FormulaKind::disjunction: return Formula::Or(to_nnf(f.lhs()), to_nnf(f.rhs()));
    case FormulaKind::implication:
      return Formula::Or(detail::nnf_negated(f.lhs()), to_nnf(f.rhs()));
    case FormulaKind::next: return Formula::Next(to_nnf(f.child()));
    case FormulaKind::weak_next: return Formula::WeakNext(to_nnf(f.child()));
    case FormulaKind::until: return Formula::Until(to_nnf(f.lhs()), to_nnf(f.rhs()));
    case FormulaKind::release: return Formula::Release(to_nnf(f.lhs()), to_nnf(f.rhs()));
    case FormulaKind::eventually: return Formula::Eventually(to_nnf(f.child()));
    case FormulaKind::always: return Formula::Always(to_nnf(f.child()));
  }
  throw SemanticError("unreachable formula kind");
}

inline bool is_nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::atom:
    case FormulaKind::constant_true:
    case FormulaKind::constant_false:
      return true;
    case FormulaKind::negation: return f.child().is_atom();
    case FormulaKind::implication: return false;
    default:
      if (f.is_leaf()) return true;
      if (!is_nnf(f.lhs())) return false;
      return !f.is_binary() || is_nnf(f.rhs());
  }
}

}  // namespace tiersynth
