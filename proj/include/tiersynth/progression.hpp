#pragma once

// LTLf -> DFA by formula progression. A DFA state is a pair (residual,
// acceptance flag): the residual is the obligation left to check on the
// remaining suffix, the flag records whether the prefix read so far
// satisfies the original formula. Residuals are canonicalized as reduced
// ordered decision diagrams over "obligation atoms" (the propositional
// atoms and the temporal subformulas of the compiled formula, ordered by
// first occurrence in the NNF), which makes state dedup exact.

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiersynth/automata.hpp"
#include "tiersynth/errors.hpp"
#include "tiersynth/formula.hpp"

namespace tiersynth {

// ---------------------------------------------------------------------------
// Formula-level progression. Input must be in NNF. The result is the
// residual obligation after reading `letter`, constant-folded.

namespace detail {

inline Formula fold_and(const Formula& a, const Formula& b) {
  if (a.kind() == FormulaKind::constant_false || b.kind() == FormulaKind::constant_false)
    return Formula::False();
  if (a.kind() == FormulaKind::constant_true) return b;
  if (b.kind() == FormulaKind::constant_true) return a;
  if (a == b) return a;
  return Formula::And(a, b);
}

inline Formula fold_or(const Formula& a, const Formula& b) {
  if (a.kind() == FormulaKind::constant_true || b.kind() == FormulaKind::constant_true)
    return Formula::True();
  if (a.kind() == FormulaKind::constant_false) return b;
  if (b.kind() == FormulaKind::constant_false) return a;
  if (a == b) return a;
  return Formula::Or(a, b);
}

template <typename HasAtom>
Formula progress_impl(const Formula& f, const HasAtom& has) {
  switch (f.kind()) {
    case FormulaKind::atom:
      return has(f.atom_name()) ? Formula::True() : Formula::False();
    case FormulaKind::constant_true: return Formula::True();
    case FormulaKind::constant_false: return Formula::False();
    case FormulaKind::negation:
      // NNF: the child is an atom.
      return has(f.child().atom_name()) ? Formula::False() : Formula::True();
    case FormulaKind::conjunction:
      return fold_and(progress_impl(f.lhs(), has), progress_impl(f.rhs(), has));
    case FormulaKind::disjunction:
      return fold_or(progress_impl(f.lhs(), has), progress_impl(f.rhs(), has));
    case FormulaKind::next:
    case FormulaKind::weak_next:
      return f.child();
    case FormulaKind::until:
      return fold_or(progress_impl(f.rhs(), has),
                     fold_and(progress_impl(f.lhs(), has), f));
    case FormulaKind::release:
      return fold_and(progress_impl(f.rhs(), has),
                      fold_or(progress_impl(f.lhs(), has), f));
    case FormulaKind::eventually:
      return fold_or(progress_impl(f.child(), has), f);
    case FormulaKind::always:
      return fold_and(progress_impl(f.child(), has), f);
    case FormulaKind::implication:
      throw SemanticError("progression requires NNF input");
  }
  throw SemanticError("unreachable formula kind");
}

template <typename HasAtom>
bool empty_continuation_impl(const Formula& f, const HasAtom& has) {
  switch (f.kind()) {
    case FormulaKind::atom: return has(f.atom_name());
    case FormulaKind::constant_true: return true;
    case FormulaKind::constant_false: return false;
    case FormulaKind::negation: return !has(f.child().atom_name());
    case FormulaKind::conjunction:
      return empty_continuation_impl(f.lhs(), has) && empty_continuation_impl(f.rhs(), has);
    case FormulaKind::disjunction:
      return empty_continuation_impl(f.lhs(), has) || empty_continuation_impl(f.rhs(), has);
    case FormulaKind::next: return false;
    case FormulaKind::weak_next: return true;
    case FormulaKind::until:
    case FormulaKind::release:
      return empty_continuation_impl(f.rhs(), has);
    case FormulaKind::eventually:
    case FormulaKind::always:
      return empty_continuation_impl(f.child(), has);
    case FormulaKind::implication:
      throw SemanticError("progression requires NNF input");
  }
  throw SemanticError("unreachable formula kind");
}

}  // namespace detail

// Residual after consuming `letter`: for every non-empty suffix u,
// letter.u satisfies f iff u satisfies the result.
inline Formula progress(const Formula& nnf, const Symbol& letter) {
  if (!is_nnf(nnf)) throw SemanticError("progression requires NNF input");
  return detail::progress_impl(nnf, [&](const std::string& a) { return letter.count(a) > 0; });
}

// Whether the one-letter word <letter> satisfies f.
inline bool empty_continuation(const Formula& nnf, const Symbol& letter) {
  if (!is_nnf(nnf)) throw SemanticError("progression requires NNF input");
  return detail::empty_continuation_impl(nnf,
                                         [&](const std::string& a) { return letter.count(a) > 0; });
}

// ---------------------------------------------------------------------------
// Reduced ordered decision diagrams, just big enough for canonicalizing
// residuals. Terminals 0 (false) and 1 (true); nodes are hash-consed.

namespace detail {

class DecisionDiagram {
public:
  static constexpr std::uint32_t kFalse = 0;
  static constexpr std::uint32_t kTrue = 1;

  DecisionDiagram() {
    nodes_.push_back({~0u, 0, 0});  // false sentinel
    nodes_.push_back({~0u, 1, 1});  // true sentinel
  }

  std::uint32_t var(std::uint32_t v) { return make(v, kFalse, kTrue); }
  std::uint32_t neg_var(std::uint32_t v) { return make(v, kTrue, kFalse); }

  std::uint32_t make(std::uint32_t v, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    auto [it, inserted] =
        unique_.try_emplace(std::tuple{v, lo, hi}, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back({v, lo, hi});
    return it->second;
  }

  std::uint32_t apply_and(std::uint32_t a, std::uint32_t b) { return apply(a, b, OpAnd); }
  std::uint32_t apply_or(std::uint32_t a, std::uint32_t b) { return apply(a, b, OpOr); }

private:
  struct Node {
    std::uint32_t var, lo, hi;
  };

  enum Op { OpAnd, OpOr };

  std::uint32_t apply(std::uint32_t a, std::uint32_t b, Op op) {
    if (op == OpAnd) {
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue) return a;
      if (a == b) return a;
    } else {
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == b) return a;
    }
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a} << 33) ^ (std::uint64_t{b} << 1) ^ op;
    auto it = apply_cache_.find(key);
    if (it != apply_cache_.end()) return it->second;

    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    std::uint32_t v, alo, ahi, blo, bhi;
    if (na.var == nb.var) {
      v = na.var; alo = na.lo; ahi = na.hi; blo = nb.lo; bhi = nb.hi;
    } else if (na.var < nb.var) {
      v = na.var; alo = na.lo; ahi = na.hi; blo = b; bhi = b;
    } else {
      v = nb.var; alo = a; ahi = a; blo = nb.lo; bhi = nb.hi;
    }
    const std::uint32_t r = make(v, apply(alo, blo, op), apply(ahi, bhi, op));
    apply_cache_.emplace(key, r);
    return r;
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> unique_;
  std::unordered_map<std::uint64_t, std::uint32_t> apply_cache_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// The compiler.

namespace detail {

class LtlfCompiler {
public:
  LtlfCompiler(const Formula& f, std::vector<std::string> atoms, const Limits& limits)
      : core_(to_nnf(f)), atoms_(std::move(atoms)), limits_(limits) {
    for (const auto& a : formula_atoms(f))
      if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end())
        throw SemanticError("formula atom '" + a + "' missing from the requested alphabet");
    register_variables(core_);
  }

  Dfa compile() {
    Dfa dfa;
    dfa.ts.alphabet = Alphabet::propositions(atoms_, limits_);
    const std::size_t letters = dfa.ts.alphabet.size();

    struct StateKey {
      std::uint32_t residual;
      bool accepting;
      bool operator<(const StateKey& o) const {
        return residual != o.residual ? residual < o.residual : accepting < o.accepting;
      }
    };
    std::map<StateKey, StateId> index;
    std::deque<StateId> queue;
    std::vector<StateKey> keys;
    // Representative formula per canonical residual, first seen wins; used
    // only for labels.
    std::unordered_map<std::uint32_t, Formula> representative;

    auto intern = [&](std::uint32_t residual, bool accepting, const Formula& repr) {
      auto [it, inserted] = index.try_emplace({residual, accepting},
                                              static_cast<StateId>(keys.size()));
      if (inserted) {
        if (keys.size() >= limits_.max_states)
          throw ResourceError("DFA construction exceeds the state cap");
        keys.push_back({residual, accepting});
        representative.try_emplace(residual, repr);
        dfa.ts.next.emplace_back();
        dfa.final.push_back(accepting);
        queue.push_back(it->second);
      }
      return it->second;
    };

    // Residual formulas per state, kept alongside for progression.
    std::vector<Formula> residual_formula;

    const StateId init = intern(encode(core_), false, core_);
    residual_formula.push_back(core_);
    dfa.ts.initial = init;

    while (!queue.empty()) {
      const StateId q = queue.front();
      queue.pop_front();
      const Formula current = residual_formula[q];
      std::vector<StateId> row(letters);
      for (Letter l = 0; l < letters; ++l) {
        auto has = [&](const std::string& name) {
          auto it = std::find(atoms_.begin(), atoms_.end(), name);
          return it != atoms_.end() && (l & (Letter{1} << (it - atoms_.begin()))) != 0;
        };
        const Formula next = progress_impl(current, has);
        const bool accepting = empty_continuation_impl(current, has);
        const std::uint32_t canon = encode(next);
        const std::size_t before = keys.size();
        const StateId target = intern(canon, accepting, next);
        if (keys.size() > before) residual_formula.push_back(representative.at(canon));
        row[l] = target;
      }
      dfa.ts.next[q] = std::move(row);
    }

    dfa.labels.resize(keys.size());
    for (StateId q = 0; q < keys.size(); ++q) {
      dfa.labels[q] = to_string(representative.at(keys[q].residual));
      if (keys[q].accepting) dfa.labels[q] += " | acc";
    }
    return dfa;
  }

private:
  // Obligation variables: atoms and temporal subformulas, in first-occurrence
  // order of a preorder walk over the NNF formula.
  void register_variables(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::atom:
        intern_variable(f);
        return;
      case FormulaKind::constant_true:
      case FormulaKind::constant_false:
        return;
      case FormulaKind::negation:
        intern_variable(f.child());
        return;
      case FormulaKind::conjunction:
      case FormulaKind::disjunction:
        register_variables(f.lhs());
        register_variables(f.rhs());
        return;
      case FormulaKind::next:
      case FormulaKind::weak_next:
      case FormulaKind::eventually:
      case FormulaKind::always:
        intern_variable(f);
        register_variables(f.child());
        return;
      case FormulaKind::until:
      case FormulaKind::release:
        intern_variable(f);
        register_variables(f.lhs());
        register_variables(f.rhs());
        return;
      case FormulaKind::implication:
        throw SemanticError("compiler input must be NNF");
    }
  }

  void intern_variable(const Formula& f) {
    const std::string key = to_string(f);
    if (var_index_.try_emplace(key, static_cast<std::uint32_t>(var_index_.size())).second) {
      // nothing else to track; index order is first-occurrence order
    }
  }

  std::uint32_t variable_of(const Formula& f) const {
    auto it = var_index_.find(to_string(f));
    if (it == var_index_.end())
      throw SemanticError("residual mentions a non-subformula obligation: " + to_string(f));
    return it->second;
  }

  // Boolean-structure encoding: atoms and temporal subformulas become
  // decision variables, conjunction/disjunction become diagram operations.
  std::uint32_t encode(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::atom: return bdd_.var(variable_of(f));
      case FormulaKind::constant_true: return detail::DecisionDiagram::kTrue;
      case FormulaKind::constant_false: return detail::DecisionDiagram::kFalse;
      case FormulaKind::negation: return bdd_.neg_var(variable_of(f.child()));
      case FormulaKind::conjunction: return bdd_.apply_and(encode(f.lhs()), encode(f.rhs()));
      case FormulaKind::disjunction: return bdd_.apply_or(encode(f.lhs()), encode(f.rhs()));
      case FormulaKind::next:
      case FormulaKind::weak_next:
      case FormulaKind::until:
      case FormulaKind::release:
      case FormulaKind::eventually:
      case FormulaKind::always:
        return bdd_.var(variable_of(f));
      case FormulaKind::implication:
        throw SemanticError("compiler input must be NNF");
    }
    throw SemanticError("unreachable formula kind");
  }

  Formula core_;
  std::vector<std::string> atoms_;
  Limits limits_;
  std::map<std::string, std::uint32_t> var_index_;
  detail::DecisionDiagram bdd_;
};

}  // namespace detail

// Builds the DFA accepting exactly the non-empty traces over 2^atoms that
// satisfy f. The empty word is always rejected.
inline Dfa to_dfa(const Formula& f, const std::vector<std::string>& atoms,
                  const Limits& limits = {}) {
  return detail::LtlfCompiler(f, atoms, limits).compile();
}

inline Dfa to_dfa(const Formula& f, const Limits& limits = {}) {
  const auto atom_set = formula_atoms(f);
  return to_dfa(f, std::vector<std::string>(atom_set.begin(), atom_set.end()), limits);
}

}  // namespace tiersynth
