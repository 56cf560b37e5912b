#pragma once

// Deterministic transition systems and DFAs with explicitly materialized
// alphabets: either the propositional alphabet 2^AP or agent/environment
// move pairs Act x React.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiersynth/errors.hpp"
#include "tiersynth/formula.hpp"

namespace tiersynth {

using StateId = std::uint32_t;
using Letter = std::uint32_t;

class Alphabet {
public:
  enum class Kind { propositions, moves };

  static Alphabet propositions(std::vector<std::string> atoms, const Limits& limits = {}) {
    if (atoms.size() >= 64 || (std::uint64_t{1} << atoms.size()) > limits.max_letters)
      throw ResourceError("propositional alphabet over " + std::to_string(atoms.size()) +
                          " atoms exceeds the letter cap");
    Alphabet a;
    a.kind_ = Kind::propositions;
    a.atoms_ = std::move(atoms);
    return a;
  }

  static Alphabet moves(std::vector<std::string> actions, std::vector<std::string> reactions) {
    if (actions.empty() || reactions.empty())
      throw SemanticError("move alphabet needs at least one action and one reaction");
    Alphabet a;
    a.kind_ = Kind::moves;
    a.actions_ = std::move(actions);
    a.reactions_ = std::move(reactions);
    return a;
  }

  Kind kind() const { return kind_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& reactions() const { return reactions_; }

  std::size_t size() const {
    return kind_ == Kind::propositions ? (std::size_t{1} << atoms_.size())
                                       : actions_.size() * reactions_.size();
  }

  Letter move_letter(std::size_t action_idx, std::size_t reaction_idx) const {
    return static_cast<Letter>(action_idx * reactions_.size() + reaction_idx);
  }
  std::pair<std::size_t, std::size_t> split_move(Letter l) const {
    return {l / reactions_.size(), l % reactions_.size()};
  }

  // Encodes a set of atoms as a letter; unknown atoms are rejected.
  Letter symbol_letter(const Symbol& symbol) const {
    Letter mask = 0;
    for (const auto& name : symbol) {
      auto it = std::find(atoms_.begin(), atoms_.end(), name);
      if (it == atoms_.end())
        throw SemanticError("atom '" + name + "' is outside the alphabet");
      mask |= Letter{1} << (it - atoms_.begin());
    }
    return mask;
  }

  Symbol letter_symbol(Letter l) const {
    Symbol s;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (l & (Letter{1} << i)) s.insert(atoms_[i]);
    return s;
  }

  std::string letter_label(Letter l) const {
    std::ostringstream os;
    if (kind_ == Kind::propositions) {
      os << '{';
      bool first = true;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (l & (Letter{1} << i)) {
          if (!first) os << ',';
          os << atoms_[i];
          first = false;
        }
      os << '}';
    } else {
      auto [a, r] = split_move(l);
      os << '(' << actions_[a] << ',' << reactions_[r] << ')';
    }
    return os.str();
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.kind_ == b.kind_ && a.atoms_ == b.atoms_ && a.actions_ == b.actions_ &&
           a.reactions_ == b.reactions_;
  }

private:
  Kind kind_ = Kind::propositions;
  std::vector<std::string> atoms_;
  std::vector<std::string> actions_;
  std::vector<std::string> reactions_;
};

struct TransitionSystem {
  Alphabet alphabet{Alphabet::propositions({})};
  StateId initial = 0;
  // next[q][letter]; total over the declared alphabet.
  std::vector<std::vector<StateId>> next;

  std::size_t num_states() const { return next.size(); }

  StateId step(StateId q, Letter l) const { return next[q][l]; }

  template <typename It>
  StateId run(StateId q, It first, It last) const {
    for (auto it = first; it != last; ++it) q = step(q, *it);
    return q;
  }
};

struct Dfa {
  TransitionSystem ts;
  std::vector<bool> final;
  std::vector<std::string> labels;  // optional, per state
};

inline bool accepts(const Dfa& d, const Trace& t) {
  if (d.ts.alphabet.kind() != Alphabet::Kind::propositions)
    throw SemanticError("accepts() expects a DFA over a propositional alphabet");
  StateId q = d.ts.initial;
  for (const Symbol& s : t) q = d.ts.step(q, d.ts.alphabet.symbol_letter(s));
  return d.final[q];
}

// ---------------------------------------------------------------------------
// Synchronized product. Only pairs reachable from (initial, initial) are
// materialized; `components` maps product ids back to the operands.

struct ProductSystem {
  TransitionSystem ts;
  std::vector<std::pair<StateId, StateId>> components;

  StateId component(StateId q, int side) const {
    return side == 1 ? components[q].first : components[q].second;
  }
};

inline ProductSystem product_ts(const TransitionSystem& t1, const TransitionSystem& t2,
                                const Limits& limits = {}) {
  if (!(t1.alphabet == t2.alphabet))
    throw SemanticError("product of transition systems requires identical alphabets");
  const std::size_t letters = t1.alphabet.size();

  ProductSystem prod;
  prod.ts.alphabet = t1.alphabet;
  prod.ts.initial = 0;

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::deque<std::pair<StateId, StateId>> queue;
  auto intern = [&](StateId a, StateId b) {
    auto [it, inserted] = index.try_emplace({a, b}, static_cast<StateId>(prod.components.size()));
    if (inserted) {
      if (prod.components.size() >= limits.max_states)
        throw ResourceError("product exceeds the state cap");
      prod.components.emplace_back(a, b);
      prod.ts.next.emplace_back();
      queue.emplace_back(a, b);
    }
    return it->second;
  };

  intern(t1.initial, t2.initial);
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    const StateId q = index.at({a, b});
    std::vector<StateId> row(letters);
    for (Letter l = 0; l < letters; ++l) row[l] = intern(t1.step(a, l), t2.step(b, l));
    prod.ts.next[q] = std::move(row);
  }
  return prod;
}

inline std::vector<StateId> lift(const ProductSystem& prod, int side,
                                 const std::vector<bool>& subset) {
  if (side != 1 && side != 2) throw SemanticError("lift side must be 1 or 2");
  std::vector<StateId> out;
  for (StateId q = 0; q < prod.components.size(); ++q)
    if (subset[prod.component(q, side)]) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------
// Minimization: Moore partition refinement followed by a reachability
// sweep and a BFS renumbering, so equal inputs give identical outputs.

inline Dfa minimize(const Dfa& d) {
  const std::size_t n = d.ts.num_states();
  const std::size_t letters = d.ts.alphabet.size();

  std::vector<std::uint32_t> cls(n);
  std::size_t num_classes = 1;
  for (std::size_t q = 0; q < n; ++q) {
    cls[q] = d.final[q] ? 1 : 0;
    if (d.final[q]) num_classes = 2;
  }

  // Refinement only splits classes, so the partition is stable as soon as
  // the class count stops growing.
  std::vector<std::uint32_t> next_cls(n);
  for (;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> sig_index;
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::uint32_t> sig;
      sig.reserve(letters + 1);
      sig.push_back(cls[q]);
      for (Letter l = 0; l < letters; ++l) sig.push_back(cls[d.ts.step(static_cast<StateId>(q), l)]);
      auto [it, _] = sig_index.try_emplace(std::move(sig),
                                           static_cast<std::uint32_t>(sig_index.size()));
      next_cls[q] = it->second;
    }
    const std::size_t count = sig_index.size();
    cls = next_cls;
    if (count == num_classes) break;
    num_classes = count;
  }

  // One representative per class, numbered by BFS from the initial class.
  std::unordered_map<std::uint32_t, StateId> renum;
  std::vector<StateId> rep;
  std::deque<std::uint32_t> queue;
  auto intern = [&](std::uint32_t c, StateId witness) {
    auto [it, inserted] = renum.try_emplace(c, static_cast<StateId>(rep.size()));
    if (inserted) {
      rep.push_back(witness);
      queue.push_back(c);
    }
    return it->second;
  };

  Dfa out;
  out.ts.alphabet = d.ts.alphabet;
  out.ts.initial = 0;
  intern(cls[d.ts.initial], d.ts.initial);
  while (!queue.empty()) {
    const std::uint32_t c = queue.front();
    queue.pop_front();
    const StateId q = rep[renum.at(c)];
    std::vector<StateId> row(letters);
    for (Letter l = 0; l < letters; ++l) {
      const StateId succ = d.ts.step(q, l);
      row[l] = intern(cls[succ], succ);
    }
    out.ts.next.push_back(std::move(row));
  }
  out.final.resize(rep.size());
  out.labels.resize(rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    out.final[i] = d.final[rep[i]];
    if (!d.labels.empty()) out.labels[i] = d.labels[rep[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// DOT dump: nodes in BFS order from the initial state, final states double
// circled, parallel edges with the same target merged into one labeled edge.

inline std::string dfa_to_dot(const Dfa& d, const std::string& name = "dfa") {
  const std::size_t letters = d.ts.alphabet.size();

  std::vector<StateId> order;
  std::vector<bool> seen(d.ts.num_states(), false);
  std::deque<StateId> queue{d.ts.initial};
  seen[d.ts.initial] = true;
  while (!queue.empty()) {
    const StateId q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (Letter l = 0; l < letters; ++l) {
      const StateId s = d.ts.step(q, l);
      if (!seen[s]) {
        seen[s] = true;
        queue.push_back(s);
      }
    }
  }

  std::vector<std::size_t> pos(d.ts.num_states(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  init [shape=point];\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId q = order[i];
    std::string label = d.labels.empty() || d.labels[q].empty()
                            ? "q" + std::to_string(i)
                            : d.labels[q];
    os << "  n" << i << " [label=\"" << label << "\"";
    if (d.final[q]) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  init -> n" << pos[d.ts.initial] << ";\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId q = order[i];
    std::map<std::size_t, std::vector<std::string>> grouped;  // target pos -> letters
    for (Letter l = 0; l < letters; ++l)
      grouped[pos[d.ts.step(q, l)]].push_back(d.ts.alphabet.letter_label(l));
    for (const auto& [target, labels] : grouped) {
      os << "  n" << i << " -> n" << target << " [label=\"";
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (k) os << ' ';
        os << labels[k];
      }
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace tiersynth
