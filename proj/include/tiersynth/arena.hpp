#pragma once

// Game arenas: the product of the domain transition system (with its error
// sinks) and an objective DFA, and the synchronized product of two such
// arenas over the same domain. The objective DFA consumes the initial
// domain state before any move is played; once an error sink is entered
// the DFA component freezes.

#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tiersynth/automata.hpp"
#include "tiersynth/domain.hpp"
#include "tiersynth/errors.hpp"

namespace tiersynth {

struct Arena {
  TransitionSystem ts;  // over Act x React
  std::vector<StateId> domain_component;  // DomainDfa ids (error sinks included)
  std::vector<StateId> dfa_component;     // objective DFA ids
  std::vector<std::string> labels;

  std::vector<bool> ag_err, env_err, acc;  // per arena state
  std::vector<bool> adv, coop;             // game targets

  std::size_t num_states() const { return ts.num_states(); }
};

inline Arena build_arena(const DomainDfa& dd, const Dfa& objective, const Limits& limits = {}) {
  if (objective.ts.alphabet.kind() != Alphabet::Kind::propositions)
    throw SemanticError("objective must be a DFA over the domain fluents");

  // The objective reads domain states as letters; precompute the mapping.
  std::vector<Letter> state_letter(dd.num_domain_states);
  for (StateId s = 0; s < dd.num_domain_states; ++s)
    state_letter[s] = objective.ts.alphabet.symbol_letter(dd.state_symbols[s]);

  Arena arena;
  arena.ts.alphabet = dd.ts.alphabet;
  const std::size_t letters = arena.ts.alphabet.size();

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::deque<StateId> queue;
  auto intern = [&](StateId s, StateId q) {
    auto [it, inserted] =
        index.try_emplace({s, q}, static_cast<StateId>(arena.domain_component.size()));
    if (inserted) {
      if (arena.domain_component.size() >= limits.max_states)
        throw ResourceError("arena exceeds the state cap");
      arena.domain_component.push_back(s);
      arena.dfa_component.push_back(q);
      arena.ts.next.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };

  // Initial state: the DFA consumes s0 before the first move.
  arena.ts.initial =
      intern(dd.ts.initial, objective.ts.step(objective.ts.initial, state_letter[dd.ts.initial]));

  while (!queue.empty()) {
    const StateId id = queue.front();
    queue.pop_front();
    const StateId s = arena.domain_component[id];
    const StateId q = arena.dfa_component[id];
    std::vector<StateId> row(letters);
    for (Letter l = 0; l < letters; ++l) {
      const StateId s_next = dd.ts.step(s, l);
      // The DFA component freezes on both error sinks.
      const StateId q_next = dd.is_error(s_next) ? q : objective.ts.step(q, state_letter[s_next]);
      row[l] = intern(s_next, q_next);
    }
    arena.ts.next[id] = std::move(row);
  }

  const std::size_t n = arena.num_states();
  arena.ag_err.resize(n);
  arena.env_err.resize(n);
  arena.acc.resize(n);
  arena.adv.resize(n);
  arena.coop.resize(n);
  arena.labels.resize(n);
  for (StateId id = 0; id < n; ++id) {
    const StateId s = arena.domain_component[id];
    const StateId q = arena.dfa_component[id];
    arena.ag_err[id] = (s == dd.ag_err);
    arena.env_err[id] = (s == dd.env_err);
    arena.acc[id] = objective.final[q];
    arena.adv[id] = !arena.ag_err[id] && (arena.env_err[id] || arena.acc[id]);
    arena.coop[id] = !arena.ag_err[id] && !arena.env_err[id] && arena.acc[id];
    std::ostringstream label;
    label << '(' << dd.state_names[s] << ", q" << q << ')';
    arena.labels[id] = label.str();
  }
  return arena;
}

// ---------------------------------------------------------------------------
// Pair arena: synchronized product of two arenas that read the same moves
// over the same domain.

struct PairArena {
  TransitionSystem ts;
  std::vector<std::pair<StateId, StateId>> components;  // (arena1 id, arena2 id)

  std::size_t num_states() const { return ts.num_states(); }
};

inline PairArena build_pair_arena(const Arena& a1, const Arena& a2, const Limits& limits = {}) {
  if (!(a1.ts.alphabet == a2.ts.alphabet))
    throw SemanticError("pair arena requires arenas over the same domain");
  ProductSystem prod = product_ts(a1.ts, a2.ts, limits);
  // Both sides follow the same domain run by construction; anything else
  // means the arenas came from different domains.
  for (StateId q = 0; q < prod.ts.num_states(); ++q) {
    const auto& [x, y] = prod.components[q];
    if (a1.domain_component[x] != a2.domain_component[y])
      throw SemanticError("pair arena requires arenas over the same domain");
  }
  PairArena pa;
  pa.ts = std::move(prod.ts);
  pa.components = std::move(prod.components);
  return pa;
}

// Lifts a per-arena state set into pair-arena coordinates.
inline std::vector<bool> lift_pair(const PairArena& pa, const std::vector<bool>& side1,
                                   const std::vector<bool>& side2) {
  std::vector<bool> out(pa.num_states());
  for (StateId q = 0; q < pa.num_states(); ++q)
    out[q] = side1[pa.components[q].first] && side2[pa.components[q].second];
  return out;
}

// ---------------------------------------------------------------------------
// Debug DOT dump with region coloring: winning states green, cooperative
// but not winning yellow, winning-pending dashed.

inline std::string arena_to_dot(const Arena& arena, const std::vector<bool>& win,
                                const std::vector<bool>& coop,
                                const std::vector<bool>* winpend = nullptr,
                                const std::string& name = "arena") {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (StateId q = 0; q < arena.num_states(); ++q) {
    os << "  n" << q << " [label=\"" << arena.labels[q] << "\"";
    if (arena.acc[q]) os << ", shape=doublecircle";
    if (win[q])
      os << ", style=\"filled" << (winpend && (*winpend)[q] ? ",dashed" : "")
         << "\", fillcolor=green";
    else if (coop[q])
      os << ", style=\"filled" << (winpend && (*winpend)[q] ? ",dashed" : "")
         << "\", fillcolor=yellow";
    else if (winpend && (*winpend)[q])
      os << ", style=dashed";
    os << "];\n";
  }
  for (StateId q = 0; q < arena.num_states(); ++q) {
    std::map<StateId, std::vector<std::string>> grouped;
    for (Letter l = 0; l < arena.ts.alphabet.size(); ++l)
      grouped[arena.ts.step(q, l)].push_back(arena.ts.alphabet.letter_label(l));
    for (const auto& [target, labels] : grouped) {
      os << "  n" << q << " -> n" << target << " [label=\"";
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
