#pragma once

// Reachability game solvers over transition systems with Act x React
// alphabets. Adversarial and cooperative attractors run as level-batched
// worklists with per-(state,action) reaction counters, linear in the edge
// count. Strategies are uniform and deterministic: among the actions that
// witness a state's fixpoint level, the lexicographically smallest action
// name wins.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tiersynth/arena.hpp"
#include "tiersynth/automata.hpp"
#include "tiersynth/errors.hpp"

namespace tiersynth {

struct RegionSolution {
  std::vector<bool> region;
  // Action index per state; disengaged exactly on target states (stop) and
  // outside the region.
  std::vector<std::optional<std::uint32_t>> action;
  std::vector<std::int32_t> rank;  // fixpoint level; -1 outside the region
};

namespace detail {

inline void require_moves(const TransitionSystem& ts) {
  if (ts.alphabet.kind() != Alphabet::Kind::moves)
    throw SemanticError("game solving needs a transition system over moves");
}

// Action indices ordered by action name; ties impossible (names unique).
inline std::vector<std::uint32_t> actions_by_name(const Alphabet& a) {
  std::vector<std::uint32_t> idx(a.actions().size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t x, std::uint32_t y) {
    return a.actions()[x] < a.actions()[y];
  });
  return idx;
}

struct ReverseEdges {
  // incoming[s] lists (q, a) once per (q, a, r) edge into s.
  std::vector<std::vector<std::pair<StateId, std::uint32_t>>> incoming;

  explicit ReverseEdges(const TransitionSystem& ts) : incoming(ts.num_states()) {
    const auto& alphabet = ts.alphabet;
    for (StateId q = 0; q < ts.num_states(); ++q)
      for (Letter l = 0; l < alphabet.size(); ++l)
        incoming[ts.step(q, l)].emplace_back(q, static_cast<std::uint32_t>(alphabet.split_move(l).first));
  }
};

}  // namespace detail

// Least fixpoint of X -> target u { q | exists a, forall r: step(q,a,r) in X }.
inline RegionSolution solve_adv(const TransitionSystem& ts, const std::vector<bool>& target) {
  detail::require_moves(ts);
  const std::size_t n = ts.num_states();
  const std::size_t num_actions = ts.alphabet.actions().size();
  const std::size_t num_reactions = ts.alphabet.reactions().size();

  RegionSolution sol;
  sol.region.assign(n, false);
  sol.action.assign(n, std::nullopt);
  sol.rank.assign(n, -1);

  const detail::ReverseEdges rev(ts);
  std::vector<std::uint32_t> pending(n * num_actions, static_cast<std::uint32_t>(num_reactions));

  std::vector<StateId> frontier;
  for (StateId q = 0; q < n; ++q)
    if (target[q]) {
      sol.region[q] = true;
      sol.rank[q] = 0;
      frontier.push_back(q);
    }

  std::int32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    std::vector<StateId> next;
    for (const StateId s : frontier)
      for (const auto& [q, a] : rev.incoming[s])
        if (--pending[q * num_actions + a] == 0 && !sol.region[q]) {
          sol.region[q] = true;
          sol.rank[q] = level;
          next.push_back(q);
        }
    frontier = std::move(next);
  }

  // Uniform strategy: every reaction must drop strictly in rank.
  const auto order = detail::actions_by_name(ts.alphabet);
  for (StateId q = 0; q < n; ++q) {
    if (!sol.region[q] || target[q]) continue;
    for (const std::uint32_t a : order) {
      bool ok = true;
      for (std::uint32_t r = 0; r < num_reactions && ok; ++r) {
        const StateId succ = ts.step(q, ts.alphabet.move_letter(a, r));
        ok = sol.region[succ] && sol.rank[succ] < sol.rank[q];
      }
      if (ok) {
        sol.action[q] = a;
        break;
      }
    }
  }
  return sol;
}

// Least fixpoint of X -> target u { q | exists a, exists r: step(q,a,r) in X }.
inline RegionSolution solve_coop(const TransitionSystem& ts, const std::vector<bool>& target) {
  detail::require_moves(ts);
  const std::size_t n = ts.num_states();
  const std::size_t num_reactions = ts.alphabet.reactions().size();

  RegionSolution sol;
  sol.region.assign(n, false);
  sol.action.assign(n, std::nullopt);
  sol.rank.assign(n, -1);

  const detail::ReverseEdges rev(ts);
  std::deque<StateId> queue;
  for (StateId q = 0; q < n; ++q)
    if (target[q]) {
      sol.region[q] = true;
      sol.rank[q] = 0;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (const auto& [q, a] : rev.incoming[s])
      if (!sol.region[q]) {
        sol.region[q] = true;
        sol.rank[q] = sol.rank[s] + 1;
        queue.push_back(q);
      }
  }

  const auto order = detail::actions_by_name(ts.alphabet);
  for (StateId q = 0; q < n; ++q) {
    if (!sol.region[q] || target[q]) continue;
    for (const std::uint32_t a : order) {
      bool ok = false;
      for (std::uint32_t r = 0; r < num_reactions && !ok; ++r) {
        const StateId succ = ts.step(q, ts.alphabet.move_letter(a, r));
        ok = sol.region[succ] && sol.rank[succ] == sol.rank[q] - 1;
      }
      if (ok) {
        sol.action[q] = a;
        break;
      }
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Winning-pending fixpoint over a pair arena:
//   WP_0   = Adv1 x Coop2
//   WP_i+1 = { q | exists a: (exists r: step in WP_i) and
//                  (forall r: step in WP_i u (W1 x ~C2)) }
// The strategy plays the witnessing action on states that entered at level
// i+1 and falls back to the first component's winning strategy elsewhere
// (in particular on WP_0, where that strategy stops on accepting states).

struct WinPendSolution {
  std::vector<bool> region;  // WP
  std::vector<std::int32_t> rank;
  std::vector<std::optional<std::uint32_t>> action;  // omega, fallback included
  std::vector<bool> via_fallback;  // true where omega reads kappa1
};

inline WinPendSolution solve_winpend(const PairArena& pa, const std::vector<bool>& adv1_lifted,
                                     const std::vector<bool>& coop2_lifted,
                                     const std::vector<bool>& w1_lifted,
                                     const std::vector<bool>& c2_lifted,
                                     const RegionSolution& kappa1) {
  detail::require_moves(pa.ts);
  const std::size_t n = pa.ts.num_states();
  const std::size_t num_actions = pa.ts.alphabet.actions().size();
  const std::size_t num_reactions = pa.ts.alphabet.reactions().size();

  WinPendSolution sol;
  sol.region.assign(n, false);
  sol.rank.assign(n, -1);
  sol.action.assign(n, std::nullopt);
  sol.via_fallback.assign(n, true);

  std::vector<bool> safe(n);
  for (StateId q = 0; q < n; ++q) safe[q] = w1_lifted[q] && !c2_lifted[q];

  std::vector<StateId> frontier;
  for (StateId q = 0; q < n; ++q)
    if (adv1_lifted[q] && coop2_lifted[q]) {
      sol.region[q] = true;
      sol.rank[q] = 0;
      frontier.push_back(q);
    }

  // pending[q][a]: reactions whose successor is neither safe nor in WP yet;
  // progress[q][a]: reactions whose successor is in WP. WP_0 members start
  // in `pending` and migrate when the level-0 frontier is processed.
  std::vector<std::uint32_t> pending(n * num_actions, 0);
  std::vector<std::uint32_t> progress(n * num_actions, 0);
  for (StateId q = 0; q < n; ++q)
    for (std::uint32_t a = 0; a < num_actions; ++a)
      for (std::uint32_t r = 0; r < num_reactions; ++r) {
        const StateId succ = pa.ts.step(q, pa.ts.alphabet.move_letter(a, r));
        if (!safe[succ]) ++pending[q * num_actions + a];
      }

  const detail::ReverseEdges rev(pa.ts);
  std::int32_t level = 0;
  while (!frontier.empty()) {
    ++level;
    std::vector<StateId> next;
    for (const StateId s : frontier)
      for (const auto& [q, a] : rev.incoming[s]) {
        // s just entered WP: it stops counting as blocking and counts as
        // progress. Safe states never enter WP (their second component is
        // outside C2 while every WP state's is inside), so the decrement
        // is unconditional.
        ++progress[q * num_actions + a];
        --pending[q * num_actions + a];
        if (pending[q * num_actions + a] == 0 && progress[q * num_actions + a] > 0 &&
            !sol.region[q]) {
          sol.region[q] = true;
          sol.rank[q] = level;
          next.push_back(q);
        }
      }
    frontier = std::move(next);
  }

  const auto order = detail::actions_by_name(pa.ts.alphabet);
  for (StateId q = 0; q < n; ++q) {
    if (sol.region[q] && sol.rank[q] > 0) {
      // The same action must witness both halves of the fixpoint step.
      for (const std::uint32_t a : order) {
        bool all_ok = true;
        bool some_progress = false;
        for (std::uint32_t r = 0; r < num_reactions && all_ok; ++r) {
          const StateId succ = pa.ts.step(q, pa.ts.alphabet.move_letter(a, r));
          const bool in_lower = sol.region[succ] && sol.rank[succ] < sol.rank[q];
          all_ok = in_lower || safe[succ];
          some_progress = some_progress || in_lower;
        }
        if (all_ok && some_progress) {
          sol.action[q] = a;
          sol.via_fallback[q] = false;
          break;
        }
      }
    } else {
      sol.action[q] = kappa1.action[pa.components[q].first];
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// A positional strategy packaged as an executable transducer.

class Transducer {
public:
  Transducer(const TransitionSystem* ts, std::vector<std::optional<std::uint32_t>> output)
      : ts_(ts), output_(std::move(output)), current_(ts->initial) {}

  StateId current() const { return current_; }
  bool stopped() const { return stopped_; }

  // The strategy's choice at the current state; emitting "undefined" stops
  // the play for good.
  std::optional<std::string> output() {
    const auto& a = output_[current_];
    if (!a) {
      stopped_ = true;
      return std::nullopt;
    }
    return ts_->alphabet.actions()[*a];
  }

  void advance(const std::string& action, const std::string& reaction) {
    if (stopped_) throw SemanticError("transducer advanced after it stopped");
    const auto& alphabet = ts_->alphabet;
    const auto a = std::find(alphabet.actions().begin(), alphabet.actions().end(), action);
    const auto r = std::find(alphabet.reactions().begin(), alphabet.reactions().end(), reaction);
    if (a == alphabet.actions().end() || r == alphabet.reactions().end())
      throw SemanticError("move (" + action + ", " + reaction + ") is outside the alphabet");
    current_ = ts_->step(current_, alphabet.move_letter(a - alphabet.actions().begin(),
                                                        r - alphabet.reactions().begin()));
  }

  void reset() {
    current_ = ts_->initial;
    stopped_ = false;
  }

private:
  const TransitionSystem* ts_;
  std::vector<std::optional<std::uint32_t>> output_;
  StateId current_;
  bool stopped_ = false;
};

inline Transducer extract_transducer(const TransitionSystem& ts,
                                     std::vector<std::optional<std::uint32_t>> strategy) {
  if (strategy.size() != ts.num_states())
    throw SemanticError("strategy table does not match the state count");
  return Transducer(&ts, std::move(strategy));
}

}  // namespace tiersynth
