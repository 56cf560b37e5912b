#pragma once

// Independent ground truth for small instances. Two routes:
//
//  * Positional-strategy enumeration over the arena fragment reachable from
//    a state, with a per-state stop choice. Exhaustive and capped; a cap
//    overrun is a hard error, never a guess. Positional strategies suffice
//    for the reachability conditions solved here; the stop choice is part
//    of the enumeration because plays end when the strategy goes undefined.
//
//  * Naive definitional fixpoints recomputed by full rescans per round, for
//    arenas beyond any feasible enumeration. Same math as the solvers,
//    deliberately different code path.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tiersynth/arena.hpp"
#include "tiersynth/domain.hpp"
#include "tiersynth/errors.hpp"

namespace tiersynth {

enum class Verdict { win, pend, lose };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::win: return "win";
    case Verdict::pend: return "pend";
    case Verdict::lose: return "lose";
  }
  return "?";
}

struct OracleCaps {
  std::size_t max_states = 12;
  std::size_t max_actions = 6;
};

struct ValueVerdict {
  Verdict value = Verdict::lose;
  // win: a positional witness over arena states (no entry = stop).
  std::map<StateId, std::uint32_t> witness_strategy;
  // pend: one accepting play as (action index, reaction index) moves.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> witness_play;
  // lose: how many strategies were exhausted.
  std::size_t strategies_enumerated = 0;
};

namespace detail {

// The arena fragment reachable from one state through legal moves only.
class OracleGame {
public:
  OracleGame(const Domain& domain, const Arena& arena, StateId start, const OracleCaps& caps)
      : arena_(arena) {
    if (domain.actions().size() > caps.max_actions)
      throw ResourceError("oracle action cap exceeded");

    std::map<StateId, std::uint32_t> local;
    std::deque<StateId> queue;
    auto intern = [&](StateId q) {
      auto [it, inserted] = local.try_emplace(q, static_cast<std::uint32_t>(nodes_.size()));
      if (inserted) {
        if (nodes_.size() >= caps.max_states)
          throw ResourceError("oracle state cap exceeded (" +
                              std::to_string(caps.max_states) + ")");
        nodes_.push_back(q);
        queue.push_back(q);
      }
      return it->second;
    };

    intern(start);
    while (!queue.empty()) {
      const StateId q = queue.front();
      queue.pop_front();
      const std::uint32_t u = local.at(q);
      const StateId s = arena.domain_component[q];
      moves_.emplace_back();
      if (arena.ag_err[q] || arena.env_err[q]) continue;  // no legal continuation
      for (const std::uint32_t a : domain.alpha(s)) {
        std::vector<std::uint32_t> succs;
        for (const std::uint32_t r : domain.beta(s, a))
          succs.push_back(intern(arena.ts.step(q, arena.ts.alphabet.move_letter(a, r))));
        moves_[u].emplace_back(a, std::move(succs));
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }
  StateId arena_state(std::uint32_t u) const { return nodes_[u]; }
  bool accepting(std::uint32_t u) const { return arena_.acc[nodes_[u]]; }
  const std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>& moves(
      std::uint32_t u) const {
    return moves_[u];
  }

private:
  const Arena& arena_;
  std::vector<StateId> nodes_;
  // moves_[u]: (action index, successor per legal reaction, in reaction order)
  std::vector<std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>> moves_;
};

// Evaluates one full assignment. Plays are finite iff no cycle is reachable
// in the strategy-induced graph, which is exactly the horizon-bounded
// expansion "a revisited state under a positional strategy means an
// infinite play".
struct PlayEvaluation {
  bool all_finite_accepting = true;
  bool some_finite_accepting = false;
};

class AssignmentEvaluator {
public:
  // choice[u]: -1 unassigned (treated as stop does not occur here: callers
  // evaluate only full assignments on reachable states), -2 stop, else action
  // slot index into moves(u).
  AssignmentEvaluator(const OracleGame& game, const std::vector<int>& choice)
      : game_(game), choice_(choice), color_(game.size(), 0) {}

  PlayEvaluation evaluate(std::uint32_t start) {
    PlayEvaluation out;
    out.all_finite_accepting = visit(start);
    out.some_finite_accepting = some_accepting(start);
    return out;
  }

private:
  // true iff every play from u is finite and ends on an accepting stop.
  bool visit(std::uint32_t u) {
    if (color_[u] == 1) return false;  // cycle: some play is infinite
    if (color_[u] == 2) return all_ok_[u];
    color_[u] = 1;
    bool ok;
    if (choice_[u] == -2) {
      ok = game_.accepting(u);
    } else {
      ok = true;
      for (const std::uint32_t succ : game_.moves(u)[choice_[u]].second)
        ok = visit(succ) && ok;
    }
    color_[u] = 2;
    all_ok_[u] = ok;
    return ok;
  }

  bool some_accepting(std::uint32_t u) {
    if (seen_.count(u)) return some_[u];
    seen_.insert(u);
    bool found;
    if (choice_[u] == -2) {
      found = game_.accepting(u);
    } else {
      found = false;
      for (const std::uint32_t succ : game_.moves(u)[choice_[u]].second)
        found = some_accepting(succ) || found;
    }
    some_[u] = found;
    return found;
  }

  const OracleGame& game_;
  const std::vector<int>& choice_;
  std::vector<int> color_;
  std::map<std::uint32_t, bool> all_ok_;
  std::set<std::uint32_t> seen_;
  std::map<std::uint32_t, bool> some_;
};

class StrategyEnumerator {
public:
  explicit StrategyEnumerator(const OracleGame& game)
      : game_(game), choice_(game.size(), -1) {}

  ValueVerdict run() {
    ValueVerdict verdict;
    verdict.value = Verdict::lose;
    enumerate(verdict);
    return verdict;
  }

private:
  // Reachable states under the partial assignment; the first unassigned one
  // (in discovery order) is the next decision point.
  std::optional<std::uint32_t> next_decision(std::vector<std::uint32_t>& reachable) const {
    std::optional<std::uint32_t> decision;
    std::vector<bool> seen(game_.size(), false);
    std::deque<std::uint32_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      reachable.push_back(u);
      if (choice_[u] == -1) {
        if (!decision) decision = u;
        continue;
      }
      if (choice_[u] == -2) continue;
      for (const std::uint32_t succ : game_.moves(u)[choice_[u]].second)
        if (!seen[succ]) {
          seen[succ] = true;
          queue.push_back(succ);
        }
    }
    return decision;
  }

  // Returns true once a winning strategy was found (cuts the search).
  bool enumerate(ValueVerdict& verdict) {
    std::vector<std::uint32_t> reachable;
    const auto decision = next_decision(reachable);
    if (!decision) {
      ++verdict.strategies_enumerated;
      AssignmentEvaluator eval(game_, choice_);
      const PlayEvaluation result = eval.evaluate(0);
      if (result.all_finite_accepting) {
        verdict.value = Verdict::win;
        record_win_witness(verdict, reachable);
        return true;
      }
      if (result.some_finite_accepting && verdict.value == Verdict::lose) {
        verdict.value = Verdict::pend;
        record_pend_witness(verdict);
      }
      return false;
    }
    const std::uint32_t u = *decision;
    choice_[u] = -2;  // stop
    if (enumerate(verdict)) return true;
    for (int slot = 0; slot < static_cast<int>(game_.moves(u).size()); ++slot) {
      choice_[u] = slot;
      if (enumerate(verdict)) return true;
    }
    choice_[u] = -1;
    return false;
  }

  void record_win_witness(ValueVerdict& verdict, const std::vector<std::uint32_t>& reachable) {
    verdict.witness_strategy.clear();
    for (const std::uint32_t u : reachable)
      if (choice_[u] >= 0)
        verdict.witness_strategy[game_.arena_state(u)] = game_.moves(u)[choice_[u]].first;
  }

  // Shortest accepting play under the current assignment, as move indices.
  void record_pend_witness(ValueVerdict& verdict) {
    struct Edge {
      std::uint32_t prev;
      std::uint32_t action, reaction_slot;
    };
    std::map<std::uint32_t, Edge> parent;
    std::deque<std::uint32_t> queue{0};
    std::set<std::uint32_t> seen{0};
    std::optional<std::uint32_t> goal;
    while (!queue.empty() && !goal) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      if (choice_[u] == -2) {
        if (game_.accepting(u)) goal = u;
        continue;
      }
      const auto& [action, succs] = game_.moves(u)[choice_[u]];
      for (std::uint32_t slot = 0; slot < succs.size(); ++slot) {
        const std::uint32_t succ = succs[slot];
        if (seen.insert(succ).second) {
          parent[succ] = {u, action, slot};
          queue.push_back(succ);
        }
      }
    }
    verdict.witness_play.clear();
    if (!goal) return;
    std::uint32_t u = *goal;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rev;
    while (u != 0) {
      const Edge& e = parent.at(u);
      rev.emplace_back(e.action, e.reaction_slot);
      u = e.prev;
    }
    verdict.witness_play.assign(rev.rbegin(), rev.rend());
  }

  const OracleGame& game_;
  std::vector<int> choice_;
};

}  // namespace detail

// History value by exhaustive positional-strategy enumeration from the
// arena state the history leads to.
inline ValueVerdict oracle_value_at(const Domain& domain, const Arena& arena, StateId start,
                                    const OracleCaps& caps = {}) {
  detail::OracleGame game(domain, arena, start, caps);
  return detail::StrategyEnumerator(game).run();
}

inline StateId arena_state_of_history(const Domain& domain, const Arena& arena,
                                      const DomainTrace& h) {
  if (!is_legal_trace(domain, h)) throw SemanticError("oracle histories must be legal");
  StateId q = arena.ts.initial;
  for (const auto& m : h.moves)
    q = arena.ts.step(q, arena.ts.alphabet.move_letter(*domain.action_index(m.action),
                                                       *domain.reaction_index(m.reaction)));
  return q;
}

struct OracleRegionResult {
  std::vector<bool> win, coop;
};

// Per-state classification by running the enumeration with each reachable
// arena state as the initial one. Error-tagged states carry the vacuous
// classification that follows from the target definitions: an environment
// violation wins for the agent, an agent violation loses, neither
// cooperates.
inline OracleRegionResult oracle_regions(const Domain& domain, const Arena& arena,
                                         const OracleCaps& caps = {}) {
  OracleRegionResult out;
  out.win.assign(arena.num_states(), false);
  out.coop.assign(arena.num_states(), false);
  for (StateId q = 0; q < arena.num_states(); ++q) {
    if (arena.env_err[q]) {
      out.win[q] = true;
      continue;
    }
    if (arena.ag_err[q]) continue;
    const ValueVerdict v = oracle_value_at(domain, arena, q, caps);
    out.win[q] = (v.value == Verdict::win);
    out.coop[q] = (v.value != Verdict::lose);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Naive definitional fixpoints: full rescans per round, no worklists.

inline OracleRegionResult oracle_regions_naive(const TransitionSystem& ts,
                                               const std::vector<bool>& adv_target,
                                               const std::vector<bool>& coop_target) {
  const std::size_t n = ts.num_states();
  const std::size_t num_actions = ts.alphabet.actions().size();
  const std::size_t num_reactions = ts.alphabet.reactions().size();

  OracleRegionResult out;
  out.win = adv_target;
  out.coop = coop_target;

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> next = out.win;
    for (StateId q = 0; q < n; ++q) {
      if (out.win[q]) continue;
      for (std::uint32_t a = 0; a < num_actions && !next[q]; ++a) {
        bool all = true;
        for (std::uint32_t r = 0; r < num_reactions && all; ++r)
          all = out.win[ts.step(q, ts.alphabet.move_letter(a, r))];
        if (all) next[q] = changed = true;
      }
    }
    out.win = std::move(next);
  }

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> next = out.coop;
    for (StateId q = 0; q < n; ++q) {
      if (out.coop[q]) continue;
      for (std::uint32_t a = 0; a < num_actions && !next[q]; ++a)
        for (std::uint32_t r = 0; r < num_reactions && !next[q]; ++r)
          if (out.coop[ts.step(q, ts.alphabet.move_letter(a, r))]) next[q] = changed = true;
    }
    out.coop = std::move(next);
  }
  return out;
}

struct OracleWinPendResult {
  std::vector<bool> region;
  std::vector<std::int32_t> rank;
};

inline OracleWinPendResult oracle_winpend(const PairArena& pa,
                                          const std::vector<bool>& adv1_lifted,
                                          const std::vector<bool>& coop2_lifted,
                                          const std::vector<bool>& w1_lifted,
                                          const std::vector<bool>& c2_lifted) {
  const std::size_t n = pa.ts.num_states();
  const std::size_t num_actions = pa.ts.alphabet.actions().size();
  const std::size_t num_reactions = pa.ts.alphabet.reactions().size();

  OracleWinPendResult out;
  out.region.assign(n, false);
  out.rank.assign(n, -1);
  std::vector<bool> safe(n);
  for (StateId q = 0; q < n; ++q) {
    safe[q] = w1_lifted[q] && !c2_lifted[q];
    if (adv1_lifted[q] && coop2_lifted[q]) {
      out.region[q] = true;
      out.rank[q] = 0;
    }
  }

  for (std::int32_t round = 1;; ++round) {
    const std::vector<bool> previous = out.region;
    bool changed = false;
    for (StateId q = 0; q < n; ++q) {
      if (out.region[q]) continue;
      for (std::uint32_t a = 0; a < num_actions; ++a) {
        bool all = true;
        bool some = false;
        for (std::uint32_t r = 0; r < num_reactions && all; ++r) {
          const StateId succ = pa.ts.step(q, pa.ts.alphabet.move_letter(a, r));
          all = previous[succ] || safe[succ];
          some = some || previous[succ];
        }
        if (all && some) {
          out.region[q] = true;
          out.rank[q] = round;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive reaction-branching expansion of the histories consistent with
// a strategy. Returns every consistent history with 1 <= length <= depth;
// depth 0 yields just the empty history.

using StrategyFn = std::function<std::optional<std::string>(const DomainTrace&)>;

inline std::vector<DomainTrace> enumerate_histories(const Domain& domain, const StrategyFn& fn,
                                                    std::size_t depth) {
  if (depth > 8) throw ResourceError("history enumeration depth cap is 8");
  DomainTrace root;
  root.states.push_back(domain.state(domain.initial()));
  if (depth == 0) return {root};

  std::vector<DomainTrace> out;
  std::function<void(const DomainTrace&, StateId)> expand = [&](const DomainTrace& h,
                                                                StateId current) {
    if (h.length() >= 1) out.push_back(h);
    if (h.length() == depth) return;
    const auto action = fn(h);
    if (!action) return;
    const auto a = domain.action_index(*action);
    if (!a) throw SemanticError("strategy chose an undeclared action '" + *action + "'");
    for (const std::uint32_t r : domain.beta(current, *a)) {
      const StateId succ = *domain.delta(current, *a, r);
      DomainTrace ext = h;
      ext.moves.push_back({*action, domain.reactions()[r]});
      ext.states.push_back(domain.state(succ));
      expand(ext, succ);
    }
  };
  expand(root, domain.initial());
  return out;
}

}  // namespace tiersynth
