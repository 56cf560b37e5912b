#pragma once

// Top-level pipelines: single-objective synthesis, winning-pending pair
// synthesis, multi-tier goal validation, the full multi-tier synthesis
// (n single solves plus n(n-1)/2 pair solves, both embarrassingly
// parallel), and the runtime executor that dispatches between the
// computed transducers step by step.

#include <atomic>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tiersynth/arena.hpp"
#include "tiersynth/domain.hpp"
#include "tiersynth/errors.hpp"
#include "tiersynth/games.hpp"
#include "tiersynth/progression.hpp"

namespace tiersynth {

// ---------------------------------------------------------------------------
// Multi-tier goal validation: adjacent language containment over the legal
// traces, witnessed by the shortest violating trace if any.

struct TierCheckResult {
  bool ok = true;
  std::size_t pair_index = 0;  // 1-based index i of the violated pair (phi_i, phi_i+1)
  DomainTrace counterexample;
};

namespace detail {

// Shortest legal trace accepted by `stronger` but not by `weaker`, if any.
inline std::optional<DomainTrace> containment_witness(const Domain& domain, const Dfa& weaker,
                                                      const Dfa& stronger) {
  struct Node {
    StateId s, qw, qs;
    bool operator<(const Node& o) const {
      return std::tie(s, qw, qs) < std::tie(o.s, o.qw, o.qs);
    }
    bool operator==(const Node& o) const {
      return s == o.s && qw == o.qw && qs == o.qs;
    }
  };
  auto letter_of = [&](StateId s) {
    return weaker.ts.alphabet.symbol_letter(domain.state_symbol(s));
  };

  struct Edge {
    Node prev;
    std::uint32_t action, reaction;
  };
  std::map<Node, Edge> parent;
  std::set<Node> seen;
  std::deque<Node> queue;

  const Node root{domain.initial(),
                  weaker.ts.step(weaker.ts.initial, letter_of(domain.initial())),
                  stronger.ts.step(stronger.ts.initial, letter_of(domain.initial()))};
  seen.insert(root);
  queue.push_back(root);

  std::optional<Node> goal;
  while (!queue.empty() && !goal) {
    const Node u = queue.front();
    queue.pop_front();
    if (stronger.final[u.qs] && !weaker.final[u.qw]) {
      goal = u;
      break;
    }
    for (const std::uint32_t a : domain.alpha(u.s))
      for (const std::uint32_t r : domain.beta(u.s, a)) {
        const StateId s2 = *domain.delta(u.s, a, r);
        const Node v{s2, weaker.ts.step(u.qw, letter_of(s2)),
                     stronger.ts.step(u.qs, letter_of(s2))};
        if (seen.insert(v).second) {
          parent[v] = {u, a, r};
          queue.push_back(v);
        }
      }
  }
  if (!goal) return std::nullopt;

  std::vector<Edge> edges;
  Node u = *goal;
  while (!(u == root)) {
    const Edge& e = parent.at(u);
    edges.push_back(e);
    u = e.prev;
  }
  DomainTrace trace;
  trace.states.push_back(domain.state(domain.initial()));
  StateId s = domain.initial();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    trace.moves.push_back({domain.actions()[it->action], domain.reactions()[it->reaction]});
    s = *domain.delta(s, it->action, it->reaction);
    trace.states.push_back(domain.state(s));
  }
  return trace;
}

}  // namespace detail

inline TierCheckResult check_multitier(const Domain& domain, const std::vector<Formula>& goals,
                                       const Limits& limits = {}) {
  if (goals.empty()) throw SemanticError("a multi-tier goal needs at least one objective");
  TierCheckResult result;
  for (const Formula& g : goals)
    for (const auto& a : formula_atoms(g))
      if (!std::binary_search(domain.fluents().begin(), domain.fluents().end(), a))
        throw SemanticError("objective mentions unknown fluent '" + a + "'");

  std::vector<Dfa> dfas;
  for (const Formula& g : goals) dfas.push_back(to_dfa(g, domain.fluents(), limits));
  for (std::size_t i = 0; i + 1 < goals.size(); ++i) {
    const auto witness = detail::containment_witness(domain, dfas[i], dfas[i + 1]);
    if (witness) {
      result.ok = false;
      result.pair_index = i + 1;
      result.counterexample = *witness;
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Single objective: build the arena, solve both games.

struct SingleSynthesis {
  Dfa objective;
  Arena arena;
  RegionSolution win;   // adversarial region and kappa
  RegionSolution coop;  // cooperative region and nu
};

inline SingleSynthesis synth_single(const Domain& domain, const DomainDfa& dd, const Formula& f,
                                    const Limits& limits = {}) {
  for (const auto& a : formula_atoms(f))
    if (!std::binary_search(domain.fluents().begin(), domain.fluents().end(), a))
      throw SemanticError("objective mentions unknown fluent '" + a + "'");
  SingleSynthesis out;
  out.objective = to_dfa(f, domain.fluents(), limits);
  out.arena = build_arena(dd, out.objective, limits);
  out.win = solve_adv(out.arena.ts, out.arena.adv);
  out.coop = solve_coop(out.arena.ts, out.arena.coop);
  return out;
}

inline SingleSynthesis synth_single(const Domain& domain, const Formula& f,
                                    const Limits& limits = {}) {
  return synth_single(domain, domain_to_dfa(domain), f, limits);
}

// ---------------------------------------------------------------------------
// Objective pair: the winning-pending region and strategy.

struct PairSynthesis {
  PairArena arena;
  WinPendSolution wp;
  // Region masks lifted into pair coordinates, kept for dispatch and tests.
  std::vector<bool> adv1, coop2, w1, c2, w2;
};

inline PairSynthesis synth_winpend(const SingleSynthesis& s1, const SingleSynthesis& s2,
                                   const Limits& limits = {}) {
  PairSynthesis out;
  out.arena = build_pair_arena(s1.arena, s2.arena, limits);
  out.adv1 = lift_pair(out.arena, s1.arena.adv, std::vector<bool>(s2.arena.num_states(), true));
  out.coop2 = lift_pair(out.arena, std::vector<bool>(s1.arena.num_states(), true), s2.arena.coop);
  out.w1 = lift_pair(out.arena, s1.win.region, std::vector<bool>(s2.arena.num_states(), true));
  out.c2 = lift_pair(out.arena, std::vector<bool>(s1.arena.num_states(), true), s2.coop.region);
  out.w2 = lift_pair(out.arena, std::vector<bool>(s1.arena.num_states(), true), s2.win.region);
  out.wp = solve_winpend(out.arena, out.adv1, out.coop2, out.w1, out.c2, s1.win);
  return out;
}

inline PairSynthesis synth_winpend(const Domain& domain, const Formula& f1, const Formula& f2,
                                   const Limits& limits = {}) {
  const TierCheckResult tiers = check_multitier(domain, {f1, f2}, limits);
  if (!tiers.ok) {
    std::ostringstream os;
    os << "objectives are not tiered: " << trace_to_json(tiers.counterexample).dump()
       << " satisfies the higher objective only";
    throw SemanticError(os.str());
  }
  const DomainDfa dd = domain_to_dfa(domain);
  const SingleSynthesis s1 = synth_single(domain, dd, f1, limits);
  const SingleSynthesis s2 = synth_single(domain, dd, f2, limits);
  return synth_winpend(s1, s2, limits);
}

// ---------------------------------------------------------------------------
// Multi-tier synthesis.

struct SynthesisReport {
  std::size_t single_solves = 0;
  std::size_t pair_solves = 0;
};

struct MultiTierSynthesis {
  explicit MultiTierSynthesis(Domain d) : domain(std::move(d)), dd(domain_to_dfa(domain)) {}

  Domain domain;
  DomainDfa dd;
  std::vector<std::string> goal_texts;
  std::vector<Formula> goals;
  std::vector<SingleSynthesis> singles;  // singles[i] is tier i+1
  std::vector<PairSynthesis> pairs;      // slot (i, j), 0-based i < j
  SynthesisReport report;

  std::size_t tiers() const { return goals.size(); }

  // Slot of the (i, j) pair, 0-based, i < j.
  std::size_t pair_slot(std::size_t i, std::size_t j) const {
    const std::size_t n = goals.size();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }
};

using SynthesisHandle = std::shared_ptr<const MultiTierSynthesis>;

namespace detail {

// Runs tasks 0..count-1 on `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> workers;
  const std::size_t width = std::min(jobs, count);
  for (std::size_t w = 0; w < width; ++w)
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> hold(failure_lock);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

inline SynthesisHandle synth_multitier(const Domain& domain, const std::vector<Formula>& goals,
                                       const std::vector<std::string>& goal_texts = {},
                                       std::size_t jobs = 1, const Limits& limits = {}) {
  const TierCheckResult tiers = check_multitier(domain, goals, limits);
  if (!tiers.ok) {
    std::ostringstream os;
    os << "goals are not tiered at pair " << tiers.pair_index << "; witness "
       << trace_to_json(tiers.counterexample).dump();
    throw SemanticError(os.str());
  }

  auto bundle = std::make_shared<MultiTierSynthesis>(domain);
  bundle->goals = goals;
  bundle->goal_texts = goal_texts;
  if (bundle->goal_texts.empty())
    for (const Formula& g : goals) bundle->goal_texts.push_back(to_string(g));

  const std::size_t n = goals.size();
  bundle->singles.resize(n);
  detail::parallel_for(n, jobs, [&](std::size_t i) {
    bundle->singles[i] = synth_single(domain, bundle->dd, goals[i], limits);
  });

  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) index_pairs.emplace_back(i, j);
  bundle->pairs.resize(index_pairs.size());
  detail::parallel_for(index_pairs.size(), jobs, [&](std::size_t k) {
    const auto [i, j] = index_pairs[k];
    bundle->pairs[bundle->pair_slot(i, j)] =
        synth_winpend(bundle->singles[i], bundle->singles[j], limits);
  });

  bundle->report.single_solves = n;
  bundle->report.pair_solves = index_pairs.size();
  return bundle;
}

// ---------------------------------------------------------------------------
// The adaptive executor: one cursor per objective arena and per pair arena,
// all tracking the same move history, dispatching per tier status.

enum class DispatchKind { omega, kappa, nu, stop };

struct Dispatch {
  std::size_t winning_tier = 0;       // j: highest tier with cursor in W (0 = none)
  std::size_t winpend_tier = 0;       // l: highest tier pursuable while enforcing j
  std::size_t pending_tier = 0;       // m: highest tier with cursor in C
  DispatchKind kind = DispatchKind::stop;
  std::optional<std::string> action;  // disengaged = stop
};

class AdaptiveExecutor {
public:
  explicit AdaptiveExecutor(SynthesisHandle bundle) : bundle_(std::move(bundle)) {
    const auto& b = *bundle_;
    for (const auto& s : b.singles) single_cursor_.push_back(s.arena.ts.initial);
    for (const auto& p : b.pairs) pair_cursor_.push_back(p.arena.ts.initial);
    trace_.states.push_back(b.domain.state(b.domain.initial()));
    domain_cursor_ = b.domain.initial();
  }

  const MultiTierSynthesis& bundle() const { return *bundle_; }
  bool running() const { return running_; }
  bool env_error() const { return env_error_; }
  const DomainTrace& trace() const { return trace_; }
  StateId domain_state() const { return domain_cursor_; }
  StateId single_cursor(std::size_t tier) const { return single_cursor_[tier - 1]; }

  // Region tag of one tier at the current history: win / pend / lose.
  std::string tier_tag(std::size_t tier) const {
    const auto& s = bundle_->singles[tier - 1];
    const StateId q = single_cursor_[tier - 1];
    if (s.win.region[q]) return "win";
    if (s.coop.region[q]) return "pend";
    return "lose";
  }

  Dispatch compute_dispatch() const {
    const auto& b = *bundle_;
    const std::size_t n = b.tiers();
    Dispatch d;
    for (std::size_t i = 1; i <= n; ++i) {
      if (b.singles[i - 1].win.region[single_cursor_[i - 1]]) d.winning_tier = i;
      if (b.singles[i - 1].coop.region[single_cursor_[i - 1]]) d.pending_tier = i;
    }
    if (d.winning_tier > 0) {
      for (std::size_t i = d.winning_tier + 1; i <= n; ++i) {
        const std::size_t slot = b.pair_slot(d.winning_tier - 1, i - 1);
        if (b.pairs[slot].wp.region[pair_cursor_[slot]]) d.winpend_tier = i;
      }
    }
    if (d.winning_tier > 0 && d.winpend_tier > d.winning_tier) {
      const std::size_t slot = b.pair_slot(d.winning_tier - 1, d.winpend_tier - 1);
      d.kind = DispatchKind::omega;
      const auto a = b.pairs[slot].wp.action[pair_cursor_[slot]];
      if (a) d.action = b.domain.actions()[*a];
    } else if (d.winning_tier > 0) {
      d.kind = DispatchKind::kappa;
      const auto a = b.singles[d.winning_tier - 1].win.action[single_cursor_[d.winning_tier - 1]];
      if (a) d.action = b.domain.actions()[*a];
    } else if (d.pending_tier > 0) {
      d.kind = DispatchKind::nu;
      const auto a = b.singles[d.pending_tier - 1].coop.action[single_cursor_[d.pending_tier - 1]];
      if (a) d.action = b.domain.actions()[*a];
    }
    if (!d.action) d.kind = DispatchKind::stop;
    return d;
  }

  // The next action, or nothing when the strategy stops; stopping is final.
  std::optional<std::string> executor_action() {
    if (!running_) throw SemanticError("executor already stopped");
    last_dispatch_ = compute_dispatch();
    if (!last_dispatch_.action) {
      running_ = false;
      pending_action_.reset();
      return std::nullopt;
    }
    pending_action_ = last_dispatch_.action;
    return pending_action_;
  }

  const Dispatch& last_dispatch() const { return last_dispatch_; }

  // Advances every cursor by (action, reaction). The reaction may violate
  // its precondition; that drives all cursors into environment-error states.
  void executor_advance(const std::string& action, const std::string& reaction) {
    if (!running_) throw SemanticError("executor already stopped");
    if (!pending_action_ || *pending_action_ != action)
      throw SemanticError("advance must replay the action the executor emitted");
    const auto& b = *bundle_;
    const auto a = b.domain.action_index(action);
    const auto r = b.domain.reaction_index(reaction);
    if (!r) throw SemanticError("unknown reaction '" + reaction + "'");

    const Letter l = b.dd.ts.alphabet.move_letter(*a, *r);
    for (std::size_t i = 0; i < single_cursor_.size(); ++i)
      single_cursor_[i] = b.singles[i].arena.ts.step(single_cursor_[i], l);
    for (std::size_t k = 0; k < pair_cursor_.size(); ++k)
      pair_cursor_[k] = b.pairs[k].arena.ts.step(pair_cursor_[k], l);

    if (const auto succ = b.domain.delta(domain_cursor_, *a, *r)) {
      domain_cursor_ = *succ;
      trace_.moves.push_back({action, reaction});
      trace_.states.push_back(b.domain.state(*succ));
    } else {
      env_error_ = true;
    }
    pending_action_.reset();
  }

  // Legal reactions to the pending action, by name, sorted.
  std::vector<std::string> legal_reactions(const std::string& action) const {
    const auto& b = *bundle_;
    const auto a = b.domain.action_index(action);
    std::vector<std::string> out;
    if (!a || env_error_) return out;
    for (const std::uint32_t r : b.domain.beta(domain_cursor_, *a))
      out.push_back(b.domain.reactions()[r]);
    return out;
  }

  // Whether reacting with `reaction` to the pending action keeps the
  // currently dispatched transducer inside its own target region.
  bool reaction_stays_in_dispatch_region(const std::string& reaction) const {
    const auto& b = *bundle_;
    const Dispatch& d = last_dispatch_;
    if (!d.action) return true;
    const Letter l = b.dd.ts.alphabet.move_letter(*b.domain.action_index(*d.action),
                                                  *b.domain.reaction_index(reaction));
    switch (d.kind) {
      case DispatchKind::omega: {
        const std::size_t slot = b.pair_slot(d.winning_tier - 1, d.winpend_tier - 1);
        return b.pairs[slot].wp.region[b.pairs[slot].arena.ts.step(pair_cursor_[slot], l)];
      }
      case DispatchKind::kappa: {
        const auto& s = b.singles[d.winning_tier - 1];
        return s.win.region[s.arena.ts.step(single_cursor_[d.winning_tier - 1], l)];
      }
      case DispatchKind::nu: {
        const auto& s = b.singles[d.pending_tier - 1];
        return s.coop.region[s.arena.ts.step(single_cursor_[d.pending_tier - 1], l)];
      }
      case DispatchKind::stop: return true;
    }
    return true;
  }

  // Whether the reaction keeps the given tier cooperatively alive.
  bool reaction_keeps_tier_coop(std::size_t tier, const std::string& action,
                                const std::string& reaction) const {
    const auto& b = *bundle_;
    const Letter l = b.dd.ts.alphabet.move_letter(*b.domain.action_index(action),
                                                  *b.domain.reaction_index(reaction));
    const auto& s = b.singles[tier - 1];
    return s.coop.region[s.arena.ts.step(single_cursor_[tier - 1], l)];
  }

private:
  SynthesisHandle bundle_;
  std::vector<StateId> single_cursor_;
  std::vector<StateId> pair_cursor_;
  DomainTrace trace_;
  StateId domain_cursor_ = 0;
  bool running_ = true;
  bool env_error_ = false;
  std::optional<std::string> pending_action_;
  Dispatch last_dispatch_;
};

inline AdaptiveExecutor make_executor(SynthesisHandle bundle) {
  return AdaptiveExecutor(std::move(bundle));
}

// ---------------------------------------------------------------------------
// Environment policies and the play loop.

class EnvPolicy {
public:
  virtual ~EnvPolicy() = default;
  // Chooses a reaction to `action`; `legal` is non-empty and sorted.
  virtual std::string choose(const AdaptiveExecutor& exec, const std::string& action,
                             const std::vector<std::string>& legal) = 0;
};

struct StepLog {
  std::string action, reaction;
  Dispatch dispatch;
  std::vector<std::string> tier_tags;
};

struct PlayResult {
  DomainTrace trace;
  std::vector<bool> verdicts;  // per tier, recomputed by the direct evaluator
  bool truncated = false;
  bool env_error = false;
  std::vector<StepLog> log;

  // Highest satisfied tier, 0 when none.
  std::size_t highest_tier() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i)
      if (verdicts[i]) best = i + 1;
    return best;
  }
};

inline PlayResult play(AdaptiveExecutor& exec, EnvPolicy& env, std::size_t max_steps = 512) {
  if (exec.trace().length() != 0 || !exec.running())
    throw SemanticError("play needs a fresh executor");
  PlayResult result;
  std::size_t steps = 0;
  while (steps < max_steps) {
    const auto action = exec.executor_action();
    if (!action) break;
    StepLog log;
    log.action = *action;
    log.dispatch = exec.last_dispatch();
    for (std::size_t i = 1; i <= exec.bundle().tiers(); ++i)
      log.tier_tags.push_back(exec.tier_tag(i));
    const auto legal = exec.legal_reactions(*action);
    log.reaction = env.choose(exec, *action, legal);
    exec.executor_advance(*action, log.reaction);
    result.log.push_back(std::move(log));
    ++steps;
    if (exec.env_error()) break;
  }
  result.truncated = exec.running() && !exec.env_error() && steps >= max_steps;
  result.env_error = exec.env_error();
  result.trace = exec.trace();
  for (const Formula& g : exec.bundle().goals)
    result.verdicts.push_back(trace_satisfies(exec.bundle().domain, result.trace, g));
  return result;
}

// ---------------------------------------------------------------------------
// Goals files and strategy bundles.

inline std::vector<std::string> load_goal_texts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SemanticError("invalid JSON in '" + path + "': " + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw SemanticError("goals file must be a non-empty JSON array of formula strings");
  std::vector<std::string> out;
  for (const auto& g : doc) {
    if (!g.is_string()) throw SemanticError("goals file entries must be strings");
    out.push_back(g.get<std::string>());
  }
  return out;
}

inline std::vector<Formula> parse_goals(const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const auto& t : texts) out.push_back(parse_formula(t));
  return out;
}

namespace detail {

inline std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace detail

inline std::string domain_hash(const Domain& d) { return detail::fnv1a64_hex(d.to_json().dump()); }

inline nlohmann::json single_strategy_json(const MultiTierSynthesis& b, std::size_t tier) {
  const SingleSynthesis& s = b.singles[tier - 1];
  nlohmann::json doc;
  doc["version"] = 1;
  doc["objective_index"] = tier;
  doc["initial"] = s.arena.ts.initial;
  auto& states = doc["states"] = nlohmann::json::array();
  for (StateId q = 0; q < s.arena.num_states(); ++q) {
    nlohmann::json entry;
    entry["id"] = q;
    if (s.win.region[q]) {
      entry["tag"] = "win";
      entry["rank"] = s.win.rank[q];
      entry["action"] =
          s.win.action[q] ? nlohmann::json(b.domain.actions()[*s.win.action[q]]) : nullptr;
    } else if (s.coop.region[q]) {
      entry["tag"] = "pend";
      entry["rank"] = s.coop.rank[q];
      entry["action"] =
          s.coop.action[q] ? nlohmann::json(b.domain.actions()[*s.coop.action[q]]) : nullptr;
    } else {
      entry["tag"] = "lose";
      entry["rank"] = nullptr;
      entry["action"] = nullptr;
    }
    states.push_back(std::move(entry));
  }
  return doc;
}

inline nlohmann::json pair_strategy_json(const MultiTierSynthesis& b, std::size_t i,
                                         std::size_t j) {
  const PairSynthesis& p = b.pairs[b.pair_slot(i - 1, j - 1)];
  nlohmann::json doc;
  doc["version"] = 1;
  doc["pair"] = {i, j};
  doc["initial"] = p.arena.ts.initial;
  auto& states = doc["states"] = nlohmann::json::array();
  for (StateId q = 0; q < p.arena.num_states(); ++q) {
    nlohmann::json entry;
    entry["id"] = q;
    entry["tag"] = p.wp.region[q] ? "wp" : "fallback";
    entry["rank"] = p.wp.region[q] ? nlohmann::json(p.wp.rank[q]) : nullptr;
    entry["action"] =
        p.wp.action[q] ? nlohmann::json(b.domain.actions()[*p.wp.action[q]]) : nullptr;
    states.push_back(std::move(entry));
  }
  return doc;
}

inline nlohmann::json bundle_manifest(const MultiTierSynthesis& b) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["domain_hash"] = domain_hash(b.domain);
  doc["goals"] = b.goal_texts;
  doc["tie_break"] = "lex-min-action";
  doc["report"] = {{"single_solves", b.report.single_solves},
                   {"pair_solves", b.report.pair_solves}};
  auto& singles = doc["objective_files"] = nlohmann::json::array();
  for (std::size_t i = 1; i <= b.tiers(); ++i)
    singles.push_back("objective_" + std::to_string(i) + ".json");
  auto& pairs = doc["pair_files"] = nlohmann::json::array();
  for (std::size_t i = 1; i <= b.tiers(); ++i)
    for (std::size_t j = i + 1; j <= b.tiers(); ++j)
      pairs.push_back("pair_" + std::to_string(i) + "_" + std::to_string(j) + ".json");
  return doc;
}

inline void write_bundle(const MultiTierSynthesis& b, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create bundle directory '" + dir + "'");
  auto write = [&](const std::string& name, const nlohmann::json& doc) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw IoError("cannot write '" + name + "' in '" + dir + "'");
    out << doc.dump(2) << '\n';
  };
  write("manifest.json", bundle_manifest(b));
  for (std::size_t i = 1; i <= b.tiers(); ++i)
    write("objective_" + std::to_string(i) + ".json", single_strategy_json(b, i));
  for (std::size_t i = 1; i <= b.tiers(); ++i)
    for (std::size_t j = i + 1; j <= b.tiers(); ++j)
      write("pair_" + std::to_string(i) + "_" + std::to_string(j) + ".json",
            pair_strategy_json(b, i, j));
}

inline nlohmann::json load_bundle_manifest(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "manifest.json");
  if (!in) throw IoError("cannot open manifest in '" + dir + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SemanticError(std::string("invalid bundle manifest: ") + e.what());
  }
  return doc;
}

}  // namespace tiersynth
