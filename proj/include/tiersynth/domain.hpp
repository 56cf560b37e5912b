#pragma once

// Nondeterministic planning domains with explicit reaction-resolved
// transitions. States are sets of fluents, canonicalized as sorted
// duplicate-free name lists. Loading validates the three domain
// properties on the states reachable from the initial state; everything
// unreachable is treated as absent.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tiersynth/automata.hpp"
#include "tiersynth/errors.hpp"
#include "tiersynth/formula.hpp"

namespace tiersynth {

using FluentSet = std::vector<std::string>;  // sorted, duplicate-free

class DomainError : public SemanticError {
public:
  DomainError(const std::string& what, std::string state = "", std::string action = "")
      : SemanticError(what), state_(std::move(state)), action_(std::move(action)) {}
  const std::string& state() const { return state_; }
  const std::string& action() const { return action_; }

private:
  std::string state_, action_;
};

struct Move {
  std::string action, reaction;
};

struct DomainTrace {
  std::vector<FluentSet> states;  // states.size() == moves.size() + 1
  std::vector<Move> moves;

  std::size_t length() const { return moves.size(); }
};

struct TransitionSpec {
  FluentSet from;
  std::string action, reaction;
  FluentSet to;
};

namespace detail {
inline std::string fluent_set_name(const FluentSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i];
  }
  return out + "}";
}
}  // namespace detail

class Domain {
public:
  Domain(std::vector<std::string> fluents, FluentSet initial,
         std::vector<std::string> actions, std::vector<std::string> reactions,
         const std::vector<TransitionSpec>& transitions) {
    fluents_ = std::move(fluents);
    std::sort(fluents_.begin(), fluents_.end());
    if (std::adjacent_find(fluents_.begin(), fluents_.end()) != fluents_.end())
      throw DomainError("duplicate fluent name");
    for (const auto& f : fluents_)
      if (!is_valid_atom_name(f)) throw DomainError("invalid fluent name: '" + f + "'");

    actions_ = std::move(actions);
    std::sort(actions_.begin(), actions_.end());
    if (actions_.empty() || std::adjacent_find(actions_.begin(), actions_.end()) != actions_.end())
      throw DomainError("actions must be non-empty and unique");
    reactions_ = std::move(reactions);
    std::sort(reactions_.begin(), reactions_.end());
    if (reactions_.empty() ||
        std::adjacent_find(reactions_.begin(), reactions_.end()) != reactions_.end())
      throw DomainError("reactions must be non-empty and unique");

    check_state(initial);

    // Collect declared transitions keyed by (from, action, reaction).
    std::map<FluentSet, std::map<std::pair<std::uint32_t, std::uint32_t>, FluentSet>> declared;
    for (const auto& t : transitions) {
      check_state(t.from);
      check_state(t.to);
      const auto a = action_index(t.action);
      const auto r = reaction_index(t.reaction);
      if (!a) throw DomainError("undeclared action '" + t.action + "'");
      if (!r) throw DomainError("undeclared reaction '" + t.reaction + "'");
      auto [it, inserted] = declared[t.from].try_emplace({*a, *r}, t.to);
      if (!inserted)
        throw DomainError("duplicate transition for (" + detail::fluent_set_name(t.from) + ", " +
                              t.action + ", " + t.reaction + ")",
                          detail::fluent_set_name(t.from), t.action);
    }

    // Materialize the reachable fragment, BFS from the initial state in
    // sorted move order.
    intern(initial);
    initial_ = 0;
    for (StateId q = 0; q < states_.size(); ++q) {
      auto it = declared.find(states_[q]);
      if (it == declared.end() || it->second.empty())
        throw DomainError(
            "reachable state " + detail::fluent_set_name(states_[q]) + " has no agent action",
            detail::fluent_set_name(states_[q]));
      for (const auto& [key, to] : it->second)
        delta_[{q, key.first, key.second}] = intern(to);
    }

    // Uniqueness of environment reaction.
    for (const auto& [key, target] : delta_) {
      const auto& [s, a, r] = key;
      for (std::uint32_t r2 = r + 1; r2 < reactions_.size(); ++r2) {
        auto other = delta_.find({s, a, r2});
        if (other != delta_.end() && other->second == target)
          throw DomainError("uniqueness of environment reaction violated at (" +
                                detail::fluent_set_name(states_[s]) + ", " + actions_[a] + ")",
                            detail::fluent_set_name(states_[s]), actions_[a]);
      }
    }
  }

  static Domain from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw DomainError("domain document must be a JSON object");
    static const std::set<std::string> keys = {"fluents", "initial", "actions", "reactions",
                                               "transitions"};
    for (const auto& [k, v] : doc.items())
      if (keys.find(k) == keys.end()) throw DomainError("unknown key '" + k + "'");
    for (const auto& k : keys)
      if (!doc.contains(k)) throw DomainError("missing key '" + k + "'");

    auto names = [](const nlohmann::json& j, const char* what) {
      if (!j.is_array()) throw DomainError(std::string(what) + " must be an array");
      std::vector<std::string> out;
      for (const auto& e : j) {
        if (!e.is_string()) throw DomainError(std::string(what) + " entries must be strings");
        out.push_back(e.get<std::string>());
      }
      return out;
    };
    auto state = [&](const nlohmann::json& j) {
      FluentSet s = names(j, "state");
      if (!std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end())
        throw DomainError("states must be sorted duplicate-free fluent arrays");
      return s;
    };

    std::vector<TransitionSpec> transitions;
    if (!doc["transitions"].is_array()) throw DomainError("transitions must be an array");
    for (const auto& t : doc["transitions"]) {
      if (!t.is_object()) throw DomainError("transition entries must be objects");
      static const std::set<std::string> tkeys = {"from", "action", "reaction", "to"};
      for (const auto& [k, v] : t.items())
        if (tkeys.find(k) == tkeys.end())
          throw DomainError("unknown transition key '" + k + "'");
      for (const auto& k : tkeys)
        if (!t.contains(k)) throw DomainError("transition missing key '" + k + "'");
      if (!t["action"].is_string() || !t["reaction"].is_string())
        throw DomainError("transition action/reaction must be strings");
      transitions.push_back(
          {state(t["from"]), t["action"].get<std::string>(), t["reaction"].get<std::string>(),
           state(t["to"])});
    }
    return Domain(names(doc["fluents"], "fluents"), state(doc["initial"]),
                  names(doc["actions"], "actions"), names(doc["reactions"], "reactions"),
                  transitions);
  }

  static Domain load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw DomainError("invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(doc);
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["fluents"] = fluents_;
    doc["initial"] = states_[initial_];
    doc["actions"] = actions_;
    doc["reactions"] = reactions_;
    auto& ts = doc["transitions"] = nlohmann::json::array();
    for (const auto& [key, to] : delta_) {
      const auto& [s, a, r] = key;
      ts.push_back({{"from", states_[s]},
                    {"action", actions_[a]},
                    {"reaction", reactions_[r]},
                    {"to", states_[to]}});
    }
    return doc;
  }

  const std::vector<std::string>& fluents() const { return fluents_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& reactions() const { return reactions_; }
  std::size_t num_states() const { return states_.size(); }
  StateId initial() const { return initial_; }
  const FluentSet& state(StateId q) const { return states_[q]; }
  std::string state_name(StateId q) const { return detail::fluent_set_name(states_[q]); }

  std::optional<StateId> find_state(const FluentSet& s) const {
    auto it = state_index_.find(s);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }

  Symbol state_symbol(StateId q) const {
    return Symbol(states_[q].begin(), states_[q].end());
  }

  std::optional<std::uint32_t> action_index(const std::string& name) const {
    auto it = std::lower_bound(actions_.begin(), actions_.end(), name);
    if (it == actions_.end() || *it != name) return std::nullopt;
    return static_cast<std::uint32_t>(it - actions_.begin());
  }
  std::optional<std::uint32_t> reaction_index(const std::string& name) const {
    auto it = std::lower_bound(reactions_.begin(), reactions_.end(), name);
    if (it == reactions_.end() || *it != name) return std::nullopt;
    return static_cast<std::uint32_t>(it - reactions_.begin());
  }

  // Agent action preconditions, derived from the transition table.
  std::vector<std::uint32_t> alpha(StateId s) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < actions_.size(); ++a)
      if (!beta(s, a).empty()) out.push_back(a);
    return out;
  }

  std::vector<std::uint32_t> beta(StateId s, std::uint32_t a) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r = 0; r < reactions_.size(); ++r)
      if (delta_.count({s, a, r})) out.push_back(r);
    return out;
  }

  std::optional<StateId> delta(StateId s, std::uint32_t a, std::uint32_t r) const {
    auto it = delta_.find({s, a, r});
    if (it == delta_.end()) return std::nullopt;
    return it->second;
  }

private:
  void check_state(const FluentSet& s) const {
    for (const auto& f : s)
      if (!std::binary_search(fluents_.begin(), fluents_.end(), f))
        throw DomainError("state mentions undeclared fluent '" + f + "'");
  }

  StateId intern(const FluentSet& s) {
    auto [it, inserted] = state_index_.try_emplace(s, static_cast<StateId>(states_.size()));
    if (inserted) states_.push_back(s);
    return it->second;
  }

  std::vector<std::string> fluents_, actions_, reactions_;
  std::vector<FluentSet> states_;
  std::map<FluentSet, StateId> state_index_;
  std::map<std::tuple<StateId, std::uint32_t, std::uint32_t>, StateId> delta_;
  StateId initial_ = 0;
};

// ---------------------------------------------------------------------------
// Domain as a deterministic transition system over Act x React, with two
// absorbing error sinks for precondition violations.

struct DomainDfa {
  TransitionSystem ts;
  StateId ag_err = 0, env_err = 0;
  // ts state ids 0..n-1 coincide with domain state ids.
  std::size_t num_domain_states = 0;
  std::vector<Symbol> state_symbols;     // per domain state
  std::vector<std::string> state_names;  // per domain state, plus the two sinks

  bool is_error(StateId q) const { return q == ag_err || q == env_err; }
};

inline DomainDfa domain_to_dfa(const Domain& d) {
  DomainDfa out;
  out.ts.alphabet = Alphabet::moves(d.actions(), d.reactions());
  out.ts.initial = d.initial();
  out.num_domain_states = d.num_states();
  out.ag_err = static_cast<StateId>(d.num_states());
  out.env_err = static_cast<StateId>(d.num_states() + 1);
  for (StateId s = 0; s < d.num_states(); ++s) {
    out.state_symbols.push_back(d.state_symbol(s));
    out.state_names.push_back(d.state_name(s));
  }
  out.state_names.push_back("ag_err");
  out.state_names.push_back("env_err");

  const std::size_t letters = out.ts.alphabet.size();
  for (StateId s = 0; s < d.num_states(); ++s) {
    std::vector<StateId> row(letters);
    for (std::uint32_t a = 0; a < d.actions().size(); ++a) {
      const bool action_allowed = !d.beta(s, a).empty();
      for (std::uint32_t r = 0; r < d.reactions().size(); ++r) {
        const Letter l = out.ts.alphabet.move_letter(a, r);
        if (!action_allowed) {
          row[l] = out.ag_err;
        } else if (auto succ = d.delta(s, a, r)) {
          row[l] = *succ;
        } else {
          row[l] = out.env_err;
        }
      }
    }
    out.ts.next.push_back(std::move(row));
  }
  out.ts.next.push_back(std::vector<StateId>(letters, out.ag_err));
  out.ts.next.push_back(std::vector<StateId>(letters, out.env_err));
  return out;
}

// ---------------------------------------------------------------------------
// Trace legality and satisfaction.

inline bool is_legal_trace(const Domain& d, const DomainTrace& t) {
  if (t.states.size() != t.moves.size() + 1) return false;
  auto current = d.find_state(t.states[0]);
  if (!current || *current != d.initial()) return false;
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const auto a = d.action_index(t.moves[i].action);
    const auto r = d.reaction_index(t.moves[i].reaction);
    if (!a || !r) return false;
    const auto succ = d.delta(*current, *a, *r);
    if (!succ) return false;
    const auto declared = d.find_state(t.states[i + 1]);
    if (!declared || *declared != *succ) return false;
    current = succ;
  }
  return true;
}

inline Trace trace_state_projection(const DomainTrace& t) {
  Trace out;
  for (const auto& s : t.states) out.emplace_back(s.begin(), s.end());
  return out;
}

inline bool trace_satisfies(const Domain& d, const DomainTrace& t, const Formula& f) {
  if (!is_legal_trace(d, t)) throw SemanticError("trace is not legal in the domain");
  return evaluate(trace_state_projection(t), f);
}

// ---------------------------------------------------------------------------
// Trace JSON: {"states": [[fluent...]...], "moves": [{"action","reaction"}...]}

inline nlohmann::json trace_to_json(const DomainTrace& t) {
  nlohmann::json doc;
  doc["states"] = t.states;
  auto& moves = doc["moves"] = nlohmann::json::array();
  for (const auto& m : t.moves)
    moves.push_back({{"action", m.action}, {"reaction", m.reaction}});
  return doc;
}

inline DomainTrace trace_from_json(const nlohmann::json& doc) {
  DomainTrace t;
  if (!doc.is_object() || !doc.contains("states") || !doc.contains("moves"))
    throw SemanticError("trace document needs 'states' and 'moves'");
  for (const auto& s : doc["states"]) t.states.push_back(s.get<FluentSet>());
  for (const auto& m : doc["moves"])
    t.moves.push_back({m.at("action").get<std::string>(), m.at("reaction").get<std::string>()});
  if (t.states.size() != t.moves.size() + 1)
    throw SemanticError("trace must have one more state than moves");
  return t;
}

// Symbol-trace JSON: [["g"],["g","c"]]
inline Trace symbol_trace_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw SemanticError("trace must be a JSON array of arrays");
  Trace t;
  for (const auto& sym : doc) {
    Symbol s;
    for (const auto& a : sym) s.insert(a.get<std::string>());
    t.push_back(std::move(s));
  }
  return t;
}

}  // namespace tiersynth
