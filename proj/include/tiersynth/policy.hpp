#pragma once

// Environment policies for simulation: scripted reaction lists, seeded
// random choice, and the two greedy heuristics. The greedy adversary tries
// to push the dispatched transducer out of its target region; the greedy
// cooperator keeps the highest pending tier cooperatively alive. Both are
// heuristics, not optimal adversaries/collaborators, and break ties by
// taking the lexicographically smallest reaction.

#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tiersynth/errors.hpp"
#include "tiersynth/synthesis.hpp"

namespace tiersynth {

class ScriptedPolicy : public EnvPolicy {
public:
  explicit ScriptedPolicy(std::vector<std::string> script) : script_(std::move(script)) {
    if (script_.empty()) throw SemanticError("scripted policy needs at least one reaction");
  }

  std::string choose(const AdaptiveExecutor&, const std::string&,
                     const std::vector<std::string>&) override {
    return script_[index_++ % script_.size()];
  }

private:
  std::vector<std::string> script_;
  std::size_t index_ = 0;
};

class RandomPolicy : public EnvPolicy {
public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

  std::string choose(const AdaptiveExecutor&, const std::string&,
                     const std::vector<std::string>& legal) override {
    return legal[rng_() % legal.size()];
  }

private:
  std::mt19937_64 rng_;
};

class GreedyAdversarialPolicy : public EnvPolicy {
public:
  std::string choose(const AdaptiveExecutor& exec, const std::string&,
                     const std::vector<std::string>& legal) override {
    for (const auto& r : legal)
      if (!exec.reaction_stays_in_dispatch_region(r)) return r;
    return legal.front();
  }
};

class GreedyCooperativePolicy : public EnvPolicy {
public:
  std::string choose(const AdaptiveExecutor& exec, const std::string& action,
                     const std::vector<std::string>& legal) override {
    const std::size_t tier = exec.last_dispatch().pending_tier;
    if (tier > 0)
      for (const auto& r : legal)
        if (exec.reaction_keeps_tier_coop(tier, action, r)) return r;
    return legal.front();
  }
};

// Parses "scripted:r1,r2", "random", "greedy-adversarial",
// "greedy-cooperative". Interactive mode lives in the CLI.
inline std::unique_ptr<EnvPolicy> make_policy(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("scripted:", 0) == 0) {
    std::vector<std::string> script;
    std::stringstream ss(spec.substr(9));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) script.push_back(item);
    return std::make_unique<ScriptedPolicy>(std::move(script));
  }
  if (spec == "random") return std::make_unique<RandomPolicy>(seed);
  if (spec == "greedy-adversarial") return std::make_unique<GreedyAdversarialPolicy>();
  if (spec == "greedy-cooperative") return std::make_unique<GreedyCooperativePolicy>();
  throw SemanticError("unknown environment policy '" + spec + "'");
}

}  // namespace tiersynth
