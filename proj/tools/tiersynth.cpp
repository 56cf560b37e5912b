// tiersynth: synthesize and run adaptive strategies for multi-tier LTLf
// goals in nondeterministic planning domains.
//
// Exit codes: 0 success, 1 IO/system failure, 2 semantic rejection
// (validation, parsing, tier violations), 3 resource cap exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tiersynth/oracle.hpp"
#include "tiersynth/policy.hpp"
#include "tiersynth/progression.hpp"
#include "tiersynth/synthesis.hpp"

namespace {

using namespace tiersynth;
using nlohmann::json;

Limits limits_from_env() {
  Limits limits;
  if (const char* cap = std::getenv("TIERSYNTH_CAP_STATES")) {
    try {
      limits.max_states = std::stoull(cap);
    } catch (const std::exception&) {
      throw SemanticError("TIERSYNTH_CAP_STATES must be a number");
    }
  }
  return limits;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& domain_file, bool as_json) {
  try {
    const Domain d = Domain::load_file(domain_file);
    if (as_json) {
      json doc;
      doc["ok"] = true;
      doc["states"] = d.num_states();
      doc["actions"] = d.actions().size();
      doc["reactions"] = d.reactions().size();
      std::cout << doc.dump(2) << '\n';
    } else {
      std::cout << "ok: " << d.num_states() << " reachable states, " << d.actions().size()
                << " actions, " << d.reactions().size() << " reactions\n";
    }
    return 0;
  } catch (const DomainError& e) {
    if (as_json) {
      json doc;
      doc["ok"] = false;
      doc["error"] = e.what();
      if (!e.state().empty()) doc["state"] = e.state();
      if (!e.action().empty()) doc["action"] = e.action();
      std::cout << doc.dump(2) << '\n';
    } else {
      std::cerr << "invalid domain: " << e.what() << '\n';
    }
    return 2;
  }
}

int cmd_compile(const std::string& formula_text, std::vector<std::string> atoms,
                const std::string& dot_file, bool minimize_dfa, bool stats) {
  const Formula f = parse_formula(formula_text);
  if (atoms.empty()) {
    const auto inferred = formula_atoms(f);
    atoms.assign(inferred.begin(), inferred.end());
  }
  Dfa dfa = to_dfa(f, atoms, limits_from_env());
  if (minimize_dfa) dfa = minimize(dfa);
  if (stats) {
    std::size_t finals = 0;
    for (const bool b : dfa.final) finals += b;
    std::cout << "states=" << dfa.ts.num_states() << " finals=" << finals << '\n';
    std::cout << "size=" << formula_size(f) << " (distinct subformulas as written)\n";
  }
  if (!dot_file.empty()) write_text(dot_file, dfa_to_dot(dfa));
  return 0;
}

int cmd_check_tiers(const std::string& domain_file, const std::string& goals_file, bool as_json) {
  const Domain d = Domain::load_file(domain_file);
  const auto texts = load_goal_texts(goals_file);
  const TierCheckResult result = check_multitier(d, parse_goals(texts), limits_from_env());
  if (result.ok) {
    if (as_json)
      std::cout << json{{"ok", true}, {"tiers", texts.size()}}.dump(2) << '\n';
    else
      std::cout << "ok: " << texts.size() << " tiers with decreasing languages\n";
    return 0;
  }
  if (as_json) {
    json doc;
    doc["ok"] = false;
    doc["pair_index"] = result.pair_index;
    doc["counterexample"] = trace_to_json(result.counterexample);
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cerr << "tier containment fails between objectives " << result.pair_index << " and "
              << result.pair_index + 1 << "; witness trace:\n"
              << trace_to_json(result.counterexample).dump(2) << '\n';
  }
  return 2;
}

int cmd_synthesize(const std::string& domain_file, const std::string& goals_file,
                   const std::string& out_dir, std::size_t jobs) {
  const Domain d = Domain::load_file(domain_file);
  const auto texts = load_goal_texts(goals_file);
  const auto start = std::chrono::steady_clock::now();
  const SynthesisHandle bundle =
      synth_multitier(d, parse_goals(texts), texts, jobs, limits_from_env());
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  write_bundle(*bundle, out_dir);
  std::cout << "solved " << bundle->report.single_solves << " single-objective games and "
            << bundle->report.pair_solves << " objective-pair games\n";
  std::cout << "bundle written to " << out_dir << '\n';
  std::cerr << "synthesis took " << elapsed.count() << " ms\n";
  return 0;
}

class InteractivePolicy : public EnvPolicy {
public:
  explicit InteractivePolicy(bool explain) : explain_(explain) {}

  std::string choose(const AdaptiveExecutor& exec, const std::string& action,
                     const std::vector<std::string>& legal) override {
    std::cout << "agent plays: " << action;
    if (explain_) {
      const Dispatch& d = exec.last_dispatch();
      std::cout << "   [j=" << d.winning_tier << " l=" << d.winpend_tier
                << " m=" << d.pending_tier << ']';
    }
    std::cout << "\nlegal reactions:";
    for (std::size_t i = 0; i < legal.size(); ++i) std::cout << ' ' << i << ':' << legal[i];
    std::cout << "\nreaction> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) throw IoError("interactive input closed");
    try {
      const std::size_t idx = std::stoull(line);
      if (idx < legal.size()) return legal[idx];
    } catch (const std::exception&) {
      // fall through: maybe a reaction name
    }
    for (const auto& r : legal)
      if (r == line) return r;
    std::cout << "unrecognized choice, taking " << legal.front() << '\n';
    return legal.front();
  }

private:
  bool explain_;
};

int cmd_simulate(const std::string& domain_file, const std::string& goals_file,
                 const std::string& bundle_dir, const std::string& env_spec,
                 std::size_t max_steps, bool explain, std::uint64_t seed, bool as_json,
                 std::size_t jobs) {
  const Domain d = Domain::load_file(domain_file);
  std::vector<std::string> texts;
  if (!bundle_dir.empty()) {
    const json manifest = load_bundle_manifest(bundle_dir);
    if (manifest.value("domain_hash", "") != domain_hash(d))
      throw SemanticError("bundle was synthesized for a different domain");
    texts = manifest.at("goals").get<std::vector<std::string>>();
  } else {
    texts = load_goal_texts(goals_file);
  }
  const SynthesisHandle bundle =
      synth_multitier(d, parse_goals(texts), texts, jobs, limits_from_env());
  AdaptiveExecutor exec(bundle);

  std::unique_ptr<EnvPolicy> policy;
  if (env_spec == "interactive")
    policy = std::make_unique<InteractivePolicy>(explain);
  else
    policy = make_policy(env_spec, seed);

  const PlayResult result = play(exec, *policy, max_steps);

  if (as_json) {
    json doc;
    doc["trace"] = trace_to_json(result.trace);
    doc["verdicts"] = result.verdicts;
    doc["highest_tier"] = result.highest_tier();
    doc["truncated"] = result.truncated;
    doc["env_error"] = result.env_error;
    doc["steps"] = result.log.size();
    if (explain) {
      auto& steps = doc["dispatch"] = json::array();
      for (const auto& s : result.log) {
        steps.push_back({{"action", s.action},
                         {"reaction", s.reaction},
                         {"winning_tier", s.dispatch.winning_tier},
                         {"winpend_tier", s.dispatch.winpend_tier},
                         {"pending_tier", s.dispatch.pending_tier},
                         {"tier_tags", s.tier_tags}});
      }
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
  }

  for (std::size_t i = 0; i < result.log.size(); ++i) {
    const auto& s = result.log[i];
    std::cout << "step " << i + 1 << ": " << s.action << " / " << s.reaction;
    if (explain) {
      std::cout << "   [j=" << s.dispatch.winning_tier << " l=" << s.dispatch.winpend_tier
                << " m=" << s.dispatch.pending_tier << " via ";
      switch (s.dispatch.kind) {
        case DispatchKind::omega: std::cout << "omega"; break;
        case DispatchKind::kappa: std::cout << "kappa"; break;
        case DispatchKind::nu: std::cout << "nu"; break;
        case DispatchKind::stop: std::cout << "stop"; break;
      }
      std::cout << "; tags:";
      for (std::size_t k = 0; k < s.tier_tags.size(); ++k)
        std::cout << ' ' << k + 1 << '=' << s.tier_tags[k];
      std::cout << ']';
    }
    std::cout << '\n';
  }
  if (result.env_error)
    std::cout << "environment violated its preconditions; play void\n";
  if (result.truncated) std::cout << "stopped after " << max_steps << " steps (truncated)\n";
  for (std::size_t i = 0; i < result.verdicts.size(); ++i)
    std::cout << "tier " << i + 1 << (result.verdicts[i] ? " satisfied" : " unsatisfied")
              << '\n';
  std::cout << "highest satisfied tier = " << result.highest_tier() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive strategy synthesis for multi-tier LTLf goals"};
  app.require_subcommand(1);

  // validate
  std::string domain_file;
  bool as_json = false;
  auto* validate = app.add_subcommand("validate", "Check a domain file");
  validate->add_option("domain", domain_file, "domain JSON file")->required();
  validate->add_flag("--json", as_json, "machine-readable report");

  // compile
  std::string formula_text, atoms_csv, dot_file;
  bool minimize_dfa = false, stats = false;
  auto* compile = app.add_subcommand("compile", "Compile a formula to a DFA");
  compile->add_option("formula", formula_text, "LTLf formula text")->required();
  compile->add_option("--atoms", atoms_csv, "comma-separated alphabet atoms");
  compile->add_option("--dump-dot", dot_file, "write DOT to a file ('-' for stdout)");
  compile->add_flag("--minimize", minimize_dfa, "minimize the automaton");
  compile->add_flag("--stats", stats, "print state statistics");

  // check-tiers
  std::string goals_file;
  auto* tiers = app.add_subcommand("check-tiers", "Validate a multi-tier goal");
  tiers->add_option("domain", domain_file, "domain JSON file")->required();
  tiers->add_option("goals", goals_file, "goals JSON file")->required();
  tiers->add_flag("--json", as_json, "machine-readable report");

  // synthesize
  std::string out_dir;
  std::size_t jobs = 1;
  auto* synth = app.add_subcommand("synthesize", "Synthesize an adaptive strategy bundle");
  synth->add_option("domain", domain_file, "domain JSON file")->required();
  synth->add_option("goals", goals_file, "goals JSON file")->required();
  synth->add_option("-o,--output", out_dir, "bundle directory")->required();
  synth->add_option("--jobs", jobs, "parallel game solves");

  // simulate
  std::string bundle_dir, env_spec = "random";
  std::size_t max_steps = 512;
  bool explain = false;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run the adaptive executor");
  simulate->add_option("domain", domain_file, "domain JSON file")->required();
  simulate->add_option("--goals", goals_file, "goals JSON file");
  simulate->add_option("--bundle", bundle_dir, "strategy bundle directory");
  simulate->add_option("--env", env_spec,
                       "environment policy: scripted:<r1,r2,...>, random, "
                       "greedy-adversarial, greedy-cooperative, interactive");
  simulate->add_option("--max-steps", max_steps, "step budget");
  simulate->add_flag("--explain", explain, "print dispatch internals per step");
  simulate->add_option("--seed", seed, "seed for the random policy");
  simulate->add_flag("--json", as_json, "machine-readable output");
  simulate->add_option("--jobs", jobs, "parallel game solves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(domain_file, as_json);
    if (*compile) {
      std::vector<std::string> atoms;
      std::stringstream ss(atoms_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) atoms.push_back(item);
      return cmd_compile(formula_text, atoms, dot_file, minimize_dfa, stats);
    }
    if (*tiers) return cmd_check_tiers(domain_file, goals_file, as_json);
    if (*synth) return cmd_synthesize(domain_file, goals_file, out_dir, jobs);
    if (*simulate) {
      if (goals_file.empty() == bundle_dir.empty())
        throw SemanticError("simulate needs exactly one of --goals or --bundle");
      return cmd_simulate(domain_file, goals_file, bundle_dir, env_spec, max_steps, explain,
                          seed, as_json, jobs);
    }
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << " (expected: " << e.expected() << ")\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 3;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
