// Acceptance suite. Runs every gate criterion end to end and prints one
// PASS/FAIL line per criterion; exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "executor_helpers.hpp"
#include "generators.hpp"
#include "strategy_checks.hpp"
#include "tiersynth/oracle.hpp"
#include "tiersynth/policy.hpp"
#include "tiersynth/progression.hpp"
#include "tiersynth/synthesis.hpp"

using namespace tiersynth;
namespace fs = std::filesystem;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& message) {
    if (!cond && ok) {
      ok = false;
      detail << message;
    }
  }
};

// ---------------------------------------------------------------------------
// Corpus: the three bundled fixtures plus generated small domains, all with
// arenas of at most 200 reachable states.

struct CorpusEntry {
  std::string name;
  Domain domain;
  std::vector<Formula> goals;  // tiered chain, lowest first
};

Formula random_goal(std::mt19937& rng, const std::vector<std::string>& fluents, int depth) {
  for (;;) {
    const Formula f = testgen::random_formula(rng, fluents, depth);
    if (!formula_atoms(f).empty()) return f;
  }
}

Domain random_domain(std::mt19937& rng) {
  const std::size_t bits = 2 + rng() % 2;
  const std::size_t n = std::size_t{1} << bits;
  std::vector<std::string> fluents;
  for (std::size_t i = 0; i < bits; ++i) fluents.push_back("x" + std::to_string(i));
  auto state_of = [&](std::size_t k) {
    FluentSet s;
    for (std::size_t i = 0; i < bits; ++i)
      if (k & (std::size_t{1} << i)) s.push_back(fluents[i]);
    return s;
  };
  const std::size_t num_actions = 2 + rng() % 2;
  std::vector<std::string> actions;
  for (std::size_t a = 0; a < num_actions; ++a) actions.push_back("a" + std::to_string(a));

  std::vector<TransitionSpec> transitions;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < num_actions; ++a) {
      if (a > 0 && rng() % 10 < 3) continue;  // optional actions
      const std::size_t first = rng() % n;
      transitions.push_back({state_of(s), actions[a], "r0", state_of(first)});
      if (rng() % 2) {
        const std::size_t second = (first + 1 + rng() % (n - 1)) % n;
        transitions.push_back({state_of(s), actions[a], "r1", state_of(second)});
      }
    }
  return Domain(fluents, state_of(0), actions, {"r0", "r1"}, transitions);
}

// Chain of try-or-die rungs, a scaled-up two-road: rung i either advances
// to {g1..gi+1} or falls into an absorbing dead state that keeps everything
// earned so far. Produces winning-pending regions of depth k.
CorpusEntry ladder_domain(std::size_t rungs) {
  std::vector<std::string> fluents = {"dead"};
  for (std::size_t i = 1; i <= rungs; ++i) fluents.push_back("g" + std::to_string(i));
  auto step_state = [&](std::size_t i) {
    FluentSet s;
    for (std::size_t j = 1; j <= i; ++j) s.push_back("g" + std::to_string(j));
    std::sort(s.begin(), s.end());
    return s;
  };
  auto dead_state = [&](std::size_t i) {
    FluentSet s = step_state(i);
    s.insert(s.begin(), "dead");
    return s;
  };
  std::vector<TransitionSpec> transitions;
  transitions.push_back({step_state(0), "safe", "r", step_state(1)});
  for (std::size_t i = 1; i < rungs; ++i) {
    transitions.push_back({step_state(i), "try", "r1", step_state(i + 1)});
    transitions.push_back({step_state(i), "try", "r2", dead_state(i)});
    transitions.push_back({step_state(i), "stay", "r", step_state(i)});
    transitions.push_back({dead_state(i), "stay", "r", dead_state(i)});
  }
  transitions.push_back({step_state(rungs), "stay", "r", step_state(rungs)});
  Domain d(fluents, step_state(0), {"safe", "stay", "try"}, {"r", "r1", "r2"}, transitions);

  std::vector<Formula> goals;
  Formula conj = Formula::Eventually(Formula::Atom("g1"));
  goals.push_back(conj);
  for (std::size_t i = 2; i <= rungs; ++i) {
    conj = Formula::And(conj, Formula::Eventually(Formula::Atom("g" + std::to_string(i))));
    goals.push_back(conj);
  }
  return {"ladder-" + std::to_string(rungs), std::move(d), std::move(goals)};
}

std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> corpus;
  corpus.push_back({"two-road", testgen::load_fixture("two-road.json"),
                    parse_goals({"F g", "F g & F c"})});
  corpus.push_back({"two-road-transient", testgen::load_fixture("two-road-transient.json"),
                    parse_goals({"F g", "F g & F c"})});
  corpus.push_back({"robot", testgen::load_fixture("robot.json"),
                    parse_goals({"F clean_D", "F clean_D & F clean_L2",
                                 "F (clean_L2 & X F clean_D)"})});
  corpus.push_back(ladder_domain(2));
  corpus.push_back(ladder_domain(3));
  corpus.push_back(ladder_domain(4));

  std::mt19937 rng(20250810);
  std::size_t flavor = 0;
  while (corpus.size() < 27) {
    Domain d = random_domain(rng);
    const auto& fl = d.fluents();
    std::vector<Formula> goals;
    // Alternate goal shapes: arbitrary refinements, eventuality pairs (the
    // shape that grows winning-pending regions), and three-tier chains.
    switch (flavor % 3) {
      case 0: {
        const Formula base = random_goal(rng, fl, 3);
        goals = {base, Formula::And(base, random_goal(rng, fl, 2))};
        break;
      }
      case 1: {
        const Formula g1 = Formula::Eventually(Formula::Atom(fl[rng() % fl.size()]));
        goals = {g1, Formula::And(g1, Formula::Eventually(Formula::Atom(fl[rng() % fl.size()])))};
        break;
      }
      default: {
        const Formula x = Formula::Atom(fl[rng() % fl.size()]);
        const Formula y = Formula::Atom(fl[rng() % fl.size()]);
        const Formula g1 = Formula::Eventually(x);
        const Formula g2 = Formula::And(g1, Formula::Eventually(y));
        goals = {g1, g2, Formula::And(g2, Formula::Eventually(Formula::And(x, y)))};
        break;
      }
    }
    // Keep only instances whose arenas stay desk-sized.
    try {
      const DomainDfa dd = domain_to_dfa(d);
      bool small = true;
      for (const auto& g : goals) {
        const Arena arena = build_arena(dd, to_dfa(g, d.fluents()));
        small = small && arena.num_states() <= 200;
      }
      if (!small) continue;
      corpus.push_back({"gen-" + std::to_string(corpus.size()), std::move(d), std::move(goals)});
      ++flavor;
    } catch (const std::exception&) {
      continue;
    }
  }
  return corpus;
}

// Oracle classification of one arena, preferring strategy enumeration and
// falling back to the naive definitional fixpoint when the caps bite.
struct OracleView {
  OracleRegionResult regions;
  bool enumerated = false;
};

OracleView oracle_view(const Domain& d, const Arena& arena) {
  OracleView view;
  try {
    view.regions = oracle_regions(d, arena, OracleCaps{14, 8});
    view.enumerated = true;
  } catch (const ResourceError&) {
    view.regions = oracle_regions_naive(arena.ts, arena.adv, arena.coop);
  }
  return view;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  Check check;
  std::mt19937 rng(424242);
  const std::vector<std::string> atoms = {"a", "b", "c"};
  std::size_t mismatches = 0;
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    const Formula f = testgen::random_formula(rng, atoms, 5);
    const Dfa dfa = to_dfa(f, atoms);
    const Trace t = testgen::random_trace(rng, atoms, 6);
    if (accepts(dfa, t) != evaluate(t, f)) {
      ++mismatches;
      check.expect(false, "mismatch on " + to_string(f));
    }
  }
  std::ostringstream os;
  os << cases << " random formula/trace pairs, " << mismatches << " mismatches";
  if (!check.ok) os << "; first: " << check.detail.str();
  detail = os.str();
  return check.ok;
}

bool criterion2(const std::vector<CorpusEntry>& corpus, std::string& detail) {
  Check check;
  std::size_t arenas = 0, enumerated = 0, wp_checked = 0;
  for (const auto& entry : corpus) {
    const DomainDfa dd = domain_to_dfa(entry.domain);
    std::vector<SingleSynthesis> singles;
    for (const auto& g : entry.goals) {
      SingleSynthesis s = synth_single(entry.domain, dd, g);
      check.expect(s.arena.num_states() <= 200, entry.name + ": arena exceeds 200 states");
      const OracleView view = oracle_view(entry.domain, s.arena);
      ++arenas;
      if (view.enumerated) ++enumerated;
      for (StateId q = 0; q < s.arena.num_states(); ++q) {
        check.expect(view.regions.win[q] == s.win.region[q],
                     entry.name + ": W mismatch at state " + std::to_string(q));
        check.expect(view.regions.coop[q] == s.coop.region[q],
                     entry.name + ": C mismatch at state " + std::to_string(q));
      }
      singles.push_back(std::move(s));
    }
    for (std::size_t i = 0; i + 1 < singles.size(); ++i) {
      const PairSynthesis pair = synth_winpend(singles[i], singles[i + 1]);
      const OracleWinPendResult naive =
          oracle_winpend(pair.arena, pair.adv1, pair.coop2, pair.w1, pair.c2);
      ++wp_checked;
      for (StateId q = 0; q < pair.arena.num_states(); ++q) {
        check.expect(naive.region[q] == pair.wp.region[q],
                     entry.name + ": WP mismatch at pair state " + std::to_string(q));
        check.expect(naive.rank[q] == pair.wp.rank[q],
                     entry.name + ": WP rank mismatch at pair state " + std::to_string(q));
      }
    }
  }
  std::ostringstream os;
  os << corpus.size() << " domains, " << arenas << " arenas (" << enumerated
     << " double-checked by strategy enumeration), " << wp_checked << " WP fixpoints";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

bool criterion3(const std::vector<CorpusEntry>& corpus, std::string& detail) {
  Check check;
  std::size_t histories = 0, states_classified = 0;
  for (const auto& entry : corpus) {
    const DomainDfa dd = domain_to_dfa(entry.domain);
    for (const auto& goal : entry.goals) {
      const Dfa dfa = to_dfa(goal, entry.domain.fluents());
      const Arena arena = build_arena(dd, dfa);
      const RegionSolution adv = solve_adv(arena.ts, arena.adv);
      const RegionSolution coop = solve_coop(arena.ts, arena.coop);
      const OracleView view = oracle_view(entry.domain, arena);

      std::map<StateId, bool> seen;
      for (const auto& h : testgen::legal_traces(entry.domain, 5)) {
        ++histories;
        const StateId q = arena_state_of_history(entry.domain, arena, h);
        if (!seen.emplace(q, true).second) continue;
        ++states_classified;
        const bool win = view.regions.win[q];
        const bool pend = view.regions.coop[q] && !view.regions.win[q];
        check.expect(win == adv.region[q],
                     entry.name + ": value/W mismatch at " + arena.labels[q]);
        check.expect(pend == (coop.region[q] && !adv.region[q]),
                     entry.name + ": value/C\\W mismatch at " + arena.labels[q]);
      }
    }
  }
  std::ostringstream os;
  os << histories << " legal histories over " << states_classified << " distinct arena states";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

bool criterion4(const std::vector<CorpusEntry>& corpus, std::string& detail) {
  Check check;
  std::size_t wp_states = 0, fallback_states = 0;
  for (const auto& entry : corpus) {
    const DomainDfa dd = domain_to_dfa(entry.domain);
    for (std::size_t i = 0; i + 1 < entry.goals.size(); ++i) {
      const SingleSynthesis s1 = synth_single(entry.domain, dd, entry.goals[i]);
      const SingleSynthesis s2 = synth_single(entry.domain, dd, entry.goals[i + 1]);
      const PairSynthesis pair = synth_winpend(s1, s2);
      for (StateId q = 0; q < pair.arena.num_states(); ++q) {
        const bool interesting = pair.w1[q] && pair.c2[q] && !pair.w2[q];
        if (!interesting) continue;
        const auto expansion = testgen::expand_pair_strategy(entry.domain, s1.arena, pair.arena,
                                                             pair.wp.action, q);
        check.expect(expansion.all_plays_finite,
                     entry.name + ": infinite play under omega from state " + std::to_string(q));
        bool some_second = false;
        for (const StateId leaf : expansion.stop_leaves) {
          check.expect(s1.arena.acc[pair.arena.components[leaf].first],
                       entry.name + ": play under omega missed the enforced tier");
          some_second = some_second || s2.arena.acc[pair.arena.components[leaf].second];
        }
        if (pair.wp.region[q]) {
          ++wp_states;
          check.expect(some_second,
                       entry.name + ": WP state " + std::to_string(q) +
                           " has no cooperative completion");
        } else {
          ++fallback_states;
        }
      }
    }
  }
  std::ostringstream os;
  os << wp_states << " WP states and " << fallback_states
     << " fallback states expanded exhaustively";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

bool criterion5(const std::vector<CorpusEntry>& corpus, std::string& detail) {
  Check check;
  std::size_t instances = 0, histories = 0, adaptation_events = 0, omega_dispatches = 0;
  for (const auto& entry : corpus) {
    SynthesisHandle bundle = synth_multitier(entry.domain, entry.goals);
    // Termination of every play is guaranteed once some tier is enforceable
    // (the winning tier never drops along executor plays). With no winning
    // tier at all, cooperative pursuit may legitimately loop against a
    // stalling adversary, so those instances exercise the other criteria
    // only.
    {
      AdaptiveExecutor probe(bundle);
      AdaptiveExecutor probe2 = probe;
      probe2.executor_action();
      if (probe2.last_dispatch().winning_tier == 0) continue;
    }
    ++instances;
    const std::size_t tiers = bundle->goals.size();
    std::size_t expansion_cap = 4 * tiers;
    for (const auto& s : bundle->singles) expansion_cap += 4 * tiers * s.arena.num_states();

    // Oracle region view per tier.
    std::vector<OracleView> views;
    std::vector<Arena> arenas;
    for (const auto& s : bundle->singles) {
      views.push_back(oracle_view(entry.domain, s.arena));
      arenas.push_back(s.arena);
    }
    auto oracle_j = [&](const DomainTrace& h) {
      std::size_t best = 0;
      for (std::size_t i = 0; i < tiers; ++i) {
        const StateId q = arena_state_of_history(entry.domain, arenas[i], h);
        if (views[i].regions.win[q]) best = i + 1;
      }
      return best;
    };

    auto consistent = enumerate_histories(entry.domain, testgen::executor_strategy(bundle), 6);
    {
      DomainTrace root;
      root.states.push_back(entry.domain.state(entry.domain.initial()));
      consistent.insert(consistent.begin(), root);
    }
    for (const auto& h : consistent) {
      ++histories;
      const std::size_t j = oracle_j(h);
      const auto expansion =
          testgen::expand_executor(testgen::replay_executor(bundle, h), expansion_cap);
      check.expect(expansion.all_finite, entry.name + ": infinite executor play");
      for (const auto& t : expansion.final_traces) {
        if (j > 0)
          check.expect(trace_satisfies(entry.domain, t, bundle->goals[j - 1]),
                       entry.name + ": play broke the maximally winning tier " +
                           std::to_string(j));
        // (d) adaptation: prefix-wise, once the oracle's winning tier rises,
        // the remainder of this very play still satisfies it.
        DomainTrace prefix;
        prefix.states.push_back(t.states[0]);
        std::size_t best_seen = j;
        for (std::size_t k = 0; k < t.moves.size(); ++k) {
          prefix.moves.push_back(t.moves[k]);
          prefix.states.push_back(t.states[k + 1]);
          const std::size_t jk = oracle_j(prefix);
          if (jk > best_seen) {
            best_seen = jk;
            ++adaptation_events;
            check.expect(trace_satisfies(entry.domain, t, bundle->goals[jk - 1]),
                         entry.name + ": play ignored a tier that became winning");
          }
        }
      }
      // (c) pending exploitation where omega was dispatched.
      AdaptiveExecutor probe = testgen::replay_executor(bundle, h);
      if (!probe.executor_action()) continue;
      const Dispatch& dispatch = probe.last_dispatch();
      if (dispatch.kind == DispatchKind::omega) {
        ++omega_dispatches;
        bool some = false;
        for (const auto& t : expansion.final_traces)
          some = some ||
                 trace_satisfies(entry.domain, t, bundle->goals[dispatch.winpend_tier - 1]);
        check.expect(some, entry.name + ": omega dispatch with no cooperative completion");
      }
    }
  }
  std::ostringstream os;
  os << instances << " instances, " << histories << " histories expanded, " << omega_dispatches
     << " omega dispatches checked, " << adaptation_events << " adaptation events";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

bool criterion6(std::string& detail) {
  Check check;
  const Domain d = testgen::load_fixture("robot.json");
  const auto goals = parse_goals({"F clean_D", "F clean_D & F clean_L2",
                                  "F (clean_L2 & X F clean_D)"});
  const SynthesisHandle bundle = synth_multitier(d, goals);

  // Initial tier values, from the solver regions and from the naive oracle.
  const char* expected[3] = {"win", "pend", "pend"};
  AdaptiveExecutor exec(bundle);
  for (std::size_t i = 1; i <= 3; ++i)
    check.expect(exec.tier_tag(i) == expected[i - 1],
                 "initial tier " + std::to_string(i) + " is " + exec.tier_tag(i));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& arena = bundle->singles[i].arena;
    const OracleRegionResult naive = oracle_regions_naive(arena.ts, arena.adv, arena.coop);
    const StateId init = arena.ts.initial;
    const std::string value = naive.win[init] ? "win" : naive.coop[init] ? "pend" : "lose";
    check.expect(value == expected[i],
                 "oracle initial value of tier " + std::to_string(i + 1) + " is " + value);
  }

  AdaptiveExecutor closing_exec(bundle);
  ScriptedPolicy closing({"shut"});
  const PlayResult closed = play(closing_exec, closing);
  check.expect(closed.highest_tier() == 1,
               "gate-closing run reached tier " + std::to_string(closed.highest_tier()));

  AdaptiveExecutor open_exec(bundle);
  ScriptedPolicy opening({"open"});
  const PlayResult opened = play(open_exec, opening);
  check.expect(opened.highest_tier() >= 2,
               "gates-open run reached tier " + std::to_string(opened.highest_tier()));

  std::ostringstream os;
  os << "initial values (win, pend, pend); gate-closing tier " << closed.highest_tier()
     << ", gates-open tier " << opened.highest_tier();
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

// Staged-progress domain for the overhead measurement: a 64-position chain
// with five sticky milestones and a stalling reaction.
Domain staged_domain() {
  const std::size_t length = 64;
  std::vector<std::string> fluents;
  for (int b = 0; b < 6; ++b) fluents.push_back("b" + std::to_string(b));
  for (int m = 1; m <= 5; ++m) fluents.push_back("m" + std::to_string(m));
  auto state_of = [&](std::size_t pos) {
    FluentSet s;
    for (int b = 0; b < 6; ++b)
      if (pos & (std::size_t{1} << b)) s.push_back("b" + std::to_string(b));
    for (int m = 1; m <= 5; ++m)
      if (pos >= static_cast<std::size_t>(12 * m)) s.push_back("m" + std::to_string(m));
    std::sort(s.begin(), s.end());
    return s;
  };
  std::vector<TransitionSpec> transitions;
  for (std::size_t pos = 0; pos < length; ++pos) {
    if (pos + 1 < length) {
      transitions.push_back({state_of(pos), "advance", "go", state_of(pos + 1)});
      transitions.push_back({state_of(pos), "advance", "stall", state_of(pos)});
    }
    transitions.push_back({state_of(pos), "wait", "go", state_of(pos)});
  }
  return Domain(fluents, state_of(0), {"advance", "wait"}, {"go", "stall"}, transitions);
}

bool criterion7(std::string& detail) {
  Check check;
  const Domain d = staged_domain();
  std::vector<Formula> chain;
  Formula conj = parse_formula("F m1");
  chain.push_back(conj);
  for (int m = 2; m <= 5; ++m) {
    conj = Formula::And(conj, Formula::Eventually(Formula::Atom("m" + std::to_string(m))));
    chain.push_back(conj);
  }

  for (std::size_t n = 2; n <= 5; ++n) {
    const std::vector<Formula> goals(chain.begin(), chain.begin() + n);
    const SynthesisHandle bundle = synth_multitier(d, goals);
    check.expect(bundle->report.single_solves == n,
                 "n=" + std::to_string(n) + " ran " +
                     std::to_string(bundle->report.single_solves) + " single solves");
    check.expect(bundle->report.pair_solves == n * (n - 1) / 2,
                 "n=" + std::to_string(n) + " ran " +
                     std::to_string(bundle->report.pair_solves) + " pair solves");
  }

  // Wall-clock ratio, averaged over enough repetitions for a stable base.
  const std::vector<Formula> top = {chain.back()};
  const std::vector<Formula> full = chain;
  double top_seconds = 0;
  std::size_t reps = 0;
  while (top_seconds < 0.25) {
    const auto start = std::chrono::steady_clock::now();
    synth_multitier(d, top);
    top_seconds += seconds_since(start);
    ++reps;
  }
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < reps; ++i) synth_multitier(d, full);
  const double full_seconds = seconds_since(start);
  const double ratio = full_seconds / top_seconds;
  check.expect(ratio <= 15.0, "overhead ratio " + std::to_string(ratio) + " exceeds 15");

  std::ostringstream os;
  os << "solve counts n + n(n-1)/2 for n in {2..5}; full/top wall ratio "
     << std::fixed << std::setprecision(2) << ratio << " over " << reps << " reps";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

std::string run_command(const std::string& cmd, int& exit_code) {
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return output;
  }
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool criterion8(std::string& detail) {
  Check check;
  const std::string bin = TIERSYNTH_BIN;
  const std::string fixtures = TIERSYNTH_FIXTURES_DIR;
  std::size_t files_compared = 0;
  for (const auto& [domain, goals] :
       std::vector<std::pair<std::string, std::string>>{
           {"two-road.json", "two-road.goals.json"}, {"robot.json", "robot.goals.json"}}) {
    const fs::path dir1 = fs::temp_directory_path() / ("acc8_a_" + domain);
    const fs::path dir2 = fs::temp_directory_path() / ("acc8_b_" + domain);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    int code1 = 0, code2 = 0;
    run_command(bin + " synthesize " + fixtures + "/" + domain + " " + fixtures + "/" + goals +
                    " -o " + dir1.string(),
                code1);
    run_command(bin + " synthesize " + fixtures + "/" + domain + " " + fixtures + "/" + goals +
                    " -o " + dir2.string() + " --jobs 2",
                code2);
    check.expect(code1 == 0 && code2 == 0, "synthesize failed on " + domain);
    if (code1 != 0 || code2 != 0) continue;
    for (const auto& e : fs::directory_iterator(dir1)) {
      ++files_compared;
      check.expect(fs::exists(dir2 / e.path().filename()),
                   "missing " + e.path().filename().string());
      check.expect(slurp(e.path()) == slurp(dir2 / e.path().filename()),
                   "byte mismatch in " + e.path().filename().string());
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
  }
  std::ostringstream os;
  os << "two domains, " << files_compared << " bundle files byte-compared across reruns";
  if (!check.ok) os << "; " << check.detail.str();
  detail = os.str();
  return check.ok;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no stated budget
    std::function<bool(std::string&)> fn;
  };

  const auto corpus_start = std::chrono::steady_clock::now();
  const std::vector<CorpusEntry> corpus = build_corpus();
  std::cout << "corpus: " << corpus.size() << " domains ("
            << seconds_since(corpus_start) << "s to build)\n";

  const std::vector<Entry> entries = {
      {1, "LTLf->DFA soundness vs direct evaluation", 30.0, criterion1},
      {2, "region and WP correctness vs oracle", 60.0,
       [&](std::string& d) { return criterion2(corpus, d); }},
      {3, "history values match region membership", 120.0,
       [&](std::string& d) { return criterion3(corpus, d); }},
      {4, "pair strategy enforces low tier, pursues high tier", 0.0,
       [&](std::string& d) { return criterion4(corpus, d); }},
      {5, "adaptive executor compliance", 0.0,
       [&](std::string& d) { return criterion5(corpus, d); }},
      {6, "robot building scenario", 10.0, criterion6},
      {7, "quadratic overhead in the number of objectives", 0.0, criterion7},
      {8, "byte-identical bundles across reruns", 0.0, criterion8},
  };

  bool all_ok = true;
  for (const auto& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = e.fn(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    const double elapsed = seconds_since(start);
    if (e.budget_seconds > 0 && elapsed > e.budget_seconds) {
      ok = false;
      detail += " [over budget " + std::to_string(e.budget_seconds) + "s]";
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << e.id << ": " << e.name << " — "
              << detail << " (" << std::fixed << std::setprecision(2) << elapsed << "s)\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
