#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <thread>

#include "generators.hpp"
#include "tiersynth/progression.hpp"

using namespace tiersynth;

namespace {
Formula nnf(const std::string& text) { return to_nnf(parse_formula(text)); }
}  // namespace

TEST_CASE("progression rewrites obligations") {
  CHECK(progress(nnf("F g"), {"g"}) == Formula::True());
  CHECK(progress(nnf("F g"), {}) == nnf("F g"));
  CHECK(progress(nnf("X g"), {"g"}) == Formula::Atom("g"));
  CHECK(progress(nnf("g U c"), {"g"}) == nnf("g U c"));
  CHECK(progress(nnf("g U c"), {"c"}) == Formula::True());
  CHECK(progress(nnf("g U c"), {}) == Formula::False());
  CHECK(progress(nnf("G g"), {"g"}) == nnf("G g"));
  CHECK(progress(nnf("G g"), {}) == Formula::False());
}

TEST_CASE("end-of-word evaluation") {
  CHECK_FALSE(empty_continuation(nnf("X g"), {"g"}));
  CHECK(empty_continuation(nnf("WX false"), {}));
  CHECK(empty_continuation(nnf("g U c"), {"g", "c"}));
  CHECK_FALSE(empty_continuation(nnf("g U c"), {"g"}));
  CHECK(empty_continuation(nnf("G g"), {"g"}));
  CHECK(empty_continuation(Formula::Not(Formula::Atom("g")), {}));
}

TEST_CASE("F g compiles to the two-state automaton") {
  const Dfa d = to_dfa(parse_formula("F g"), {"g"});
  REQUIRE(d.ts.num_states() == 2);
  const StateId init = d.ts.initial;
  CHECK_FALSE(d.final[init]);
  const Letter empty = d.ts.alphabet.symbol_letter({});
  const Letter g = d.ts.alphabet.symbol_letter({"g"});
  CHECK(d.ts.step(init, empty) == init);
  const StateId sink = d.ts.step(init, g);
  REQUIRE(sink != init);
  CHECK(d.final[sink]);
  CHECK(d.ts.step(sink, empty) == sink);
  CHECK(d.ts.step(sink, g) == sink);

  // Exhaustive cross-check against the evaluator: all 30 traces of length <= 4.
  const auto traces = testgen::all_traces({"g"}, 4);
  REQUIRE(traces.size() == 30);
  for (const auto& t : traces) CHECK(accepts(d, t) == evaluate(t, parse_formula("F g")));
}

TEST_CASE("true accepts exactly the non-empty words") {
  const Dfa d = to_dfa(Formula::True(), {"g"});
  CHECK_FALSE(d.final[d.ts.initial]);
  CHECK_FALSE(accepts(d, {}));
  for (const auto& t : testgen::all_traces({"g"}, 3)) CHECK(accepts(d, t));
}

TEST_CASE("contradictions give an empty language") {
  const Formula f = Formula::And(Formula::Next(Formula::Atom("g")),
                                 Formula::Not(Formula::Next(Formula::Atom("g"))));
  const Dfa d = to_dfa(f, {"g"});
  CHECK_FALSE(accepts(d, {}));
  for (const auto& t : testgen::all_traces({"g"}, 4)) CHECK_FALSE(accepts(d, t));
}

TEST_CASE("accepts rejects out-of-alphabet letters and the empty word") {
  const Dfa d = to_dfa(parse_formula("F g"), {"g"});
  CHECK_FALSE(accepts(d, {}));
  CHECK(accepts(d, Trace{{}, {"g"}}));
  CHECK_THROWS_AS(accepts(d, Trace{{"zzz"}}), SemanticError);
}

TEST_CASE("construction is sound against the evaluator") {
  std::mt19937 rng(20240812);
  const std::vector<std::string> atoms = {"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    const Formula f = testgen::random_formula(rng, atoms, 5);
    const Dfa d = to_dfa(f, atoms);
    const Trace t = testgen::random_trace(rng, atoms, 6);
    INFO("formula: " << f);
    REQUIRE(accepts(d, t) == evaluate(t, f));
  }
}

TEST_CASE("state count stays under the double-exponential bound") {
  std::mt19937 rng(5);
  const std::vector<std::string> atoms = {"a", "b"};
  for (int i = 0; i < 60; ++i) {
    const Formula f = testgen::random_formula(rng, atoms, 4);
    const std::size_t k = formula_size(to_nnf(f));
    const Dfa d = to_dfa(f, atoms);
    const long double bound = std::pow(2.0L, std::pow(2.0L, static_cast<long double>(k)));
    CHECK(static_cast<long double>(d.ts.num_states()) <= bound);
  }
}

TEST_CASE("progression along equal words reaches equal states") {
  const Dfa d = to_dfa(parse_formula("(a U b) & F c"), {"a", "b", "c"});
  std::mt19937 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Trace t = testgen::random_trace(rng, {"a", "b", "c"}, 6);
    std::vector<Letter> letters;
    for (const auto& s : t) letters.push_back(d.ts.alphabet.symbol_letter(s));
    const StateId first = d.ts.run(d.ts.initial, letters.begin(), letters.end());
    const StateId second = d.ts.run(d.ts.initial, letters.begin(), letters.end());
    CHECK(first == second);
  }
}

TEST_CASE("oversized alphabets are rejected") {
  std::vector<std::string> atoms;
  for (int i = 0; i < 21; ++i) atoms.push_back("a" + std::to_string(i));
  CHECK_THROWS_AS(to_dfa(parse_formula("a0"), atoms), ResourceError);
}

TEST_CASE("compilations can run concurrently") {
  std::vector<std::thread> workers;
  std::vector<std::size_t> sizes(4, 0);
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&sizes, w] {
      const Dfa d = to_dfa(parse_formula("F a & (b U c) & G (a -> X b)"), {"a", "b", "c"});
      sizes[w] = d.ts.num_states();
    });
  for (auto& t : workers) t.join();
  for (int w = 1; w < 4; ++w) CHECK(sizes[w] == sizes[0]);
}
