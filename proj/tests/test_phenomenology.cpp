#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "opalg/phenomenology.hpp"
#include "opalg/rng.hpp"

using namespace opalg;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::string kCounterexamplePath = std::string(OPALG_FIXTURE_DIR) + "/paper-counterexample.th";

}  // namespace

TEST_CASE("parsing the bundled two-measurement theory") {
  const auto t = parse_theory(read_file(kCounterexamplePath));
  CHECK(t.measurements.size() == 2);
  CHECK(t.outcome_ids.size() == 6);
  CHECK(t.states.size() == 4);
  CHECK(t.constraints.size() == 2);
  CHECK(validate_theory(t).all_pass());
}

TEST_CASE("trivial single-outcome theory") {
  const auto t = parse_theory("measurement M = { x }\nstate s = { x: 1/1 }\n");
  CHECK(t.measurements.size() == 1);
  CHECK(t.states.size() == 1);
  CHECK(validate_theory(t).all_pass());
}

TEST_CASE("normalization failure is rejected with the bad sum") {
  const std::string text =
      "measurement M = { a, b }\n"
      "state s = { a: 1/2, b: 2/5 }\n";
  CHECK_THROWS_WITH_AS(parse_theory(text), doctest::Contains("9/10"), ParseError);
}

TEST_CASE("duplicate outcome ids are rejected") {
  CHECK_THROWS_WITH_AS(parse_theory("measurement M = { a }\nmeasurement N = { a }\n"
                                    "state s = { a: 1/1 }\n"),
                       doctest::Contains("duplicate outcome"), ParseError);
}

TEST_CASE("probability outside [0,1] is rejected") {
  CHECK_THROWS_WITH_AS(parse_theory("measurement M = { a, b }\n"
                                    "state s = { a: 3/2, b: -1/2 }\n"),
                       doctest::Contains("outside"), ParseError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_theory("measurement M = { a, b }\nstate s = { a 1/2, b: 1/2 }\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column > 1);
  }
}

TEST_CASE("event probabilities are exact sums") {
  const auto t = parse_theory(
      "measurement M = { a, b, c }\n"
      "state s = { a: 3/10, b: 1/5, c: 1/2 }\n");
  CHECK(event_probability(t, 0, make_event(t, "M", {"a", "b"})) == Rat(1, 2));
  CHECK(event_probability(t, 0, make_event(t, "M", {})) == 0);
  CHECK(event_probability(t, 0, make_event(t, "M", {"a", "b", "c"})) == 1);
  CHECK_THROWS_AS(make_event(t, "M", {"zz"}), std::invalid_argument);
}

TEST_CASE("validation failures name the offender") {
  // Overlapping outcome in two measurements: built by hand since the parser
  // refuses to construct it.
  PhenomenologicalTheory t;
  t.measurements = {{"M", {"a"}}, {"N", {"a"}}};
  t.outcome_ids = {"a", "a"};
  t.outcome_meas = {0, 1};
  t.meas_outcomes = {{0}, {1}};
  t.states.push_back({"s", {Rat(1), Rat(1)}});
  const auto report = validate_theory(t);
  CHECK(!report.all_pass());
  const auto* v = report.find("disjointness");
  REQUIRE(v != nullptr);
  CHECK(!v->pass);
  CHECK(v->note.find("'a'") != std::string::npos);

  // Missing outcome assignment.
  PhenomenologicalTheory t2;
  t2.measurements = {{"M", {"a", "b"}}};
  t2.outcome_ids = {"a", "b"};
  t2.outcome_meas = {0, 0};
  t2.meas_outcomes = {{0, 1}};
  t2.states.push_back({"s", {Rat(1)}});
  const auto r2 = validate_theory(t2);
  const auto* cov = r2.find("coverage");
  REQUIRE(cov != nullptr);
  CHECK(!cov->pass);
  CHECK(cov->note.find("'s'") != std::string::npos);
}

TEST_CASE("emit/parse round trip is the identity on parsed theories") {
  const auto t = parse_theory(read_file(kCounterexamplePath));
  const auto again = parse_theory(emit_theory(t));
  CHECK(emit_theory(again) == emit_theory(t));
  CHECK(again.states.size() == t.states.size());
  for (size_t i = 0; i < t.states.size(); ++i) CHECK(again.states[i].probs == t.states[i].probs);
}

TEST_CASE("property: partitions of a measurement sum to 1 exactly") {
  Rng rng(99);
  const auto t = parse_theory(read_file(kCounterexamplePath));
  for (int trial = 0; trial < 50; ++trial) {
    const int mi = rng.uniform_int(static_cast<int>(t.measurements.size()));
    const auto& outs = t.meas_outcomes[mi];
    // Random 2-block partition.
    Event left{mi, {}}, right{mi, {}};
    for (int g : outs) (rng.uniform() < 0.5 ? left : right).outcomes.push_back(g);
    for (size_t si = 0; si < t.states.size(); ++si) {
      CHECK(event_probability(t, static_cast<int>(si), left) +
                event_probability(t, static_cast<int>(si), right) ==
            1);
    }
  }
}

TEST_CASE("property: w(x v y) = w(x) + w(y) - w(x ^ y)") {
  Rng rng(7);
  const auto t = parse_theory(read_file(kCounterexamplePath));
  for (int trial = 0; trial < 100; ++trial) {
    const int mi = rng.uniform_int(static_cast<int>(t.measurements.size()));
    const auto& outs = t.meas_outcomes[mi];
    Event x{mi, {}}, y{mi, {}}, join{mi, {}}, meet{mi, {}};
    for (int g : outs) {
      const bool in_x = rng.uniform() < 0.5;
      const bool in_y = rng.uniform() < 0.5;
      if (in_x) x.outcomes.push_back(g);
      if (in_y) y.outcomes.push_back(g);
      if (in_x || in_y) join.outcomes.push_back(g);
      if (in_x && in_y) meet.outcomes.push_back(g);
    }
    for (size_t si = 0; si < t.states.size(); ++si) {
      const int s = static_cast<int>(si);
      CHECK(event_probability(t, s, join) ==
            event_probability(t, s, x) + event_probability(t, s, y) - event_probability(t, s, meet));
    }
  }
}
