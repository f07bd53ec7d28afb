#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "opalg/quotient.hpp"
#include "support/random_theory.hpp"

using namespace opalg;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

PhenomenologicalTheory counterexample() {
  return parse_theory(read_file(std::string(OPALG_FIXTURE_DIR) + "/paper-counterexample.th"));
}

}  // namespace

TEST_CASE("equivalence classes of the counterexample theory") {
  const auto t = counterexample();
  const auto classes = effect_classes(t);
  // Hand enumeration over the free coordinates (a, b, d, g): the 16+16
  // events collapse to 12 distinct signatures.
  CHECK(classes.size() == 12);

  const auto wea = build_wea(t);
  // e(a v b) = e(c): same class.
  CHECK(wea.class_of(make_event(t, "M", {"a", "b"})) == wea.class_of(make_event(t, "N", {"c"})));
  // e(f) = e(d v g).
  CHECK(wea.class_of(make_event(t, "M", {"f"})) == wea.class_of(make_event(t, "N", {"d", "g"})));
  // Reflexivity: every event lands in exactly one class (2^3 per measurement).
  size_t total_events = 0;
  for (const auto& c : classes) total_events += c.representatives.size();
  CHECK(total_events == 8 + 8);
  // Distinct classes have distinct signatures.
  std::set<RatVec> sigs;
  for (const auto& c : classes) sigs.insert(c.signature);
  CHECK(sigs.size() == classes.size());
}

TEST_CASE("single uniform state collapses both measurements to one effect") {
  // One state uniform on two 2-outcome measurements: all four singleton
  // events share the signature (1/2), so the quotient has effects 0, h, 1
  // with h + h = 1 (brute-force enumeration by hand).
  const auto t = parse_theory(
      "measurement M = { a, b }\n"
      "measurement N = { c, d }\n"
      "state u = { a: 1/2, b: 1/2, c: 1/2, d: 1/2 }\n");
  const auto wea = build_wea(t);
  CHECK(wea.size == 3);
  const int h = wea.class_of(make_event(t, "M", {"a"}));
  CHECK(h == wea.class_of(make_event(t, "N", {"d"})));
  CHECK(wea.plus[h][h] == wea.unit);
  CHECK(wea.supplement[h] == h);
}

TEST_CASE("classical bit quotient is the Boolean algebra") {
  const auto t = parse_theory(read_file(std::string(OPALG_FIXTURE_DIR) + "/classical-bit.th"));
  const auto wea = build_wea(t);
  CHECK(wea.size == 4);
  const int ch = wea.class_of(make_event(t, "M", {"h"}));
  const int ct = wea.class_of(make_event(t, "M", {"t"}));
  CHECK(wea.plus[ch][ct] == wea.unit);
  CHECK(wea.supplement[ch] == ct);
  CHECK(check_axioms(to_structure(wea), Profile::EA).all_pass());
  CHECK(!detect_proper_weakness(wea).properly_weak);
}

TEST_CASE("counterexample is properly weak with the paper's witness valid") {
  const auto t = counterexample();
  const auto wea = build_wea(t);
  const auto s = to_structure(wea);

  const auto ww = detect_proper_weakness(wea);
  CHECK(ww.properly_weak);
  CHECK(is_weakness_witness(s, ww.triple[0], ww.triple[1], ww.triple[2]));

  // The specific triple (e(a), e(b), e(d)): (e(a)+e(b))+e(d) is defined
  // (= e(c)+e(d)) while e(b)+e(d) is not.
  const int ca = wea.class_of(make_event(t, "M", {"a"}));
  const int cb = wea.class_of(make_event(t, "M", {"b"}));
  const int cd = wea.class_of(make_event(t, "N", {"d"}));
  const int cc = wea.class_of(make_event(t, "N", {"c"}));
  CHECK(wea.plus[ca][cb] == cc);
  CHECK(wea.plus[cc][cd] >= 0);
  CHECK(wea.plus[cb][cd] == -1);
  CHECK(is_weakness_witness(s, ca, cb, cd));
}

TEST_CASE("completion of the counterexample closes to the Boolean algebra on 4 atoms") {
  const auto wea = build_wea(counterexample());
  const auto res = attempt_completion(wea, 10);
  CHECK(res.completed);
  CHECK(res.rounds <= 10);
  CHECK(res.ea_report.all_pass());
  // Saturation oracle: signatures of the completion are exactly the 16
  // subset sums of the atoms a, b, d, g.
  CHECK(res.algebra.size == 16);
  // The embedding is injective and preserves +, 0, 1 and supplements.
  const auto s0 = to_structure(wea);
  std::set<int> image(res.embedding.begin(), res.embedding.end());
  CHECK(image.size() == static_cast<size_t>(wea.size));
  for (int x = 0; x < wea.size; ++x) {
    for (int y = 0; y < wea.size; ++y) {
      if (s0.plus[x][y] >= 0) {
        CHECK(res.algebra.plus[res.embedding[x]][res.embedding[y]] == res.embedding[s0.plus[x][y]]);
      }
    }
  }
  CHECK(res.embedding[wea.zero] == res.algebra.zero);
  CHECK(res.embedding[wea.unit] == res.algebra.unit);
  for (int x = 0; x < wea.size; ++x) {
    CHECK(res.algebra.plus[res.embedding[x]][res.embedding[wea.supplement[x]]] == res.algebra.unit);
  }
}

TEST_CASE("already-complete algebras come back unchanged in zero rounds") {
  const auto t = parse_theory(read_file(std::string(OPALG_FIXTURE_DIR) + "/classical-bit.th"));
  const auto wea = build_wea(t);
  const auto res = attempt_completion(wea, 10);
  CHECK(res.completed);
  CHECK(res.rounds == 0);
  CHECK(res.algebra.size == wea.size);
}

TEST_CASE("property suite: Theorem-1 output on random small theories") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto t = testsupport::random_theory(rng);
    const auto wea = build_wea(t);  // witness independence checked inside
    const auto s = to_structure(wea);
    const auto report = check_axioms(s, Profile::WEA);
    CHECK(report.all_pass());
    // Induced states are states; the induced set is separating.
    const auto states = wea.induced_states();
    for (const auto& w : states) CHECK(is_state_vector(s, w));
    const auto p = state_polytope(s, false, states);
    CHECK(p.separating);
    // Supplement is an involution.
    for (int x = 0; x < wea.size; ++x) CHECK(wea.supplement[wea.supplement[x]] == x);
  }
}

TEST_CASE("empty state set is rejected") {
  PhenomenologicalTheory t;
  t.measurements = {{"M", {"a"}}};
  t.outcome_ids = {"a"};
  t.outcome_meas = {0};
  t.meas_outcomes = {{0}};
  CHECK_THROWS_AS(effect_classes(t), std::invalid_argument);
}
