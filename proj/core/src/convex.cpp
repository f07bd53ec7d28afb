#include "opalg/convex.hpp"

#include <algorithm>
#include <stdexcept>

namespace opalg {

AxiomReport check_convex_axioms(const PartialStructure& s, const RatMat& states) {
  AxiomReport r;
  r.profile = "convexEA";
  if (!s.has_action()) throw std::invalid_argument("convexEA profile requires a scalar action");

  // The underlying effect algebra first.
  for (auto v : check_axioms(s, Profile::EA).verdicts) r.verdicts.push_back(std::move(v));

  const int ns = static_cast<int>(s.scalars.size());
  auto act = [&](int si, int a) { return s.action[si][a]; };

  {  // C1: a(b x) = (ab) x, whenever ab lies on the grid.
    long checked = 0, skipped = 0;
    bool ok = true;
    Verdict v{"C1", true, {}, ""};
    for (int i = 0; i < ns && ok; ++i) {
      for (int j = 0; j < ns && ok; ++j) {
        const Rat prod = s.scalars[i] * s.scalars[j];
        const auto k_it = std::find(s.scalars.begin(), s.scalars.end(), prod);
        if (k_it == s.scalars.end()) continue;
        const int k = static_cast<int>(k_it - s.scalars.begin());
        for (int x = 0; x < s.size; ++x) {
          const int bx = act(j, x);
          const int lhs = bx < 0 ? -1 : act(i, bx);
          const int rhs = act(k, x);
          if (lhs < 0 || rhs < 0) {
            ++skipped;
            continue;
          }
          ++checked;
          if (lhs != rhs) {
            ok = false;
            v = {"C1", false, {i, j, x}, "scalars " + rat_to_string(s.scalars[i]) + ", " +
                                             rat_to_string(s.scalars[j]) + " on " + s.label(x)};
            break;
          }
        }
      }
    }
    if (ok) v.note = std::to_string(checked) + " instances checked, " + std::to_string(skipped) +
                     " off-carrier skipped";
    r.verdicts.push_back(std::move(v));
  }

  {  // C2: a + b <= 1 implies ax (+) bx exists and equals (a+b)x.
    long checked = 0, skipped = 0;
    bool ok = true;
    Verdict v{"C2", true, {}, ""};
    for (int i = 0; i < ns && ok; ++i) {
      for (int j = 0; j < ns && ok; ++j) {
        const Rat sum = s.scalars[i] + s.scalars[j];
        if (sum > 1) continue;
        const auto k_it = std::find(s.scalars.begin(), s.scalars.end(), sum);
        if (k_it == s.scalars.end()) continue;
        const int k = static_cast<int>(k_it - s.scalars.begin());
        for (int x = 0; x < s.size; ++x) {
          const int ax = act(i, x);
          const int bx = act(j, x);
          const int cx = act(k, x);
          if (ax < 0 || bx < 0 || cx < 0) {
            ++skipped;
            continue;
          }
          ++checked;
          if (s.plus[ax][bx] != cx) {
            ok = false;
            v = {"C2", false, {i, j, x},
                 "(" + rat_to_string(sum) + ")" + s.label(x) + " != " + rat_to_string(s.scalars[i]) +
                     s.label(x) + " + " + rat_to_string(s.scalars[j]) + s.label(x)};
            break;
          }
        }
      }
    }
    if (ok) v.note = std::to_string(checked) + " instances checked, " + std::to_string(skipped) +
                     " off-carrier skipped";
    r.verdicts.push_back(std::move(v));
  }

  {  // C3: a(x + y) = ax (+) ay.
    long checked = 0, skipped = 0;
    bool ok = true;
    Verdict v{"C3", true, {}, ""};
    for (int i = 0; i < ns && ok; ++i) {
      for (int x = 0; x < s.size && ok; ++x) {
        for (int y = 0; y < s.size; ++y) {
          const int xy = s.plus[x][y];
          if (xy < 0) continue;
          const int lhs = act(i, xy);
          const int ax = act(i, x);
          const int ay = act(i, y);
          if (lhs < 0 || ax < 0 || ay < 0) {
            ++skipped;
            continue;
          }
          ++checked;
          if (s.plus[ax][ay] != lhs) {
            ok = false;
            v = {"C3", false, {i, x, y}, ""};
            break;
          }
        }
      }
    }
    if (ok) v.note = std::to_string(checked) + " instances checked, " + std::to_string(skipped) +
                     " off-carrier skipped";
    r.verdicts.push_back(std::move(v));
  }

  {  // C4: 1 x = x.
    const auto one_it = std::find(s.scalars.begin(), s.scalars.end(), Rat(1));
    if (one_it == s.scalars.end()) {
      r.add("C4", false, {}, "scalar grid does not contain 1");
    } else {
      const int one = static_cast<int>(one_it - s.scalars.begin());
      bool ok = true;
      for (int x = 0; x < s.size; ++x) {
        if (act(one, x) != x) {
          r.add("C4", false, {x});
          ok = false;
          break;
        }
      }
      if (ok) r.add("C4", true);
    }
  }

  if (s.has_product()) {  // COA15: (ax) y = a(xy) = x(ay).
    long checked = 0, skipped = 0;
    bool ok = true;
    Verdict v{"COA15", true, {}, ""};
    for (int i = 0; i < ns && ok; ++i) {
      for (int x = 0; x < s.size && ok; ++x) {
        const int ax = act(i, x);
        for (int y = 0; y < s.size; ++y) {
          const int ay = act(i, y);
          const int axy = act(i, s.prod[x][y]);
          const int l = ax < 0 ? -1 : s.prod[ax][y];
          const int rr = ay < 0 ? -1 : s.prod[x][ay];
          if (axy < 0 || l < 0 || rr < 0) {
            ++skipped;
            continue;
          }
          ++checked;
          if (l != axy || rr != axy) {
            ok = false;
            v = {"COA15", false, {i, x, y}, ""};
            break;
          }
        }
      }
    }
    if (ok) v.note = std::to_string(checked) + " instances checked, " + std::to_string(skipped) +
                     " off-carrier skipped";
    r.verdicts.push_back(std::move(v));
  }

  if (!states.empty()) {  // w(a x) = a w(x) for the supplied states.
    bool ok = true;
    for (const auto& w : states) {
      for (int i = 0; i < ns && ok; ++i) {
        for (int x = 0; x < s.size; ++x) {
          const int ax = act(i, x);
          if (ax < 0) continue;
          if (w[ax] != s.scalars[i] * w[x]) {
            r.add("state-homogeneity", false, {i, x},
                  "w(" + rat_to_string(s.scalars[i]) + " " + s.label(x) + ") != scaled value");
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) r.add("state-homogeneity", true);
  }
  return r;
}

StateEmbedding state_embedding(const WeakEffectAlgebra& w) {
  StateEmbedding e;
  const int nstates = static_cast<int>(w.source.states.size());
  e.embed = w.signatures;
  e.interval.cone = PolyhedralCone::from_generators(nstates, w.signatures);
  e.interval.unit = RatVec(nstates, Rat(1));

  e.homomorphism.profile = "embedding";
  bool plus_ok = true;
  for (int x = 0; x < w.size && plus_ok; ++x) {
    for (int y = 0; y < w.size; ++y) {
      const int z = w.plus[x][y];
      if (z < 0) continue;
      for (int st = 0; st < nstates; ++st) {
        if (w.signatures[x][st] + w.signatures[y][st] != w.signatures[z][st]) {
          e.homomorphism.add("plus-additive", false, {x, y});
          plus_ok = false;
          break;
        }
      }
      if (!plus_ok) break;
    }
  }
  if (plus_ok) e.homomorphism.add("plus-additive", true);
  e.homomorphism.add("zero-to-origin", is_zero_vec(w.signatures[w.zero]), {w.zero});
  e.homomorphism.add("unit-to-u", w.signatures[w.unit] == e.interval.unit, {w.unit});
  bool sup_ok = true;
  for (int x = 0; x < w.size && sup_ok; ++x) {
    for (int st = 0; st < nstates; ++st) {
      if (w.signatures[x][st] + w.signatures[w.supplement[x]][st] != 1) {
        e.homomorphism.add("supplement-to-u-minus-x", false, {x});
        sup_ok = false;
        break;
      }
    }
  }
  if (sup_ok) e.homomorphism.add("supplement-to-u-minus-x", true);

  e.generating = rank(w.signatures) == nstates;
  return e;
}

NormalizedFunctionals normalized_functionals(const LinearInterval& iv) {
  const int dim = iv.cone.dim;
  if (!iv.cone.contains(iv.unit)) {
    throw std::invalid_argument("interval unit does not lie in the cone");
  }
  PolytopeHRep h;
  h.dim = dim;
  h.eq.push_back(iv.unit);
  h.eq_rhs.push_back(Rat(1));
  for (const auto& g : iv.cone.generators) {
    h.ineq.push_back(g);
    h.ineq_rhs.push_back(Rat(0));
  }
  const auto v = enumerate_vertices(h);

  NormalizedFunctionals nf;
  nf.polytope.dimension = dim;
  nf.polytope.eq = h.eq;
  nf.polytope.eq_rhs = h.eq_rhs;
  nf.polytope.ineq = h.ineq;
  nf.polytope.ineq_rhs = h.ineq_rhs;
  nf.polytope.enumerated = true;
  nf.polytope.empty = v.empty;
  nf.polytope.vertices = v.vertices;
  for (const auto& f : v.vertices) {
    RatVec restr;
    for (const auto& g : iv.cone.generators) restr.push_back(dot(f, g));
    nf.restrictions.push_back(std::move(restr));
  }
  return nf;
}

std::optional<RatVec> extend_state_to_functional(const LinearInterval& iv, const RatVec& values) {
  if (values.size() != iv.cone.generators.size()) {
    throw std::invalid_argument("one value per cone generator required");
  }
  auto f = solve_linear(iv.cone.generators, values);
  if (!f) return std::nullopt;
  // Unique only when the generators span; callers check `generating`.
  if (dot(*f, iv.unit) != 1) return std::nullopt;
  for (const auto& g : iv.cone.generators) {
    if (dot(*f, g) < 0) return std::nullopt;
  }
  return f;
}

std::optional<int> find_test(const EffectTheory& t, int state_index) {
  const auto& w = t.states.at(state_index);
  for (int e = 0; e < t.algebra.size; ++e) {
    if (w[e] != 1) continue;
    bool unique = true;
    for (size_t other = 0; other < t.states.size(); ++other) {
      if (static_cast<int>(other) == state_index) continue;
      if (t.states[other][e] >= 1) {
        unique = false;
        break;
      }
    }
    if (unique) return e;
  }
  return std::nullopt;
}

Axiom1Report check_axiom1(const EffectTheory& t) {
  Axiom1Report r;
  r.holds = true;
  for (size_t i = 0; i < t.states.size(); ++i) {
    const auto test = find_test(t, static_cast<int>(i));
    r.tests.push_back(test);
    if (!test) {
      r.holds = false;
      r.untestable_states.push_back(static_cast<int>(i));
    }
  }
  return r;
}

}  // namespace opalg
