#include "opalg/quotient.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace opalg {

namespace {

std::vector<Event> all_events(const PhenomenologicalTheory& t) {
  std::vector<Event> events;
  for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
    const auto& outs = t.meas_outcomes[mi];
    if (outs.size() > 16) {
      throw std::runtime_error("measurement '" + t.measurements[mi].id +
                               "' has too many outcomes for event enumeration");
    }
    for (unsigned mask = 0; mask < (1u << outs.size()); ++mask) {
      Event ev;
      ev.measurement = static_cast<int>(mi);
      for (size_t i = 0; i < outs.size(); ++i) {
        if (mask & (1u << i)) ev.outcomes.push_back(outs[i]);
      }
      events.push_back(std::move(ev));
    }
  }
  return events;
}

RatVec signature_of(const PhenomenologicalTheory& t, const Event& ev) {
  RatVec sig;
  sig.reserve(t.states.size());
  for (const auto& s : t.states) sig.push_back(event_probability(t, s, ev));
  return sig;
}

std::string event_label(const PhenomenologicalTheory& t, const Event& ev) {
  std::string out = "e(" + t.measurements[ev.measurement].id + ".{";
  for (size_t i = 0; i < ev.outcomes.size(); ++i) {
    out += (i ? "," : "") + t.outcome_ids[ev.outcomes[i]];
  }
  return out + "})";
}

}  // namespace

std::vector<EffectClass> effect_classes(const PhenomenologicalTheory& t) {
  if (t.states.empty()) throw std::invalid_argument("equivalence needs a nonempty state set");
  std::map<RatVec, std::vector<Event>> by_signature;
  for (auto& ev : all_events(t)) {
    by_signature[signature_of(t, ev)].push_back(std::move(ev));
  }
  std::vector<EffectClass> classes;
  int id = 0;
  for (auto& [sig, reps] : by_signature) {  // std::map iterates lexicographically
    EffectClass c;
    c.id = id++;
    c.signature = sig;
    std::sort(reps.begin(), reps.end());
    c.representatives = std::move(reps);
    classes.push_back(std::move(c));
  }
  return classes;
}

int WeakEffectAlgebra::class_of(const Event& ev) const {
  const RatVec sig = signature_of(source, ev);
  for (int c = 0; c < size; ++c) {
    if (signatures[c] == sig) return c;
  }
  throw std::invalid_argument("event does not belong to the source theory");
}

RatVec WeakEffectAlgebra::induced_state(int state_index) const {
  RatVec w(size);
  for (int c = 0; c < size; ++c) w[c] = signatures[c][state_index];
  return w;
}

RatMat WeakEffectAlgebra::induced_states() const {
  RatMat out;
  for (size_t si = 0; si < source.states.size(); ++si) out.push_back(induced_state(static_cast<int>(si)));
  return out;
}

WeakEffectAlgebra build_wea(const PhenomenologicalTheory& t) {
  WeakEffectAlgebra w;
  w.source = t;
  auto classes = effect_classes(t);
  w.size = static_cast<int>(classes.size());
  w.plus.assign(w.size, std::vector<int>(w.size, -1));
  w.supplement.assign(w.size, -1);

  std::map<RatVec, int> class_of_sig;
  for (const auto& c : classes) {
    w.signatures.push_back(c.signature);
    w.reps.push_back(c.representatives);
    class_of_sig[c.signature] = c.id;
    w.labels.push_back(event_label(t, c.representatives.front()));
  }
  std::map<Event, int> class_of_event;
  for (const auto& c : classes) {
    for (const auto& ev : c.representatives) class_of_event[ev] = c.id;
  }

  w.zero = class_of_event.at(Event{0, {}});
  w.unit = class_of_event.at(t.full_event(0));
  w.labels[w.zero] = "0";
  w.labels[w.unit] = "1";

  // x + y := e(a v b) over every witness pair (a, b disjoint in one
  // measurement); Theorem 1 makes the value witness-independent, so any
  // disagreement is an internal-consistency failure.
  for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
    const auto& outs = t.meas_outcomes[mi];
    const unsigned full = (1u << outs.size()) - 1;
    for (unsigned ma = 0; ma <= full; ++ma) {
      for (unsigned mb = 0; mb <= full; ++mb) {
        if (ma & mb) continue;
        Event a{static_cast<int>(mi), {}}, b{static_cast<int>(mi), {}}, ab{static_cast<int>(mi), {}};
        for (size_t i = 0; i < outs.size(); ++i) {
          if (ma & (1u << i)) a.outcomes.push_back(outs[i]);
          if (mb & (1u << i)) b.outcomes.push_back(outs[i]);
          if ((ma | mb) & (1u << i)) ab.outcomes.push_back(outs[i]);
        }
        const int ca = class_of_event.at(a);
        const int cb = class_of_event.at(b);
        const int cab = class_of_event.at(ab);
        int& cell = w.plus[ca][cb];
        if (cell >= 0 && cell != cab) {
          throw std::logic_error("witness independence violated: " + w.labels[ca] + " + " +
                                 w.labels[cb] + " gets both " + w.labels[cell] + " and " +
                                 w.labels[cab]);
        }
        cell = cab;
      }
    }
  }

  // Orthosupplement from Boolean complements; unique because class identity
  // is the signature and sig(x') = 1 - sig(x).
  for (int c = 0; c < w.size; ++c) {
    RatVec comp(w.signatures[c].size());
    for (size_t i = 0; i < comp.size(); ++i) comp[i] = 1 - w.signatures[c][i];
    const auto it = class_of_sig.find(comp);
    if (it == class_of_sig.end()) {
      throw std::logic_error("missing complement class for " + w.labels[c]);
    }
    w.supplement[c] = it->second;
  }
  return w;
}

PartialStructure to_structure(const WeakEffectAlgebra& w) {
  PartialStructure s;
  s.size = w.size;
  s.plus = w.plus;
  s.zero = w.zero;
  s.unit = w.unit;
  s.labels = w.labels;
  return s;
}

bool is_weakness_witness(const PartialStructure& s, int x, int y, int z) {
  const int xy = s.plus[x][y];
  const int l = xy < 0 ? -1 : s.plus[xy][z];
  const int yz = s.plus[y][z];
  const int r = yz < 0 ? -1 : s.plus[x][yz];
  return (l >= 0) != (r >= 0);
}

WeaknessWitness detect_proper_weakness(const PartialStructure& s) {
  WeaknessWitness ww;
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      for (int z = 0; z < s.size; ++z) {
        if (!is_weakness_witness(s, x, y, z)) continue;
        ww.properly_weak = true;
        ww.triple = {x, y, z};
        const int xy = s.plus[x][y];
        ww.left_defined = xy >= 0 && s.plus[xy][z] >= 0;
        ww.note = "(" + s.label(x) + "+" + s.label(y) + ")+" + s.label(z) +
                  (ww.left_defined ? " defined, " : " undefined, ") + s.label(x) + "+(" +
                  s.label(y) + "+" + s.label(z) + ")" +
                  (ww.left_defined ? " undefined" : " defined");
        return ww;
      }
    }
  }
  ww.note = "strongly associative (exhausted all triples)";
  return ww;
}

WeaknessWitness detect_proper_weakness(const WeakEffectAlgebra& w) {
  return detect_proper_weakness(to_structure(w));
}

CompletionResult attempt_completion(const WeakEffectAlgebra& w, int max_rounds) {
  CompletionResult res;
  res.original_size = w.size;
  res.algebra = to_structure(w);
  res.signatures = w.signatures;

  auto& s = res.algebra;
  auto& sigs = res.signatures;

  std::map<RatVec, int> by_sig;
  for (int c = 0; c < s.size; ++c) by_sig[sigs[c]] = c;

  auto grow_tables = [&](const RatVec& sig, const std::string& label) {
    const int id = s.size++;
    sigs.push_back(sig);
    by_sig[sig] = id;
    s.labels.push_back(label);
    for (auto& row : s.plus) row.push_back(-1);
    s.plus.emplace_back(s.size, -1);
    s.plus[id][s.zero] = id;
    s.plus[s.zero][id] = id;
    return id;
  };

  // Force p + q to exist with value `target` (or by summed signature when no
  // target side exists). Returns false when the adjunction must be aborted.
  auto impose = [&](int p, int q) -> bool {
    RatVec sum(sigs[p].size());
    for (size_t i = 0; i < sum.size(); ++i) {
      sum[i] = sigs[p][i] + sigs[q][i];
      if (sum[i] > 1) {
        res.diagnostics.push_back("adjunction of " + s.label(p) + " + " + s.label(q) +
                                  " aborted: signature coordinate " + rat_to_string(sum[i]) +
                                  " exceeds 1");
        return false;
      }
    }
    int target;
    const auto it = by_sig.find(sum);
    if (it != by_sig.end()) {
      target = it->second;
    } else {
      target = grow_tables(sum, "[" + s.label(p) + "+" + s.label(q) + "]");
    }
    s.plus[p][q] = target;
    s.plus[q][p] = target;
    return true;
  };

  for (res.rounds = 0; res.rounds < max_rounds; ++res.rounds) {
    // Collect one round's violations in canonical order, then apply.
    std::vector<std::array<int, 3>> violations;
    for (int x = 0; x < s.size; ++x) {
      for (int y = 0; y < s.size; ++y) {
        for (int z = 0; z < s.size; ++z) {
          if (is_weakness_witness(s, x, y, z)) violations.push_back({x, y, z});
        }
      }
    }
    if (violations.empty()) break;
    for (const auto& [x, y, z] : violations) {
      const int xy = s.plus[x][y];
      const int l = xy < 0 ? -1 : s.plus[xy][z];
      const int yz = s.plus[y][z];
      const int r = yz < 0 ? -1 : s.plus[x][yz];
      if (l >= 0 && r < 0) {
        // Right side missing: need y+z, then x+(y+z) = l.
        if (yz < 0) {
          if (!impose(y, z)) continue;
        }
        const int yz2 = s.plus[y][z];
        if (s.plus[x][yz2] < 0) impose(x, yz2);
      } else if (r >= 0 && l < 0) {
        if (xy < 0) {
          if (!impose(x, y)) continue;
        }
        const int xy2 = s.plus[x][y];
        if (s.plus[xy2][z] < 0) impose(xy2, z);
      }
    }
  }

  res.embedding.resize(res.original_size);
  for (int c = 0; c < res.original_size; ++c) res.embedding[c] = c;

  bool saturated = true;
  for (int x = 0; x < s.size && saturated; ++x) {
    for (int y = 0; y < s.size && saturated; ++y) {
      for (int z = 0; z < s.size; ++z) {
        if (is_weakness_witness(s, x, y, z)) {
          saturated = false;
          break;
        }
      }
    }
  }
  if (!saturated) {
    res.diagnostics.push_back("round limit " + std::to_string(max_rounds) +
                              " reached before saturation");
  }
  res.ea_report = check_axioms(s, Profile::EA);
  res.completed = saturated && res.ea_report.all_pass();
  return res;
}

}  // namespace opalg
