#include "opalg/woa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace opalg {

namespace {

OutcomeString concat(const OutcomeString& a, const OutcomeString& b) {
  OutcomeString out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct Flanker {
  const SequentialTheory& seq;
  std::vector<OutcomeString> contexts;  // realizable strings including the empty one

  explicit Flanker(const SequentialTheory& s) : seq(s) {
    for (const auto& [str, p] : seq.string_probs[0]) contexts.push_back(str);
  }

  // Flanked probability of an event in one state; nullopt when some member
  // string cannot be flanked inside the depth bound.
  std::optional<Rat> flanked(const std::vector<OutcomeString>& strings, const OutcomeString& a,
                             const OutcomeString& b, int state) const {
    Rat sum(0);
    for (const auto& s : strings) {
      const auto it = seq.string_probs[state].find(concat(concat(a, s), b));
      if (it == seq.string_probs[state].end()) return std::nullopt;
      sum += it->second;
    }
    return sum;
  }

  // Events are equivalent when every jointly-applicable flank agrees in
  // every state. The empty flank always applies to realizable events.
  bool equivalent(const std::vector<OutcomeString>& e1, const std::vector<OutcomeString>& e2) const {
    const int nstates = static_cast<int>(seq.string_probs.size());
    for (const auto& a : contexts) {
      for (const auto& b : contexts) {
        for (int st = 0; st < nstates; ++st) {
          const auto p1 = flanked(e1, a, b, st);
          if (!p1) break;  // flank not applicable to e1 in any state
          const auto p2 = flanked(e2, a, b, st);
          if (!p2) break;
          if (*p1 != *p2) return false;
        }
      }
    }
    return true;
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<OutcomeString> leaf_strings(const SequentialTheory& seq, int tree) {
  std::vector<OutcomeString> out;
  std::function<void(const TreeNode&, OutcomeString)> rec = [&](const TreeNode& n, OutcomeString s) {
    if (n.leaf()) {
      out.push_back(s);
      return;
    }
    const auto& outs = seq.theory.meas_outcomes[n.measurement];
    for (size_t i = 0; i < outs.size(); ++i) {
      OutcomeString next = s;
      next.push_back(outs[i]);
      rec(n.children[i], next);
    }
  };
  rec(seq.trees[tree], {});
  return out;
}

}  // namespace

int WeakOperationAlgebra::class_of_event(const SeqEvent& ev) const {
  for (int c = 0; c < size; ++c) {
    for (const auto& r : reps[c]) {
      if (r.strings == ev.strings) return c;
    }
  }
  return -1;
}

int WeakOperationAlgebra::class_of_string(const OutcomeString& s) const {
  for (int c = 0; c < size; ++c) {
    for (const auto& r : reps[c]) {
      if (r.strings.size() == 1 && r.strings[0] == s) return c;
    }
  }
  return -1;
}

WeakOperationAlgebra build_woa(const SequentialTheory& seq, size_t event_cap) {
  if (seq.string_probs.empty()) throw std::invalid_argument("sequential theory has no states");
  WeakOperationAlgebra w;

  // Enumerate events: every subset of every tree's leaf set, plus the
  // virtual identity tree {empty string}.
  std::vector<SeqEvent> events;
  events.push_back({-1, {}});                 // empty event of the virtual tree
  events.push_back({-1, {OutcomeString{}}});  // the identity operation
  for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
    const auto leaves = leaf_strings(seq, static_cast<int>(ti));
    if (leaves.size() > 14) {
      throw std::runtime_error("tree has too many leaves for event enumeration");
    }
    for (unsigned mask = 0; mask < (1u << leaves.size()); ++mask) {
      SeqEvent ev;
      ev.tree = static_cast<int>(ti);
      for (size_t i = 0; i < leaves.size(); ++i) {
        if (mask & (1u << i)) ev.strings.push_back(leaves[i]);
      }
      std::sort(ev.strings.begin(), ev.strings.end());
      events.push_back(std::move(ev));
      if (events.size() > event_cap) {
        throw std::runtime_error("event enumeration exceeds cap of " + std::to_string(event_cap));
      }
    }
  }

  const int n = static_cast<int>(events.size());
  const int nstates = static_cast<int>(seq.string_probs.size());
  Flanker flanker(seq);

  // Bucket by empty-flank signature first; only compare within buckets.
  std::map<RatVec, std::vector<int>> buckets;
  std::vector<RatVec> eps(n);
  for (int i = 0; i < n; ++i) {
    RatVec sig(nstates, Rat(0));
    for (int st = 0; st < nstates; ++st) {
      const auto p = flanker.flanked(events[i].strings, {}, {}, st);
      if (!p) throw std::logic_error("enumerated event is not realizable");
      sig[st] = *p;
    }
    eps[i] = std::move(sig);
    buckets[eps[i]].push_back(i);
  }

  UnionFind uf(n);
  for (const auto& [sig, members] : buckets) {
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        if (uf.find(members[a]) == uf.find(members[b])) continue;
        if (flanker.equivalent(events[members[a]].strings, events[members[b]].strings)) {
          uf.unite(members[a], members[b]);
        }
      }
    }
  }

  // Canonical class order: lexicographic on the empty-flank signature, ties
  // by first event index.
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::pair<RatVec, int>> order;
  for (const auto& [root, members] : groups) order.push_back({eps[members.front()], root});
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return ratvec_less(a.first, b.first);
    return groups[a.second].front() < groups[b.second].front();
  });

  w.size = static_cast<int>(order.size());
  std::vector<int> class_of(n, -1);
  for (int c = 0; c < w.size; ++c) {
    const auto& members = groups[order[c].second];
    w.eps_signature.push_back(order[c].first);
    w.reps.emplace_back();
    for (int i : members) {
      class_of[i] = c;
      w.reps.back().push_back(events[i]);
    }
  }
  w.zero = class_of[0];
  w.unit = class_of[1];
  for (int c = 0; c < w.size; ++c) {
    if (c == w.zero) {
      w.labels.push_back("0");
    } else if (c == w.unit) {
      w.labels.push_back("1");
    } else {
      const auto& ev = w.reps[c].front();
      std::string lab = "[";
      for (size_t i = 0; i < ev.strings.size() && i < 3; ++i) {
        lab += (i ? "|" : "") + string_to_text(seq.theory, ev.strings[i]);
      }
      if (ev.strings.size() > 3) lab += "|...";
      w.labels.push_back(lab + "]");
    }
  }

  // Index events by string set for product lookups.
  std::map<std::vector<OutcomeString>, int> by_strings;
  for (int i = 0; i < n; ++i) by_strings.emplace(events[i].strings, i);

  // plus: sibling coarse-graining within one tree, lifted to classes with
  // exhaustive witness checking.
  w.plus.assign(w.size, std::vector<int>(w.size, -1));
  bool witness_ok = true;
  std::string witness_note;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (events[i].tree != events[j].tree) continue;
      const auto& si = events[i].strings;
      const auto& sj = events[j].strings;
      std::vector<OutcomeString> inter;
      std::set_intersection(si.begin(), si.end(), sj.begin(), sj.end(), std::back_inserter(inter));
      if (!inter.empty()) continue;
      std::vector<OutcomeString> uni;
      std::set_union(si.begin(), si.end(), sj.begin(), sj.end(), std::back_inserter(uni));
      const auto it = by_strings.find(uni);
      if (it == by_strings.end()) continue;
      const int cu = class_of[it->second];
      int& cell = w.plus[class_of[i]][class_of[j]];
      if (cell >= 0 && cell != cu && witness_ok) {
        witness_ok = false;
        witness_note = "classes " + w.labels[class_of[i]] + " + " + w.labels[class_of[j]] +
                       " reach both " + w.labels[cell] + " and " + w.labels[cu];
      }
      if (cell < 0) cell = cu;
    }
  }
  w.construction.profile = "woa-construction";
  w.construction.add("plus-witness-independent", witness_ok, {}, witness_note);

  // product: concatenation of string sets lifted to classes. Two caveats of
  // the bounded depth: a composition that overflows the bound carries no
  // information, and a class can pick up deep events that merely lack the
  // context budget to be separated from its short members. So only
  // representatives of minimal string length vote, only realizable
  // compositions count, and a pair with no realizable composition collapses
  // to the zero class (counted in the note).
  std::vector<size_t> class_minlen(w.size, SIZE_MAX);
  auto event_maxlen = [](const SeqEvent& ev) {
    size_t m = 0;
    for (const auto& s : ev.strings) m = std::max(m, s.size());
    return m;
  };
  for (int c = 0; c < w.size; ++c) {
    for (const auto& r : w.reps[c]) class_minlen[c] = std::min(class_minlen[c], event_maxlen(r));
  }
  w.prod.assign(w.size, std::vector<int>(w.size, -1));
  bool prod_ok = true;
  std::string prod_note;
  long truncated_pairs = 0;
  auto compose_class = [&](const SeqEvent& e1, const SeqEvent& e2) -> std::optional<int> {
    std::vector<OutcomeString> strings;
    for (const auto& s : e1.strings) {
      for (const auto& t2 : e2.strings) strings.push_back(concat(s, t2));
    }
    std::sort(strings.begin(), strings.end());
    strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
    for (const auto& s : strings) {
      if (!seq.realizable(s)) return std::nullopt;  // not evaluable at this depth
    }
    const auto it = by_strings.find(strings);
    if (it == by_strings.end()) return std::nullopt;
    return class_of[it->second];
  };
  constexpr size_t kRepCap = 6;  // representative pairs checked per class pair
  for (int c1 = 0; c1 < w.size; ++c1) {
    for (int c2 = 0; c2 < w.size; ++c2) {
      int value = -1;
      size_t votes1 = 0;
      for (size_t i = 0; i < w.reps[c1].size() && votes1 < kRepCap; ++i) {
        if (event_maxlen(w.reps[c1][i]) != class_minlen[c1]) continue;
        ++votes1;
        size_t votes2 = 0;
        for (size_t j = 0; j < w.reps[c2].size() && votes2 < kRepCap; ++j) {
          if (event_maxlen(w.reps[c2][j]) != class_minlen[c2]) continue;
          ++votes2;
          const auto v = compose_class(w.reps[c1][i], w.reps[c2][j]);
          if (!v) continue;
          if (value < 0) value = *v;
          if (*v != value && prod_ok) {
            prod_ok = false;
            prod_note = "product of " + w.labels[c1] + " and " + w.labels[c2] +
                        " depends on the representatives";
          }
        }
      }
      if (value < 0) {
        value = w.zero;
        ++truncated_pairs;
      }
      w.prod[c1][c2] = value;
    }
  }
  if (prod_ok && truncated_pairs > 0) {
    prod_note = std::to_string(truncated_pairs) +
                " class pairs exceeded the depth bound and collapsed to 0";
  }
  w.construction.add("product-well-defined", prod_ok, {}, prod_note);
  return w;
}

PartialStructure to_structure(const WeakOperationAlgebra& w) {
  PartialStructure s;
  s.size = w.size;
  s.plus = w.plus;
  s.prod = w.prod;
  s.zero = w.zero;
  s.unit = w.unit;
  s.labels = w.labels;
  return s;
}

int StringClasses::class_of(const OutcomeString& s) const {
  for (size_t c = 0; c < classes.size(); ++c) {
    if (std::find(classes[c].begin(), classes[c].end(), s) != classes[c].end()) {
      return static_cast<int>(c);
    }
  }
  return -1;
}

StringClasses sequential_string_classes(const SequentialTheory& seq) {
  if (seq.string_probs.empty()) throw std::invalid_argument("sequential theory has no states");
  std::vector<OutcomeString> strings;
  for (const auto& [s, p] : seq.string_probs[0]) {
    if (!s.empty()) strings.push_back(s);
  }
  const int n = static_cast<int>(strings.size());
  const int nstates = static_cast<int>(seq.string_probs.size());
  Flanker flanker(seq);

  std::map<RatVec, std::vector<int>> buckets;
  for (int i = 0; i < n; ++i) {
    RatVec sig(nstates);
    for (int st = 0; st < nstates; ++st) sig[st] = seq.string_probs[st].at(strings[i]);
    buckets[sig].push_back(i);
  }
  UnionFind uf(n);
  for (const auto& [sig, members] : buckets) {
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        if (uf.find(members[a]) == uf.find(members[b])) continue;
        if (flanker.equivalent({strings[members[a]]}, {strings[members[b]]})) {
          uf.unite(members[a], members[b]);
        }
      }
    }
  }
  std::map<int, std::vector<OutcomeString>> groups;
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(strings[i]);
  StringClasses out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.classes.push_back(std::move(members));
  }
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

}  // namespace opalg
