#include "opalg/sequential.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace opalg {

RatVec StateUnchangedInstrument::conditional_probs(int token, int measurement) {
  RatVec out;
  for (int g : theory_->meas_outcomes[measurement]) {
    out.push_back(theory_->states[token].probs[g]);
  }
  return out;
}

std::string string_to_text(const PhenomenologicalTheory& t, const OutcomeString& s) {
  if (s.empty()) return "<empty>";
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) out += (i ? "." : "") + t.outcome_ids[s[i]];
  return out;
}

int tree_depth(const TreeNode& n) {
  if (n.leaf()) return 0;
  int d = 0;
  for (const auto& c : n.children) d = std::max(d, tree_depth(c));
  return 1 + d;
}

std::vector<TreeNode> enumerate_trees(const PhenomenologicalTheory& t, int depth, size_t tree_cap) {
  if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
  const size_t m = t.measurements.size();
  // Subtree options at each level: a leaf, or any tree one level shallower.
  std::vector<std::vector<TreeNode>> by_level(depth + 1);
  by_level[0] = {};  // depth-0 trees are leaves, handled via the leaf option
  for (int d = 1; d <= depth; ++d) {
    std::vector<TreeNode> options = by_level[d - 1];
    options.push_back(TreeNode{});  // the leaf
    for (size_t mi = 0; mi < m; ++mi) {
      const size_t arity = t.meas_outcomes[mi].size();
      std::vector<size_t> pick(arity, 0);
      while (true) {
        TreeNode node;
        node.measurement = static_cast<int>(mi);
        node.children.resize(arity);
        for (size_t i = 0; i < arity; ++i) node.children[i] = options[pick[i]];
        by_level[d].push_back(std::move(node));
        if (by_level[d].size() > tree_cap) {
          throw std::runtime_error("tree enumeration exceeds cap of " + std::to_string(tree_cap));
        }
        size_t i = 0;
        for (; i < arity; ++i) {
          if (++pick[i] < options.size()) break;
          pick[i] = 0;
        }
        if (i == arity) break;
      }
    }
    // Drop duplicates (a depth d-1 tree is also a depth d tree).
    std::sort(by_level[d].begin(), by_level[d].end(),
              [](const TreeNode& a, const TreeNode& b) { return tree_depth(a) < tree_depth(b); });
  }
  std::vector<TreeNode> out;
  for (const auto& tree : by_level[depth]) {
    if (std::find(out.begin(), out.end(), tree) == out.end()) out.push_back(tree);
  }
  return out;
}

namespace {

// Walk one tree under the instrument, filling node-string probabilities.
void walk(const PhenomenologicalTheory& t, Instrument& inst, const TreeNode& node, int token,
          const OutcomeString& prefix, const Rat& p, std::map<OutcomeString, Rat>& probs) {
  probs[prefix] = p;
  if (node.leaf()) return;
  const RatVec cond = inst.conditional_probs(token, node.measurement);
  Rat sum(0);
  for (const auto& c : cond) sum += c;
  if (sum != 1) {
    throw std::runtime_error("instrument produced an unnormalized conditional distribution");
  }
  const auto& outs = t.meas_outcomes[node.measurement];
  for (size_t i = 0; i < outs.size(); ++i) {
    OutcomeString next = prefix;
    next.push_back(outs[i]);
    const Rat q = p * cond[i];
    walk(t, inst, node.children[i], q == 0 ? token : inst.successor(token, outs[i]), next, q, probs);
  }
}

void merge_string_probs(SequentialTheory& seq) {
  seq.string_probs.assign(seq.theory.states.size(), {});
  for (size_t si = 0; si < seq.theory.states.size(); ++si) {
    for (const auto& tree_map : seq.per_tree[si]) {
      for (const auto& [s, p] : tree_map) {
        seq.string_probs[si].emplace(s, p);  // first occurrence wins; validator compares
      }
    }
  }
}

}  // namespace

SequentialTheory build_sequential_theory(const PhenomenologicalTheory& t, Instrument& instrument,
                                         int depth, size_t tree_cap) {
  if (depth < 1) throw std::invalid_argument("sequential depth must be >= 1");
  SequentialTheory seq;
  seq.theory = t;
  seq.depth = depth;
  seq.trees = enumerate_trees(t, depth, tree_cap);
  seq.per_tree.assign(t.states.size(), {});
  for (size_t si = 0; si < t.states.size(); ++si) {
    seq.per_tree[si].resize(seq.trees.size());
    for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
      walk(t, instrument, seq.trees[ti], instrument.initial_token(static_cast<int>(si)), {}, Rat(1),
           seq.per_tree[si][ti]);
    }
  }
  merge_string_probs(seq);
  return seq;
}

SequentialTheory sequential_from_declarations(const PhenomenologicalTheory& t) {
  if (t.declared_trees.empty()) {
    throw std::invalid_argument("theory declares no trees; nothing to build");
  }
  SequentialTheory seq;
  seq.theory = t;
  seq.per_tree.assign(t.states.size(), {});
  for (const auto& dt : t.declared_trees) {
    seq.trees.push_back(dt.root);
    seq.depth = std::max(seq.depth, tree_depth(dt.root));
  }

  std::map<std::string, int> state_index;
  for (size_t si = 0; si < t.states.size(); ++si) state_index[t.states[si].id] = static_cast<int>(si);

  // Leaf strings per tree.
  std::vector<std::vector<OutcomeString>> leaves(seq.trees.size());
  for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
    std::function<void(const TreeNode&, OutcomeString)> rec = [&](const TreeNode& n, OutcomeString s) {
      if (n.leaf()) {
        if (!s.empty()) leaves[ti].push_back(s);
        return;
      }
      const auto& outs = t.meas_outcomes[n.measurement];
      for (size_t i = 0; i < outs.size(); ++i) {
        OutcomeString next = s;
        next.push_back(outs[i]);
        rec(n.children[i], next);
      }
    };
    rec(seq.trees[ti], {});
  }

  // Assign declared string probabilities to the trees whose leaves they are.
  for (size_t si = 0; si < t.states.size(); ++si) {
    seq.per_tree[si].resize(seq.trees.size());
  }
  for (const auto& sp : t.seq_probs) {
    OutcomeString s;
    for (const auto& out : sp.outcomes) s.push_back(t.outcome_index(out));
    const int si = state_index.at(sp.state);
    bool placed = false;
    for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
      if (std::find(leaves[ti].begin(), leaves[ti].end(), s) != leaves[ti].end()) {
        seq.per_tree[si][ti][s] = sp.prob;
        placed = true;
      }
    }
    // Single outcomes are also depth-1 data; cross-checked by the validator.
    if (!placed) {
      throw std::invalid_argument("seqstate string " + string_to_text(t, s) +
                                  " is not a leaf of any declared tree");
    }
  }

  // Fill prefixes bottom-up from the leaves; missing leaves become report
  // entries in the validator, so default them to 0 here.
  for (size_t si = 0; si < t.states.size(); ++si) {
    for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
      auto& probs = seq.per_tree[si][ti];
      for (const auto& leaf : leaves[ti]) {
        if (!probs.count(leaf)) probs[leaf] = Rat(0);
      }
      // Longest strings first so prefixes accumulate children.
      std::vector<OutcomeString> keys;
      for (const auto& [s, p] : probs) keys.push_back(s);
      std::sort(keys.begin(), keys.end(),
                [](const OutcomeString& a, const OutcomeString& b) { return a.size() > b.size(); });
      for (const auto& s : keys) {
        if (s.empty()) continue;
        OutcomeString prefix(s.begin(), s.end() - 1);
        if (!probs.count(prefix)) {
          Rat sum(0);
          for (const auto& [other, p] : probs) {
            if (other.size() == s.size() &&
                std::equal(prefix.begin(), prefix.end(), other.begin())) {
              sum += p;
            }
          }
          probs[prefix] = sum;
        }
      }
      probs.try_emplace({}, Rat(1));
    }
  }
  merge_string_probs(seq);
  return seq;
}

namespace {

// Positions (as outcome strings) where two trees structurally differ,
// without descending into an already-differing node.
void diff_positions(const PhenomenologicalTheory& t, const TreeNode& a, const TreeNode& b,
                    OutcomeString at, std::vector<OutcomeString>& out) {
  if (a.measurement != b.measurement) {
    out.push_back(at);
    return;
  }
  if (a.leaf()) return;
  const auto& outs = t.meas_outcomes[a.measurement];
  for (size_t i = 0; i < outs.size(); ++i) {
    OutcomeString next = at;
    next.push_back(outs[i]);
    diff_positions(t, a.children[i], b.children[i], next, out);
  }
}

bool has_prefix(const OutcomeString& s, const OutcomeString& prefix) {
  return s.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin());
}

}  // namespace

AxiomReport validate_sequential(const SequentialTheory& seq) {
  AxiomReport r;
  r.profile = "sequential";
  const auto& t = seq.theory;

  bool norm_ok = true, prefix_ok = true;
  for (size_t si = 0; si < t.states.size() && norm_ok && prefix_ok; ++si) {
    for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
      const auto& probs = seq.per_tree[si][ti];
      const auto root_it = probs.find({});
      if (root_it == probs.end() || root_it->second != 1) {
        r.add("root-normalization", false, {static_cast<int>(si), static_cast<int>(ti)},
              "tree " + std::to_string(ti) + " does not sum to 1 in state '" + t.states[si].id + "'");
        norm_ok = false;
        break;
      }
      for (const auto& [s, p] : probs) {
        // Internal node iff some extension is present.
        Rat sum(0);
        bool internal = false;
        for (const auto& [other, q] : probs) {
          if (other.size() == s.size() + 1 && has_prefix(other, s)) {
            internal = true;
            sum += q;
          }
        }
        if (internal && sum != p) {
          r.add("prefix-consistency", false, {static_cast<int>(si), static_cast<int>(ti)},
                "P(" + string_to_text(t, s) + ") = " + rat_to_string(p) +
                    " but one-step extensions sum to " + rat_to_string(sum));
          prefix_ok = false;
          break;
        }
      }
      if (!prefix_ok) break;
    }
  }
  if (norm_ok) r.add("root-normalization", true);
  if (prefix_ok) r.add("prefix-consistency", true);

  bool noncontextual = true;
  for (size_t si = 0; si < t.states.size() && noncontextual; ++si) {
    std::map<OutcomeString, std::pair<Rat, int>> first;
    for (size_t ti = 0; ti < seq.trees.size(); ++ti) {
      for (const auto& [s, p] : seq.per_tree[si][ti]) {
        auto [it, fresh] = first.emplace(s, std::make_pair(p, static_cast<int>(ti)));
        if (!fresh && it->second.first != p) {
          r.add("noncontextuality", false,
                {static_cast<int>(si), it->second.second, static_cast<int>(ti)},
                "string " + string_to_text(t, s) + " has probability " +
                    rat_to_string(it->second.first) + " in tree " +
                    std::to_string(it->second.second) + " but " + rat_to_string(p) + " in tree " +
                    std::to_string(ti) + " (state '" + t.states[si].id + "')");
          noncontextual = false;
          break;
        }
      }
      if (!noncontextual) break;
    }
  }
  if (noncontextual) r.add("noncontextuality", true);

  // Trees differing in the subtree at exactly one node: strings avoiding
  // that node keep their probabilities.
  bool independent = true;
  for (size_t a = 0; a < seq.trees.size() && independent; ++a) {
    for (size_t b = a + 1; b < seq.trees.size() && independent; ++b) {
      std::vector<OutcomeString> diffs;
      diff_positions(t, seq.trees[a], seq.trees[b], {}, diffs);
      if (diffs.size() != 1) continue;
      const OutcomeString& n = diffs[0];
      if (n.empty()) continue;  // different roots, nothing shared
      for (size_t si = 0; si < t.states.size() && independent; ++si) {
        for (const auto& [s, p] : seq.per_tree[si][a]) {
          if (has_prefix(s, n)) continue;  // passes through the changed node
          const auto it = seq.per_tree[si][b].find(s);
          if (it != seq.per_tree[si][b].end() && it->second != p) {
            r.add("sibling-independence", false, {static_cast<int>(si)},
                  "string " + string_to_text(t, s) + " avoids the changed node " +
                      string_to_text(t, n) + " but its probability moved from " + rat_to_string(p) +
                      " to " + rat_to_string(it->second));
            independent = false;
            break;
          }
        }
      }
    }
  }
  if (independent) r.add("sibling-independence", true);
  return r;
}

}  // namespace opalg
