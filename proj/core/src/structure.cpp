#include "opalg/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace opalg {

AxiomReport check_convex_axioms(const PartialStructure& s, const RatMat& states);

std::string PartialStructure::label(int x) const {
  if (x >= 0 && x < static_cast<int>(labels.size()) && !labels[x].empty()) return labels[x];
  return "#" + std::to_string(x);
}

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::PAS: return "PAS";
    case Profile::WEA: return "WEA";
    case Profile::EA: return "EA";
    case Profile::Orthoalgebra: return "orthoalgebra";
    case Profile::OA: return "OA";
    case Profile::WOA: return "WOA";
    case Profile::ConvexEA: return "convexEA";
  }
  return "?";
}

namespace {

void check_zero(const PartialStructure& s, AxiomReport& r) {
  if (s.zero < 0) {
    r.add("ZERO", false, {}, "no zero element declared");
    return;
  }
  for (int x = 0; x < s.size; ++x) {
    if (s.plus[x][s.zero] != x) {
      r.add("ZERO", false, {x}, s.label(x) + " + 0 != " + s.label(x));
      return;
    }
  }
  r.add("ZERO", true);
}

void check_strong_comm(const PartialStructure& s, AxiomReport& r, const std::string& id) {
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      if (s.plus[x][y] != s.plus[y][x]) {
        r.add(id, false, {x, y}, s.label(x) + " + " + s.label(y) + " vs swapped");
        return;
      }
    }
  }
  r.add(id, true);
}

// side values: -1 undefined, else the result id
int assoc_left(const PartialStructure& s, int x, int y, int z) {
  const int xy = s.plus[x][y];
  return xy < 0 ? -1 : s.plus[xy][z];
}
int assoc_right(const PartialStructure& s, int x, int y, int z) {
  const int yz = s.plus[y][z];
  return yz < 0 ? -1 : s.plus[x][yz];
}

void check_assoc(const PartialStructure& s, AxiomReport& r, bool strong, const std::string& id) {
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      for (int z = 0; z < s.size; ++z) {
        const int l = assoc_left(s, x, y, z);
        const int rr = assoc_right(s, x, y, z);
        const bool bad = strong ? (l != rr) : (l >= 0 && rr >= 0 && l != rr);
        if (bad) {
          std::string note = "(" + s.label(x) + "+" + s.label(y) + ")+" + s.label(z) + " ";
          note += (l < 0) ? "undefined" : "= " + s.label(l);
          note += ", " + s.label(x) + "+(" + s.label(y) + "+" + s.label(z) + ") ";
          note += (rr < 0) ? "undefined" : "= " + s.label(rr);
          r.add(id, false, {x, y, z}, note);
          return;
        }
      }
    }
  }
  r.add(id, true);
}

void check_supplement(const PartialStructure& s, AxiomReport& r) {
  if (s.unit < 0) {
    r.add("EA3", false, {}, "no unit declared");
    return;
  }
  for (int e = 0; e < s.size; ++e) {
    int count = 0;
    int last = -1;
    for (int f = 0; f < s.size; ++f) {
      if (s.plus[e][f] == s.unit) {
        ++count;
        last = f;
      }
    }
    if (count != 1) {
      r.add("EA3", false, {e, last},
            s.label(e) + " has " + std::to_string(count) + " supplements");
      return;
    }
  }
  r.add("EA3", true);
}

void check_ea4(const PartialStructure& s, AxiomReport& r) {
  if (s.unit < 0) {
    r.add("EA4", false, {}, "no unit declared");
    return;
  }
  for (int x = 0; x < s.size; ++x) {
    if (s.plus[x][s.unit] >= 0 && x != s.zero) {
      r.add("EA4", false, {x}, s.label(x) + " + 1 defined but " + s.label(x) + " != 0");
      return;
    }
  }
  r.add("EA4", true);
}

void check_ortho(const PartialStructure& s, AxiomReport& r) {
  for (int x = 0; x < s.size; ++x) {
    if (s.plus[x][x] >= 0 && x != s.zero) {
      r.add("OA5", false, {x}, s.label(x) + " + " + s.label(x) + " defined for nonzero element");
      return;
    }
  }
  r.add("OA5", true, {}, "x + x defined only for x = 0");
}

void check_cancellative(const PartialStructure& s, AxiomReport& r, const std::string& id) {
  for (int x = 0; x < s.size; ++x) {
    std::map<int, int> seen;  // value -> y
    for (int y = 0; y < s.size; ++y) {
      const int v = s.plus[x][y];
      if (v < 0) continue;
      auto [it, fresh] = seen.emplace(v, y);
      if (!fresh) {
        r.add(id, false, {x, it->second, y},
              s.label(x) + " + " + s.label(it->second) + " = " + s.label(x) + " + " + s.label(y));
        return;
      }
    }
  }
  r.add(id, true);
}

void check_positive(const PartialStructure& s, AxiomReport& r, const std::string& id) {
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      if (s.plus[x][y] == s.zero && (x != s.zero || y != s.zero)) {
        r.add(id, false, {x, y}, s.label(x) + " + " + s.label(y) + " = 0 with nonzero summand");
        return;
      }
    }
  }
  r.add(id, true);
}

void require_product(const PartialStructure& s) {
  if (!s.has_product()) throw std::invalid_argument("profile requires a product table");
}

void check_product_assoc(const PartialStructure& s, AxiomReport& r) {
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      for (int z = 0; z < s.size; ++z) {
        if (s.prod[s.prod[x][y]][z] != s.prod[x][s.prod[y][z]]) {
          r.add("OA5", false, {x, y, z});
          return;
        }
      }
    }
  }
  r.add("OA5", true);
}

void check_product_unit(const PartialStructure& s, AxiomReport& r) {
  if (s.unit < 0) {
    r.add("OA6", false, {}, "no unit declared");
    return;
  }
  for (int x = 0; x < s.size; ++x) {
    if (s.prod[s.unit][x] != x || s.prod[x][s.unit] != x) {
      r.add("OA6", false, {x});
      return;
    }
  }
  r.add("OA6", true);
}

void check_zero_absorbing(const PartialStructure& s, AxiomReport& r) {
  for (int x = 0; x < s.size; ++x) {
    if (s.prod[s.zero][x] != s.zero || s.prod[x][s.zero] != s.zero) {
      r.add("OA7", false, {x});
      return;
    }
  }
  r.add("OA7", true);
}

void check_distributive(const PartialStructure& s, AxiomReport& r, bool strong) {
  for (int x = 0; x < s.size; ++x) {
    for (int y = 0; y < s.size; ++y) {
      const int xy = s.plus[x][y];
      if (xy < 0) continue;
      for (int z = 0; z < s.size; ++z) {
        {  // (x + y) z = xz + yz
          const int lhs = s.prod[xy][z];
          const int rhs = s.plus[s.prod[x][z]][s.prod[y][z]];
          if (strong ? (rhs != lhs) : (rhs >= 0 && rhs != lhs)) {
            r.add("OA8", false, {x, y, z}, "right distributivity");
            return;
          }
        }
        {  // z (x + y) = zx + zy
          const int lhs = s.prod[z][xy];
          const int rhs = s.plus[s.prod[z][x]][s.prod[z][y]];
          if (strong ? (rhs != lhs) : (rhs >= 0 && rhs != lhs)) {
            r.add("OA8", false, {z, x, y}, "left distributivity");
            return;
          }
        }
      }
    }
  }
  r.add("OA8", true, {}, strong ? "" : "weak form: checked where both sides defined");
}

void check_unit_top(const PartialStructure& s, AxiomReport& r) {
  const auto tops = top_set(s);
  const bool in = std::find(tops.begin(), tops.end(), s.unit) != tops.end();
  r.add("OA9", in, in ? std::vector<int>{} : std::vector<int>{s.unit},
        in ? "unit is a top element" : "unit is not a top element");
}

}  // namespace

AxiomReport check_axioms(const PartialStructure& s, Profile profile) {
  if (profile == Profile::ConvexEA) return check_convex_axioms(s, {});
  AxiomReport r;
  r.profile = profile_name(profile);
  switch (profile) {
    case Profile::PAS:
      check_zero(s, r);
      check_strong_comm(s, r, "EA1");
      check_assoc(s, r, true, "EA2");
      break;
    case Profile::WEA:
      check_zero(s, r);
      check_strong_comm(s, r, "EA1");
      check_assoc(s, r, false, "WEA2");
      check_supplement(s, r);
      check_ea4(s, r);
      break;
    case Profile::EA:
    case Profile::Orthoalgebra:
      check_zero(s, r);
      check_strong_comm(s, r, "EA1");
      check_assoc(s, r, true, "EA2");
      check_supplement(s, r);
      check_ea4(s, r);
      if (profile == Profile::Orthoalgebra) check_ortho(s, r);
      break;
    case Profile::OA:
    case Profile::WOA: {
      require_product(s);
      const bool strong = profile == Profile::OA;
      check_zero(s, r);
      check_assoc(s, r, strong, strong ? "OA1" : "WOA1");
      check_strong_comm(s, r, "OA2");
      check_cancellative(s, r, "OA3");
      check_positive(s, r, "OA4");
      check_product_assoc(s, r);
      check_product_unit(s, r);
      check_zero_absorbing(s, r);
      check_distributive(s, r, strong);
      check_unit_top(s, r);
      r.add("OA10", true, {}, "finite carrier: every chain has a maximum (pass with note)");
      break;
    }
    case Profile::ConvexEA:
      break;  // handled above
  }
  return r;
}

InducedOrder induced_order(const PartialStructure& s) {
  InducedOrder o;
  o.leq.assign(s.size, std::vector<bool>(s.size, false));
  for (int x = 0; x < s.size; ++x) {
    for (int z = 0; z < s.size; ++z) {
      const int y = s.plus[x][z];
      if (y >= 0) o.leq[x][y] = true;
    }
  }
  o.is_partial_order = true;
  for (int x = 0; x < s.size && o.is_partial_order; ++x) {
    if (!o.leq[x][x]) {
      o.is_partial_order = false;
      o.violation = "not reflexive at " + s.label(x);
    }
  }
  for (int x = 0; x < s.size && o.is_partial_order; ++x) {
    for (int y = 0; y < s.size && o.is_partial_order; ++y) {
      if (x != y && o.leq[x][y] && o.leq[y][x]) {
        o.is_partial_order = false;
        o.violation = "antisymmetry fails on " + s.label(x) + ", " + s.label(y);
      }
    }
  }
  for (int x = 0; x < s.size && o.is_partial_order; ++x) {
    for (int y = 0; y < s.size && o.is_partial_order; ++y) {
      if (!o.leq[x][y]) continue;
      for (int z = 0; z < s.size; ++z) {
        if (o.leq[y][z] && !o.leq[x][z]) {
          o.is_partial_order = false;
          o.violation = "transitivity fails on " + s.label(x) + " <= " + s.label(y) + " <= " + s.label(z);
          break;
        }
      }
    }
  }
  return o;
}

std::vector<int> top_set(const PartialStructure& s) {
  std::vector<int> tops;
  for (int t = 0; t < s.size; ++t) {
    bool top = true;
    for (int a = 0; a < s.size && top; ++a) {
      if (s.plus[a][t] >= 0 && a != s.zero) top = false;
    }
    if (top) tops.push_back(t);
  }
  return tops;
}

std::optional<int> ominus(const PartialStructure& s, int x, int y) {
  AxiomReport r;
  check_cancellative(s, r, "OA3");
  if (!r.all_pass()) throw std::invalid_argument("ominus requires a cancellative structure");
  for (int z = 0; z < s.size; ++z) {
    if (s.plus[y][z] == x) return z;
  }
  return std::nullopt;
}

namespace {

// For one multiset, which values does some association order reach?
// DP over position subsets; tracks one witnessing expression per value.
struct ReachEntry {
  std::map<int, std::string> expr;  // value -> witness expression
};

}  // namespace

std::vector<ResolutionOfUnity> resolutions_of_unity(const PartialStructure& s, int max_size) {
  if (s.unit < 0) throw std::invalid_argument("resolutions_of_unity requires a unit");
  if (max_size < 1 || max_size > 5) {
    throw std::invalid_argument("resolutions_of_unity: max_size must be in 1..5");
  }
  std::vector<ResolutionOfUnity> out;
  std::vector<int> stack;

  auto evaluate = [&](const std::vector<int>& ms) -> std::optional<std::string> {
    const int k = static_cast<int>(ms.size());
    std::vector<ReachEntry> reach(1 << k);
    for (int i = 0; i < k; ++i) {
      reach[1 << i].expr[ms[i]] = s.label(ms[i]);
    }
    for (int mask = 1; mask < (1 << k); ++mask) {
      if ((mask & (mask - 1)) == 0) continue;  // singletons done
      auto& entry = reach[mask];
      for (int sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
        const int other = mask ^ sub;
        if (sub < other) continue;  // each split once
        for (const auto& [va, ea] : reach[sub].expr) {
          for (const auto& [vb, eb] : reach[other].expr) {
            const int v = s.plus[va][vb];
            if (v < 0 || entry.expr.count(v)) continue;
            entry.expr[v] = "(" + ea + " + " + eb + ")";
          }
        }
      }
    }
    const auto it = reach[(1 << k) - 1].expr.find(s.unit);
    if (it == reach[(1 << k) - 1].expr.end()) return std::nullopt;
    return it->second;
  };

  // Multisets as nondecreasing id sequences.
  auto rec = [&](auto&& self, int lo) -> void {
    if (!stack.empty()) {
      if (auto w = evaluate(stack)) out.push_back({stack, *w});
    }
    if (static_cast<int>(stack.size()) == max_size) return;
    for (int x = lo; x < s.size; ++x) {
      stack.push_back(x);
      self(self, x);
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

StatePolytope state_polytope(const PartialStructure& s, bool enumerate_vertices_flag,
                             const RatMat& states_to_check) {
  StatePolytope p;
  p.dimension = s.size;
  std::set<RatVec> seen_rows;
  for (int x = 0; x < s.size; ++x) {
    for (int y = x; y < s.size; ++y) {
      const int z = s.plus[x][y];
      if (z < 0) continue;
      RatVec row(s.size, Rat(0));
      row[x] += 1;
      row[y] += 1;
      row[z] -= 1;
      if (is_zero_vec(row)) continue;
      if (seen_rows.insert(row).second) {
        p.eq.push_back(row);
        p.eq_rhs.push_back(Rat(0));
      }
    }
  }
  if (s.unit >= 0) {
    RatVec row(s.size, Rat(0));
    row[s.unit] = 1;
    p.eq.push_back(row);
    p.eq_rhs.push_back(Rat(1));
  }
  for (int x = 0; x < s.size; ++x) {
    RatVec lo(s.size, Rat(0)), hi(s.size, Rat(0));
    lo[x] = 1;
    hi[x] = -1;
    p.ineq.push_back(lo);
    p.ineq_rhs.push_back(Rat(0));
    p.ineq.push_back(hi);
    p.ineq_rhs.push_back(Rat(-1));
  }

  if (enumerate_vertices_flag) {
    PolytopeHRep h{p.dimension, p.eq, p.eq_rhs, p.ineq, p.ineq_rhs};
    const auto v = enumerate_vertices(h);
    p.enumerated = true;
    p.empty = v.empty;
    p.vertices = v.vertices;
  }

  if (!states_to_check.empty()) {
    p.separating_checked = true;
    p.separating = true;
    for (int x = 0; x < s.size && p.separating; ++x) {
      for (int y = x + 1; y < s.size && p.separating; ++y) {
        bool separated = false;
        for (const auto& w : states_to_check) {
          if (w[x] != w[y]) {
            separated = true;
            break;
          }
        }
        if (!separated) {
          p.separating = false;
          p.non_separated_pair = {x, y};
        }
      }
    }
  }
  return p;
}

bool is_state_vector(const PartialStructure& s, const RatVec& w) {
  if (static_cast<int>(w.size()) != s.size) return false;
  if (s.unit >= 0 && w[s.unit] != 1) return false;
  for (int x = 0; x < s.size; ++x) {
    if (w[x] < 0 || w[x] > 1) return false;
    for (int y = 0; y < s.size; ++y) {
      const int z = s.plus[x][y];
      if (z >= 0 && w[x] + w[y] != w[z]) return false;
    }
  }
  return true;
}

std::vector<Face> polytope_faces(const StatePolytope& p) {
  std::vector<Face> faces;
  if (!p.enumerated) return faces;
  for (size_t i = 0; i < p.ineq.size(); ++i) {
    Face f;
    f.supporting_constraint = static_cast<int>(i);
    for (size_t v = 0; v < p.vertices.size(); ++v) {
      if (dot(p.ineq[i], p.vertices[v]) == p.ineq_rhs[i]) f.members.push_back(static_cast<int>(v));
    }
    faces.push_back(std::move(f));
  }
  return faces;
}

}  // namespace opalg
