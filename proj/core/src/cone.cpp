#include "opalg/cone.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opalg {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(int nbits) { return Bits((nbits + 63) / 64, 0); }

void set_bit(Bits& b, int i) { b[i / 64] |= (std::uint64_t{1} << (i % 64)); }

bool subset_of(const Bits& a, const Bits& b, const Bits& mask) {
  for (size_t w = 0; w < a.size(); ++w) {
    if ((a[w] & mask[w] & ~b[w]) != 0) return false;
  }
  return true;
}

struct Ray {
  RatVec v;
  Bits active;  // tight constraints, indexed over all rows
};

Bits activity(const RatVec& v, const RatMat& rows) {
  Bits b = make_bits(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (dot(rows[i], v) == 0) set_bit(b, static_cast<int>(i));
  }
  return b;
}

// Extreme rays of a pointed full-rank cone {s : rows . s >= 0} in R^r.
RatMat pointed_dd(const RatMat& rows, int r) {
  if (r == 0) return {};
  // Pick r independent rows as the starting simplicial cone.
  std::vector<int> basis_rows;
  RatMat probe;
  for (size_t i = 0; i < rows.size() && static_cast<int>(basis_rows.size()) < r; ++i) {
    probe.push_back(rows[i]);
    if (rank(probe) == static_cast<int>(probe.size())) {
      basis_rows.push_back(static_cast<int>(i));
    } else {
      probe.pop_back();
    }
  }
  if (static_cast<int>(basis_rows.size()) != r) {
    throw std::logic_error("pointed_dd: constraint matrix is rank-deficient");
  }
  RatMat b(r, RatVec(r));
  for (int i = 0; i < r; ++i) b[i] = rows[basis_rows[i]];
  const auto binv = invert(b);
  if (!binv) throw std::logic_error("pointed_dd: basis inversion failed");

  const int m = static_cast<int>(rows.size());
  Bits processed = make_bits(m);
  for (int i : basis_rows) set_bit(processed, i);

  std::vector<Ray> rays;
  for (int k = 0; k < r; ++k) {
    RatVec col(r);
    for (int i = 0; i < r; ++i) col[i] = (*binv)[i][k];
    col = primitive(col);
    rays.push_back({col, activity(col, rows)});
  }

  std::set<int> basis_set(basis_rows.begin(), basis_rows.end());
  for (int ia = 0; ia < m; ++ia) {
    if (basis_set.count(ia)) continue;
    const RatVec& a = rows[ia];
    std::vector<int> pos, neg, zero;
    RatVec vals(rays.size());
    for (size_t j = 0; j < rays.size(); ++j) {
      vals[j] = dot(a, rays[j].v);
      if (vals[j] > 0) {
        pos.push_back(static_cast<int>(j));
      } else if (vals[j] < 0) {
        neg.push_back(static_cast<int>(j));
      } else {
        zero.push_back(static_cast<int>(j));
      }
    }
    set_bit(processed, ia);
    if (neg.empty()) continue;

    std::vector<Ray> next;
    for (int j : pos) next.push_back(rays[j]);
    for (int j : zero) next.push_back(rays[j]);
    std::set<RatVec> seen;
    for (const auto& ray : next) seen.insert(ray.v);
    for (int ip : pos) {
      for (int in : neg) {
        // Combinatorial adjacency: no third ray is tight on everything
        // both of these are tight on (among processed constraints).
        Bits common = rays[ip].active;
        for (size_t w = 0; w < common.size(); ++w) common[w] &= rays[in].active[w];
        bool adjacent = true;
        for (size_t j = 0; j < rays.size(); ++j) {
          if (static_cast<int>(j) == ip || static_cast<int>(j) == in) continue;
          if (subset_of(common, rays[j].active, processed)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        RatVec w(r);
        for (int k = 0; k < r; ++k) w[k] = vals[ip] * rays[in].v[k] - vals[in] * rays[ip].v[k];
        w = primitive(w);
        if (is_zero_vec(w) || seen.count(w)) continue;
        seen.insert(w);
        next.push_back({w, activity(w, rows)});
      }
    }
    rays = std::move(next);
  }

  RatMat out;
  out.reserve(rays.size());
  for (auto& ray : rays) out.push_back(std::move(ray.v));
  sort_rows(out);
  return out;
}

RatMat vrep_to_vectors(const ConeVRep& v) {
  RatMat out = v.rays;
  for (const auto& l : v.lineality) {
    out.push_back(l);
    RatVec neg(l.size());
    for (size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
    out.push_back(neg);
  }
  sort_rows(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ConeVRep rays_from_halfspaces(const RatMat& rows, int dim) {
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim) {
      throw std::invalid_argument("rays_from_halfspaces: row dimension mismatch");
    }
  }
  ConeVRep result;
  // Lineality space: {x : rows x = 0}.
  RatMat lin = kernel_basis(rows, dim);
  for (auto& l : lin) result.lineality.push_back(primitive(l, /*orient=*/true));
  sort_rows(result.lineality);

  const int r = dim - static_cast<int>(lin.size());
  if (r == 0) return result;

  // Complement of the lineality space spanned by unit vectors: any
  // complement works, since C = L + (C intersect W).
  std::vector<int> sel;
  RatMat span = lin;
  for (int j = 0; j < dim && static_cast<int>(sel.size()) < r; ++j) {
    RatVec e(dim, Rat(0));
    e[j] = 1;
    span.push_back(e);
    if (rank(span) == static_cast<int>(span.size())) {
      sel.push_back(j);
    } else {
      span.pop_back();
    }
  }

  RatMat reduced(rows.size(), RatVec(r));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < r; ++k) reduced[i][k] = rows[i][sel[k]];
  }

  const RatMat rays_r = pointed_dd(reduced, r);
  for (const auto& s : rays_r) {
    RatVec x(dim, Rat(0));
    for (int k = 0; k < r; ++k) x[sel[k]] = s[k];
    result.rays.push_back(primitive(x));
  }
  sort_rows(result.rays);
  return result;
}

PolyhedralCone PolyhedralCone::from_generators(int dim, RatMat gens) {
  PolyhedralCone c;
  c.dim = dim;
  c.facets = vrep_to_vectors(rays_from_halfspaces(gens, dim));
  c.generators = vrep_to_vectors(rays_from_halfspaces(c.facets, dim));
  return c;
}

PolyhedralCone PolyhedralCone::from_facets(int dim, RatMat facets) {
  PolyhedralCone c;
  c.dim = dim;
  c.generators = vrep_to_vectors(rays_from_halfspaces(facets, dim));
  c.facets = vrep_to_vectors(rays_from_halfspaces(c.generators, dim));
  return c;
}

bool PolyhedralCone::contains(const RatVec& x) const {
  if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("contains: dimension mismatch");
  for (const auto& f : facets) {
    if (dot(f, x) < 0) return false;
  }
  return true;
}

bool PolyhedralCone::same_cone(const PolyhedralCone& other) const {
  return dim == other.dim && generators == other.generators && facets == other.facets;
}

PolyhedralCone dual_cone(const PolyhedralCone& c) {
  // The dual swaps representations: its valid inequalities are the primal
  // generators, its generators the primal facet normals.
  return PolyhedralCone::from_generators(c.dim, c.facets);
}

AxiomReport is_regular(const PolyhedralCone& c) {
  AxiomReport report;
  report.profile = "regular-cone";
  report.add("convex", true, {}, "structural: polyhedral cones are convex");
  report.add("closed", true, {}, "structural: polyhedral cones are closed");

  const int gen_rank = rank(c.generators);
  report.add("generating", gen_rank == c.dim, {},
             "rank " + std::to_string(gen_rank) + " of " + std::to_string(c.dim));

  bool pointed = true;
  std::string note;
  for (size_t i = 0; i < c.generators.size() && pointed; ++i) {
    RatVec neg(c.generators[i].size());
    for (size_t j = 0; j < neg.size(); ++j) neg[j] = -c.generators[i][j];
    if (c.contains(neg)) {
      pointed = false;
      note = "generator " + std::to_string(i) + " and its negation both lie in the cone";
    }
  }
  report.add("pointed", pointed, {}, note);
  return report;
}

bool is_self_dual(const PolyhedralCone& c) { return c.same_cone(dual_cone(c)); }

PolytopeVertices enumerate_vertices(const PolytopeHRep& h) {
  PolytopeVertices out;
  const int n = h.dim;

  RatVec x0(n, Rat(0));
  RatMat basis;
  if (!h.eq.empty()) {
    auto sol = solve_linear(h.eq, h.eq_rhs);
    if (!sol) {
      out.empty = true;
      return out;
    }
    x0 = *sol;
    basis = kernel_basis(h.eq, n);
  } else {
    basis = identity_mat(n);
  }
  const int k = static_cast<int>(basis.size());
  if (k > kVertexEnumDimCap) {
    throw std::runtime_error("vertex enumeration dimension " + std::to_string(k) +
                             " exceeds cap " + std::to_string(kVertexEnumDimCap));
  }

  // Reduce inequalities onto the affine solution space x = x0 + y . basis.
  RatMat rows;
  for (size_t i = 0; i < h.ineq.size(); ++i) {
    RatVec row(k + 1);
    for (int j = 0; j < k; ++j) row[j] = dot(h.ineq[i], basis[j]);
    const Rat rhs = h.ineq_rhs[i] - dot(h.ineq[i], x0);
    bool all_zero = true;
    for (int j = 0; j < k; ++j) {
      if (row[j] != 0) all_zero = false;
    }
    if (all_zero) {
      if (rhs > 0) {
        out.empty = true;
        return out;
      }
      continue;
    }
    row[k] = -rhs;  // f.y - rhs*t >= 0
    rows.push_back(std::move(row));
  }
  if (k == 0) {
    out.vertices.push_back(x0);
    return out;
  }
  RatVec trow(k + 1, Rat(0));
  trow[k] = 1;
  rows.push_back(trow);

  const ConeVRep cone = rays_from_halfspaces(rows, k + 1);
  auto map_back = [&](const RatVec& y, bool affine) {
    RatVec x = affine ? x0 : RatVec(n, Rat(0));
    for (int j = 0; j < k; ++j) {
      for (int c = 0; c < n; ++c) x[c] += y[j] * basis[j][c];
    }
    return x;
  };
  for (const auto& ray : cone.rays) {
    const Rat t = ray[k];
    RatVec y(ray.begin(), ray.begin() + k);
    if (t > 0) {
      for (auto& v : y) v /= t;
      out.vertices.push_back(map_back(y, true));
    } else {
      out.ray_dirs.push_back(primitive(map_back(y, false)));
    }
  }
  for (const auto& l : cone.lineality) {
    RatVec y(l.begin(), l.begin() + k);
    RatVec d = primitive(map_back(y, false));
    RatVec neg(d.size());
    for (size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
    out.ray_dirs.push_back(d);
    out.ray_dirs.push_back(neg);
  }
  sort_rows(out.vertices);
  sort_rows(out.ray_dirs);
  out.empty = out.vertices.empty();
  return out;
}

PolyhedralCone parse_cone_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = -1;
  RatMat gens, facets;
  RatMat* section = nullptr;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "dim") {
      if (!(ls >> dim) || dim <= 0) {
        throw std::runtime_error("cone file line " + std::to_string(lineno) + ": bad dim");
      }
    } else if (tok == "generators") {
      section = &gens;
    } else if (tok == "facets") {
      section = &facets;
    } else {
      if (dim <= 0 || section == nullptr) {
        throw std::runtime_error("cone file line " + std::to_string(lineno) +
                                 ": row outside a section (need dim + section header)");
      }
      RatVec row;
      row.push_back(rat_from_string(tok));
      std::string t2;
      while (ls >> t2) row.push_back(rat_from_string(t2));
      if (static_cast<int>(row.size()) != dim) {
        throw std::runtime_error("cone file line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(dim) + " entries");
      }
      section->push_back(std::move(row));
    }
  }
  if (dim <= 0) throw std::runtime_error("cone file: missing dim line");
  if (!gens.empty()) return PolyhedralCone::from_generators(dim, gens);
  if (!facets.empty()) return PolyhedralCone::from_facets(dim, facets);
  throw std::runtime_error("cone file: need a generators or facets section");
}

std::string emit_cone_file(const PolyhedralCone& c) {
  std::ostringstream os;
  os << "dim " << c.dim << "\n";
  os << "generators\n";
  for (const auto& g : c.generators) {
    for (size_t i = 0; i < g.size(); ++i) os << (i ? " " : "") << rat_to_string(g[i]);
    os << "\n";
  }
  os << "facets\n";
  for (const auto& f : c.facets) {
    for (size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << rat_to_string(f[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace opalg
