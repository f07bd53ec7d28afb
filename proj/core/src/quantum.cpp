#include "opalg/quantum.hpp"

#include <algorithm>
#include <stdexcept>

namespace opalg {

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::SelfAdjointEigenSolver<CMat> eig(const CMat& m) {
  return Eigen::SelfAdjointEigenSolver<CMat>((m + m.adjoint()) / 2.0);
}

}  // namespace

bool is_hermitian(const CMat& m, double tol) { return max_abs(m - m.adjoint()) <= tol; }

double min_eigenvalue(const CMat& m) { return eig(m).eigenvalues().minCoeff(); }
double max_eigenvalue(const CMat& m) { return eig(m).eigenvalues().maxCoeff(); }

bool is_effect(const CMat& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  const auto vals = eig(m).eigenvalues();
  return vals.minCoeff() >= -tol && vals.maxCoeff() <= 1.0 + tol;
}

bool is_density(const CMat& m, double tol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol &&
         std::abs(m.trace().real() - 1.0) <= tol && std::abs(m.trace().imag()) <= tol;
}

CMat kraus_to_choi(const std::vector<CMat>& kraus, int dim) {
  CMat choi = CMat::Zero(dim * dim, dim * dim);
  for (const auto& k : kraus) {
    // Choi = sum_k vec(K) vec(K)^dagger with vec stacking block index first:
    // entry ((i,r),(j,s)) = K(r,i) conj(K(s,j)) = Phi(|i><j|) at (r,s).
    CVec v(dim * dim);
    for (int i = 0; i < dim; ++i) {
      for (int r = 0; r < dim; ++r) v(i * dim + r) = k(r, i);
    }
    choi += v * v.adjoint();
  }
  return choi;
}

std::vector<CMat> choi_to_kraus(const CMat& choi, int dim, double tol) {
  const auto es = eig(choi);
  std::vector<CMat> kraus;
  for (int n = 0; n < choi.rows(); ++n) {
    const double lambda = es.eigenvalues()(n);
    if (lambda <= tol) continue;
    const CVec v = es.eigenvectors().col(n) * std::sqrt(lambda);
    CMat k(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int r = 0; r < dim; ++r) k(r, i) = v(i * dim + r);
    }
    kraus.push_back(std::move(k));
  }
  return kraus;
}

QuantumOperation make_operation(int dim, std::vector<CMat> kraus) {
  QuantumOperation op;
  op.dim = dim;
  op.kraus = std::move(kraus);
  op.choi = kraus_to_choi(op.kraus, dim);
  return op;
}

QuantumOperation operation_from_choi(int dim, const CMat& choi, double tol) {
  QuantumOperation op;
  op.dim = dim;
  op.kraus = choi_to_kraus(choi, dim, tol);
  op.choi = kraus_to_choi(op.kraus, dim);  // rebuilt from the extracted Kraus set
  return op;
}

CMat apply_operation(const QuantumOperation& op, const CMat& rho) {
  CMat out = CMat::Zero(op.dim, op.dim);
  for (const auto& k : op.kraus) out += k * rho * k.adjoint();
  return out;
}

QuantumOperation compose(const QuantumOperation& a, const QuantumOperation& b) {
  std::vector<CMat> kraus;
  for (const auto& ka : a.kraus) {
    for (const auto& kb : b.kraus) kraus.push_back(ka * kb);
  }
  return make_operation(a.dim, std::move(kraus));
}

std::optional<QuantumOperation> add_operations(const QuantumOperation& a, const QuantumOperation& b,
                                               double tol) {
  std::vector<CMat> kraus = a.kraus;
  kraus.insert(kraus.end(), b.kraus.begin(), b.kraus.end());
  auto op = make_operation(a.dim, std::move(kraus));
  if (!is_trace_nonincreasing(op, tol)) return std::nullopt;
  return op;
}

namespace {
CMat kraus_gram(const QuantumOperation& op) {
  CMat s = CMat::Zero(op.dim, op.dim);
  for (const auto& k : op.kraus) s += k.adjoint() * k;
  return s;
}
}  // namespace

bool is_completely_positive(const QuantumOperation& op, double tol) {
  return min_eigenvalue(op.choi) >= -tol;
}

bool is_trace_nonincreasing(const QuantumOperation& op, double tol) {
  return max_eigenvalue(kraus_gram(op)) <= 1.0 + tol;
}

bool is_trace_preserving(const QuantumOperation& op, double tol) {
  return max_abs(kraus_gram(op) - CMat::Identity(op.dim, op.dim)) <= tol;
}

std::optional<QuantumOperation> op_ominus(const QuantumOperation& a, const QuantumOperation& b,
                                          double tol) {
  const CMat diff = a.choi - b.choi;
  if (min_eigenvalue(diff) < -tol) return std::nullopt;
  return operation_from_choi(a.dim, diff, tol);
}

bool kraus_submultiset(const std::vector<CMat>& small, const std::vector<CMat>& big, double tol) {
  std::vector<bool> used(big.size(), false);
  for (const auto& k : small) {
    bool matched = false;
    for (size_t i = 0; i < big.size(); ++i) {
      if (!used[i] && max_abs(big[i] - k) <= tol) {
        used[i] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

double trace_distance(const CMat& a, const CMat& b) {
  const auto es = eig(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CMat random_unitary(int d, Rng& rng) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  }
  const Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const auto rjj = r(j, j);
    if (std::abs(rjj) > 1e-14) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

CVec random_pure(int d, Rng& rng) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

CMat random_density(int d, Rng& rng) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  }
  CMat w = g * g.adjoint();
  return w / w.trace().real();
}

CMat random_effect(int d, Rng& rng) {
  CMat w = random_density(d, rng);
  const double scale = (0.1 + 0.9 * rng.uniform()) / max_eigenvalue(w);
  return w * scale;
}

QuantumOperation random_operation(int d, int kraus_count, Rng& rng, bool trace_preserving) {
  std::vector<CMat> kraus;
  for (int n = 0; n < kraus_count; ++n) {
    CMat k(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) k(i, j) = rng.cnormal();
    }
    kraus.push_back(std::move(k));
  }
  CMat s = CMat::Zero(d, d);
  for (const auto& k : kraus) s += k.adjoint() * k;
  if (trace_preserving) {
    // Normalize so the Kraus set is exactly complete.
    const CMat s_inv_sqrt = [&] {
      const auto es = eig(s);
      CMat d_inv = CMat::Zero(d, d);
      for (int i = 0; i < d; ++i) d_inv(i, i) = 1.0 / std::sqrt(es.eigenvalues()(i));
      return CMat(es.eigenvectors() * d_inv * es.eigenvectors().adjoint());
    }();
    for (auto& k : kraus) k = k * s_inv_sqrt;
  } else {
    const double scale = 1.0 / std::sqrt(max_eigenvalue(s) * (1.0 + rng.uniform()));
    for (auto& k : kraus) k = k * scale;
  }
  return make_operation(d, std::move(kraus));
}

std::vector<CMat> random_povm(int d, int outcomes, Rng& rng) {
  std::vector<CMat> gs;
  CMat s = CMat::Zero(d, d);
  for (int i = 0; i < outcomes; ++i) {
    CMat g(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) g(r, c) = rng.cnormal();
    }
    gs.push_back(g * g.adjoint());
    s += gs.back();
  }
  const auto es = eig(s);
  CMat d_inv = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) d_inv(i, i) = 1.0 / std::sqrt(es.eigenvalues()(i));
  const CMat w = es.eigenvectors() * d_inv * es.eigenvectors().adjoint();
  for (auto& g : gs) g = w * g * w;
  return gs;
}

FuzzyAlgebra fuzzy_set_algebra(int d, int grid_denom) {
  if (d < 1) throw std::invalid_argument("fuzzy_set_algebra: d must be >= 1");
  if (grid_denom < 1 || std::pow(grid_denom + 1.0, d) > 4096) {
    throw std::invalid_argument("fuzzy_set_algebra: grid too large");
  }
  FuzzyAlgebra f;
  const int q = grid_denom;
  const int levels = q + 1;
  int size = 1;
  for (int i = 0; i < d; ++i) size *= levels;

  // Mixed-radix decode: element id -> function values k/q per point.
  std::vector<std::vector<int>> raw(size, std::vector<int>(d));
  for (int id = 0; id < size; ++id) {
    int rest = id;
    for (int i = 0; i < d; ++i) {
      raw[id][i] = rest % levels;
      rest /= levels;
    }
    RatVec vals(d);
    for (int i = 0; i < d; ++i) vals[i] = Rat(raw[id][i], q);
    f.values.push_back(std::move(vals));
  }

  auto encode = [&](const std::vector<int>& ks) {
    int id = 0;
    for (int i = d - 1; i >= 0; --i) id = id * levels + ks[i];
    return id;
  };

  auto& s = f.structure;
  s.size = size;
  s.plus.assign(size, std::vector<int>(size, -1));
  std::vector<int> zeros(d, 0), ones(d, q);
  s.zero = encode(zeros);
  s.unit = encode(ones);
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      std::vector<int> sum(d);
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        sum[i] = raw[a][i] + raw[b][i];
        if (sum[i] > q) {
          ok = false;
          break;
        }
      }
      if (ok) s.plus[a][b] = encode(sum);
    }
  }

  // Scalar grid: denominators <= 8.
  for (int den = 1; den <= 8; ++den) {
    for (int num = 0; num <= den; ++num) {
      const Rat r(num, den);
      if (std::find(s.scalars.begin(), s.scalars.end(), r) == s.scalars.end()) {
        s.scalars.push_back(r);
      }
    }
  }
  std::sort(s.scalars.begin(), s.scalars.end());
  s.action.assign(s.scalars.size(), std::vector<int>(size, -1));
  for (size_t si = 0; si < s.scalars.size(); ++si) {
    for (int a = 0; a < size; ++a) {
      std::vector<int> scaled(d);
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        const Rat v = s.scalars[si] * Rat(raw[a][i], q);
        const Rat kq = v * q;
        if (denominator(kq) != 1) {
          ok = false;  // scalar action leaves the carrier grid
          break;
        }
        scaled[i] = static_cast<int>(numerator(kq));
      }
      if (ok) s.action[si][a] = encode(scaled);
    }
  }

  for (int a = 0; a < size; ++a) {
    std::string lab = "(";
    for (int i = 0; i < d; ++i) lab += (i ? "," : "") + rat_to_string(f.values[a][i]);
    s.labels.push_back(lab + ")");
  }

  // Diagonal embedding into the quantum effect interval.
  for (int a = 0; a < size; ++a) {
    CMat m = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = to_double(f.values[a][i]);
    f.embedding.push_back({m});
  }
  f.embedding_additive = true;
  for (int a = 0; a < size && f.embedding_additive; ++a) {
    for (int b = 0; b < size; ++b) {
      const int c = s.plus[a][b];
      if (c < 0) continue;
      if (max_abs(f.embedding[a].op + f.embedding[b].op - f.embedding[c].op) > kIdentityTol) {
        f.embedding_additive = false;
        break;
      }
    }
  }
  return f;
}

EffectSample quantum_effect_sample(int d, int count, std::uint64_t seed, int closure_rounds,
                                   size_t cap) {
  Rng rng(seed);
  EffectSample sample;
  auto& effects = sample.effects;
  const CMat id = CMat::Identity(d, d);
  effects.push_back(CMat::Zero(d, d));
  effects.push_back(id);

  auto find_match = [&](const CMat& m) -> int {
    for (size_t i = 0; i < effects.size(); ++i) {
      if (max_abs(effects[i] - m) <= kMembershipTol) return static_cast<int>(i);
    }
    return -1;
  };
  auto add_effect = [&](const CMat& m) -> int {
    const int at = find_match(m);
    if (at >= 0) return at;
    if (effects.size() >= cap) throw std::runtime_error("effect closure exceeds cap");
    effects.push_back(m);
    return static_cast<int>(effects.size()) - 1;
  };

  for (int n = 0; n < count; ++n) {
    const CMat e = random_effect(d, rng);
    add_effect(e);
    add_effect(id - e);
  }
  for (int round = 0; round < closure_rounds; ++round) {
    const size_t frozen = effects.size();
    for (size_t i = 0; i < frozen; ++i) {
      for (size_t j = i; j < frozen; ++j) {
        const CMat sum = effects[i] + effects[j];
        if (max_eigenvalue(sum) <= 1.0 + kMembershipTol) {
          add_effect(sum);
          add_effect(id - sum);
        }
      }
    }
  }

  auto& s = sample.structure;
  s.size = static_cast<int>(effects.size());
  s.zero = 0;
  s.unit = 1;
  s.plus.assign(s.size, std::vector<int>(s.size, -1));
  for (int i = 0; i < s.size; ++i) {
    for (int j = 0; j < s.size; ++j) {
      const CMat sum = effects[i] + effects[j];
      if (max_eigenvalue(sum) > 1.0 + kMembershipTol) continue;
      const int at = find_match(sum);
      if (at >= 0) s.plus[i][j] = at;
    }
  }
  return sample;
}

std::vector<CMat> informationally_complete_effects(int d) {
  std::vector<CMat> effects;
  const CMat id = CMat::Identity(d, d);
  const std::complex<double> i1(0, 1);
  if (d == 2) {
    CMat x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -i1, i1, 0;
    z << 1, 0, 0, -1;
    effects.push_back(id / 2.0);
    for (const CMat& p : {x, y, z}) {
      effects.push_back((id + p) / 4.0);
      effects.push_back((id - p) / 4.0);
    }
  } else if (d == 3) {
    std::vector<CMat> gm;
    auto sym = [&](int a, int b) {
      CMat m = CMat::Zero(3, 3);
      m(a, b) = 1;
      m(b, a) = 1;
      return m;
    };
    auto asym = [&](int a, int b) {
      CMat m = CMat::Zero(3, 3);
      m(a, b) = -i1;
      m(b, a) = i1;
      return m;
    };
    gm.push_back(sym(0, 1));
    gm.push_back(asym(0, 1));
    CMat l3 = CMat::Zero(3, 3);
    l3(0, 0) = 1;
    l3(1, 1) = -1;
    gm.push_back(l3);
    gm.push_back(sym(0, 2));
    gm.push_back(asym(0, 2));
    gm.push_back(sym(1, 2));
    gm.push_back(asym(1, 2));
    CMat l8 = CMat::Zero(3, 3);
    l8(0, 0) = 1;
    l8(1, 1) = 1;
    l8(2, 2) = -2;
    gm.push_back(l8 / std::sqrt(3.0));
    effects.push_back(id / 3.0);
    for (const auto& g : gm) {
      effects.push_back((id + g / 2.0) / 3.0);
      effects.push_back((id - g / 2.0) / 3.0);
    }
  } else {
    throw std::invalid_argument("informationally complete sets are provided for d = 2, 3");
  }
  return effects;
}

namespace {

// Hermitian operator basis: diagonal units, then (|i><j|+|j><i|) and
// i(|i><j|-|j><i|) for i < j. Coordinates are real.
std::vector<CMat> hermitian_basis(int d) {
  std::vector<CMat> basis;
  const std::complex<double> i1(0, 1);
  for (int i = 0; i < d; ++i) {
    CMat m = CMat::Zero(d, d);
    m(i, i) = 1;
    basis.push_back(m);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      CMat m = CMat::Zero(d, d);
      m(i, j) = 1;
      m(j, i) = 1;
      basis.push_back(m);
      CMat n = CMat::Zero(d, d);
      n(i, j) = i1;
      n(j, i) = -i1;
      basis.push_back(n);
    }
  }
  return basis;
}

}  // namespace

GleasonResult gleason_check(int d, const std::vector<CMat>& effects,
                            const std::vector<double>& values) {
  if (effects.size() != values.size()) throw std::invalid_argument("one value per effect required");
  const auto basis = hermitian_basis(d);
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd m(effects.size(), nb);
  Eigen::VectorXd v(effects.size());
  for (size_t r = 0; r < effects.size(); ++r) {
    for (int c = 0; c < nb; ++c) m(r, c) = (basis[c] * effects[r]).trace().real();
    v(r) = values[r];
  }
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(m).rank() < nb) {
    throw std::invalid_argument("effect set does not span the Hermitian operators");
  }
  const Eigen::VectorXd x = m.colPivHouseholderQr().solve(v);
  GleasonResult res;
  res.residual = (m * x - v).cwiseAbs().maxCoeff();
  if (res.residual > 1e-7) {
    res.status = GleasonResult::Status::NonAdditive;
    int worst = 0;
    (m * x - v).cwiseAbs().maxCoeff(&worst);
    res.certificate = "values are not additively consistent; worst effect index " +
                      std::to_string(worst) + " residual " + std::to_string(res.residual);
    return res;
  }
  CMat rho = CMat::Zero(d, d);
  for (int c = 0; c < nb; ++c) rho += x(c) * basis[c];
  res.rho = rho;
  res.trace = rho.trace().real();
  res.min_eig = min_eigenvalue(rho);
  if (std::abs(res.trace - 1.0) > kMembershipTol) {
    res.status = GleasonResult::Status::NotNormalized;
    res.certificate = "recovered operator has trace " + std::to_string(res.trace);
  } else if (res.min_eig < -kMembershipTol) {
    res.status = GleasonResult::Status::NotPositive;
    res.certificate = "recovered operator has eigenvalue " + std::to_string(res.min_eig);
  } else {
    res.status = GleasonResult::Status::Recovered;
  }
  return res;
}

OperationAlgebraInstance operation_algebra_instance(int d, std::uint64_t seed, size_t cap) {
  // Elements: partial functions f on {0..d-1} (the map
  // X -> sum_{b in dom f} U|f(b)><b|U' X U|b><f(b)|U'), plus the identity.
  // This family is closed under composition, and under addition exactly
  // when domains are disjoint, which is exactly trace-nonincreasing.
  long total = 1;
  for (int i = 0; i < d; ++i) total *= (d + 1);
  if (static_cast<size_t>(total) + 1 > cap) {
    throw std::runtime_error("operation closure exceeds cap");
  }
  Rng rng(seed);
  const CMat u = random_unitary(d, rng);

  OperationAlgebraInstance inst;
  auto& s = inst.structure;
  const int n = static_cast<int>(total) + 1;
  const int id_elem = n - 1;
  s.size = n;
  s.unit = id_elem;

  // Decode element -> partial function (value d means "undefined").
  std::vector<std::vector<int>> fn(total, std::vector<int>(d));
  for (long e = 0; e < total; ++e) {
    long rest = e;
    for (int b = 0; b < d; ++b) {
      fn[e][b] = static_cast<int>(rest % (d + 1));
      rest /= (d + 1);
    }
  }
  auto encode = [&](const std::vector<int>& f) {
    long e = 0;
    for (int b = d - 1; b >= 0; --b) e = e * (d + 1) + f[b];
    return static_cast<int>(e);
  };
  s.zero = encode(std::vector<int>(d, d));

  s.plus.assign(n, std::vector<int>(n, -1));
  s.prod.assign(n, std::vector<int>(n, -1));
  for (long a = 0; a < total; ++a) {
    for (long b = 0; b < total; ++b) {
      // Sum: union when domains are disjoint.
      std::vector<int> uni(d);
      bool disjoint = true;
      for (int k = 0; k < d; ++k) {
        const bool da = fn[a][k] < d, db = fn[b][k] < d;
        if (da && db) {
          disjoint = false;
          break;
        }
        uni[k] = da ? fn[a][k] : fn[b][k];
      }
      if (disjoint) s.plus[a][b] = encode(uni);
      // Composition a after b: (f_a . f_b)(k) = f_a(f_b(k)).
      std::vector<int> comp(d);
      for (int k = 0; k < d; ++k) {
        comp[k] = fn[b][k] < d ? fn[a][fn[b][k]] : d;
      }
      s.prod[a][b] = encode(comp);
    }
  }
  for (long a = 0; a < total; ++a) {
    s.prod[a][id_elem] = static_cast<int>(a);
    s.prod[id_elem][a] = static_cast<int>(a);
    if (a == s.zero) s.plus[a][id_elem] = s.plus[id_elem][a] = id_elem;
  }
  s.prod[id_elem][id_elem] = id_elem;
  s.plus[id_elem][s.zero] = id_elem;

  // Materialize the maps in the twisted basis.
  for (long e = 0; e < total; ++e) {
    std::vector<CMat> kraus;
    for (int b = 0; b < d; ++b) {
      if (fn[e][b] >= d) continue;
      CMat k = CMat::Zero(d, d);
      k(fn[e][b], b) = 1;
      kraus.push_back(u * k * u.adjoint());
    }
    inst.ops.push_back(make_operation(d, std::move(kraus)));
  }
  inst.ops.push_back(make_operation(d, {CMat::Identity(d, d)}));
  for (const auto& op : inst.ops) inst.trace_preserving.push_back(is_trace_preserving(op));

  for (long e = 0; e < total; ++e) {
    std::string lab = "{";
    for (int b = 0; b < d; ++b) {
      if (fn[e][b] >= d) continue;
      lab += std::to_string(b) + ">" + std::to_string(fn[e][b]) + " ";
    }
    s.labels.push_back(lab + "}");
  }
  s.labels.push_back("id");
  return inst;
}

double OpIdentityReport::max_deviation() const {
  return std::max({max_plus_assoc, max_plus_comm, max_distrib, max_cancel, max_zero, max_unit});
}

OpIdentityReport opalg_identity_trials(int d, int trials, std::uint64_t seed) {
  Rng rng(seed);
  OpIdentityReport rep;
  rep.trials = trials;
  const QuantumOperation zero = make_operation(d, {});
  const QuantumOperation unit = make_operation(d, {CMat::Identity(d, d)});
  for (int t = 0; t < trials; ++t) {
    const auto a = random_operation(d, 1 + rng.uniform_int(2), rng);
    const auto b = random_operation(d, 1 + rng.uniform_int(2), rng);
    const auto c = random_operation(d, 1 + rng.uniform_int(2), rng);
    // Scale down so sums stay trace-nonincreasing and every side is defined.
    auto third = [&](const QuantumOperation& op) {
      std::vector<CMat> k = op.kraus;
      for (auto& m : k) m *= 1.0 / std::sqrt(3.0);
      return make_operation(d, std::move(k));
    };
    const auto a3 = third(a), b3 = third(b), c3 = third(c);
    const auto ab = *add_operations(a3, b3);
    const auto bc = *add_operations(b3, c3);
    rep.max_plus_assoc = std::max(
        rep.max_plus_assoc, max_abs((*add_operations(ab, c3)).choi - (*add_operations(a3, bc)).choi));
    rep.max_plus_comm =
        std::max(rep.max_plus_comm, max_abs(ab.choi - (*add_operations(b3, a3)).choi));
    rep.max_distrib =
        std::max(rep.max_distrib, max_abs(compose(ab, c).choi -
                                          (*add_operations(compose(a3, c), compose(b3, c))).choi));
    rep.max_distrib =
        std::max(rep.max_distrib, max_abs(compose(c, ab).choi -
                                          (*add_operations(compose(c, a3), compose(c, b3))).choi));
    rep.max_cancel = std::max(rep.max_cancel, max_abs((ab.choi - b3.choi) - a3.choi));
    rep.max_zero = std::max(rep.max_zero, max_abs(compose(zero, a).choi));
    rep.max_zero = std::max(rep.max_zero, max_abs(compose(a, zero).choi));
    rep.max_unit = std::max(rep.max_unit, max_abs(compose(unit, a).choi - a.choi));
    rep.max_unit = std::max(rep.max_unit, max_abs(compose(a, unit).choi - a.choi));
    // Top set: adding anything nonzero to a trace-preserving map overshoots.
    const auto tp = random_operation(d, 2, rng, /*trace_preserving=*/true);
    CMat gram = CMat::Zero(d, d);
    for (const auto& k : tp.kraus) gram += k.adjoint() * k;
    for (const auto& k : a.kraus) gram += k.adjoint() * k;
    rep.min_top_excess = std::min(rep.min_top_excess, max_eigenvalue(gram) - 1.0);
  }
  return rep;
}

ReciprocityResult reciprocity_check(int d, int trials, std::uint64_t seed) {
  Rng rng(seed);
  ReciprocityResult res;
  res.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const CVec chi = random_pure(d, rng);
    const CVec phi = random_pure(d, rng);
    const CMat e_chi = chi * chi.adjoint();
    const CMat e_phi = phi * phi.adjoint();
    const double lhs = (e_chi * e_phi).trace().real();  // chi(e_phi)
    const double rhs = (e_phi * e_chi).trace().real();  // phi(e_chi)
    res.max_deviation = std::max(res.max_deviation, std::abs(lhs - rhs));
  }
  return res;
}

PsdSelfDualReport psd_self_dual_sample(int d, int pairs, int nonmembers, std::uint64_t seed,
                                       double tol) {
  Rng rng(seed);
  PsdSelfDualReport rep;
  rep.pairs = pairs;
  rep.nonmembers = nonmembers;
  rep.min_pair_inner = 1e300;
  rep.worst_witness_value = -1e300;
  for (int t = 0; t < pairs; ++t) {
    const CMat a = random_density(d, rng) * (0.5 + rng.uniform());
    const CMat b = random_density(d, rng) * (0.5 + rng.uniform());
    rep.min_pair_inner = std::min(rep.min_pair_inner, (a * b).trace().real());
  }
  for (int t = 0; t < nonmembers; ++t) {
    // Hermitian with a guaranteed negative eigenvalue.
    CMat g(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
    }
    CMat h = (g + g.adjoint()) / 2.0;
    const double lo = min_eigenvalue(h);
    if (lo > -0.05) h -= (lo + 0.1) * CMat::Identity(d, d);
    // Separating witness from the eigenvector construction.
    const auto es = Eigen::SelfAdjointEigenSolver<CMat>(h);
    const CVec v = es.eigenvectors().col(0);
    const CMat w = v * v.adjoint();  // inside the PSD cone
    rep.worst_witness_value = std::max(rep.worst_witness_value, (w * h).trace().real());
  }
  rep.pass = rep.min_pair_inner >= -tol && rep.worst_witness_value < -tol;
  return rep;
}

QuantumInstrument::QuantumInstrument(int d, std::vector<KrausInstrumentSpec> specs,
                                     std::vector<CMat> initial_states, long grid_denom)
    : d_(d), specs_(std::move(specs)), grid_(grid_denom), tokens_(std::move(initial_states)) {
  for (size_t mi = 0; mi < specs_.size(); ++mi) {
    auto& spec = specs_[mi];
    if (spec.kraus.empty()) throw std::invalid_argument("instrument needs Kraus operators");
    if (spec.outcomes.size() != spec.kraus.size()) {
      throw std::invalid_argument("instrument needs one outcome name per Kraus operator");
    }
    CMat s = CMat::Zero(d_, d_);
    for (const auto& k : spec.kraus) s += k.adjoint() * k;
    if ((s - CMat::Identity(d_, d_)).cwiseAbs().maxCoeff() > kMembershipTol) {
      throw std::invalid_argument("instrument '" + spec.id + "' is not trace-preserving as a whole");
    }
    for (size_t oi = 0; oi < spec.outcomes.size(); ++oi) {
      outcome_to_spec_.push_back(static_cast<int>(mi));
      outcome_to_local_.push_back(static_cast<int>(oi));
    }
  }
}

int QuantumInstrument::initial_token(int state_index) { return state_index; }

double QuantumInstrument::born_probability(int token, int measurement, int local) const {
  const auto& k = specs_[measurement].kraus[local];
  return (k * tokens_[token] * k.adjoint()).trace().real();
}

RatVec QuantumInstrument::conditional_probs(int token, int measurement) {
  const auto key = std::make_pair(token, measurement);
  const auto it = cond_cache_.find(key);
  if (it != cond_cache_.end()) return it->second;
  const int n = static_cast<int>(specs_[measurement].kraus.size());
  RatVec probs(n);
  Rat sum(0);
  for (int i = 0; i + 1 < n; ++i) {
    double p = born_probability(token, measurement, i);
    p = std::clamp(p, 0.0, 1.0);
    probs[i] = round_to_grid(p, grid_);
    sum += probs[i];
  }
  probs[n - 1] = 1 - sum;
  if (probs[n - 1] < 0) {
    // Rounding overshoot: take the deficit out of the largest entry.
    int big = 0;
    for (int i = 1; i + 1 < n; ++i) {
      if (probs[i] > probs[big]) big = i;
    }
    probs[big] += probs[n - 1];
    probs[n - 1] = 0;
  }
  cond_cache_[key] = probs;
  return probs;
}

int QuantumInstrument::successor(int token, int outcome_global) {
  const auto key = std::make_pair(token, outcome_global);
  const auto it = succ_cache_.find(key);
  if (it != succ_cache_.end()) return it->second;
  const int mi = outcome_to_spec_[outcome_global];
  const int local = outcome_to_local_[outcome_global];
  const auto& k = specs_[mi].kraus[local];
  CMat next = k * tokens_[token] * k.adjoint();
  const double p = next.trace().real();
  if (p < 1e-14) {
    next = CMat::Identity(d_, d_) / static_cast<double>(d_);
  } else {
    next /= p;
  }
  tokens_.push_back(std::move(next));
  const int id = static_cast<int>(tokens_.size()) - 1;
  succ_cache_[key] = id;
  return id;
}

QuantumTheoryBundle make_quantum_theory(int d, std::vector<KrausInstrumentSpec> specs,
                                        const std::vector<CMat>& initial_states, long grid_denom) {
  QuantumTheoryBundle bundle;
  bundle.instrument =
      std::make_unique<QuantumInstrument>(d, specs, initial_states, grid_denom);
  auto& t = bundle.theory;
  for (size_t mi = 0; mi < specs.size(); ++mi) {
    Measurement m;
    m.id = specs[mi].id;
    m.outcomes = specs[mi].outcomes;
    t.measurements.push_back(std::move(m));
  }
  for (size_t mi = 0; mi < t.measurements.size(); ++mi) {
    t.meas_outcomes.emplace_back();
    for (const auto& out : t.measurements[mi].outcomes) {
      if (t.outcome_lookup.count(out)) {
        throw std::invalid_argument("duplicate outcome id '" + out + "' across instruments");
      }
      const int g = static_cast<int>(t.outcome_ids.size());
      t.outcome_lookup[out] = g;
      t.outcome_ids.push_back(out);
      t.outcome_meas.push_back(static_cast<int>(mi));
      t.meas_outcomes[mi].push_back(g);
    }
  }
  for (size_t si = 0; si < initial_states.size(); ++si) {
    StateAssignment sa;
    sa.id = "rho" + std::to_string(si);
    sa.probs.assign(t.outcome_ids.size(), Rat(0));
    const int token = bundle.instrument->initial_token(static_cast<int>(si));
    for (size_t mi = 0; mi < specs.size(); ++mi) {
      const RatVec cond = bundle.instrument->conditional_probs(token, static_cast<int>(mi));
      for (size_t oi = 0; oi < cond.size(); ++oi) {
        sa.probs[t.meas_outcomes[mi][oi]] = cond[oi];
      }
    }
    t.states.push_back(std::move(sa));
  }
  return bundle;
}

KrausInstrumentSpec projective_instrument(const std::string& id, const CMat& basis,
                                          const std::string& outcome_prefix) {
  KrausInstrumentSpec spec;
  spec.id = id;
  for (int i = 0; i < basis.cols(); ++i) {
    const CVec v = basis.col(i);
    spec.kraus.push_back(v * v.adjoint());
    spec.outcomes.push_back(outcome_prefix + std::to_string(i));
  }
  return spec;
}

}  // namespace opalg
