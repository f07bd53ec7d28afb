#include "opalg/composite.hpp"

#include <algorithm>
#include <stdexcept>

namespace opalg {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

QuantumEffect product_effect(const QuantumEffect& e, const QuantumEffect& f) {
  if (!is_effect(e.op) || !is_effect(f.op)) {
    throw std::invalid_argument("product_effect: inputs must be effects");
  }
  QuantumEffect out{kron(e.op, f.op)};
  if (!is_effect(out.op)) throw std::logic_error("product of effects left the interval");
  return out;
}

CMat swap_operator(int d) {
  CMat s = CMat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1;
  }
  return s;
}

CMat max_entangled_projector(int d) {
  CVec omega = CVec::Zero(d * d);
  for (int i = 0; i < d; ++i) omega(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return omega * omega.adjoint();
}

CMat partial_transpose(const CMat& x, int da, int db) {
  CMat out(da * db, da * db);
  for (int a1 = 0; a1 < da; ++a1) {
    for (int a2 = 0; a2 < da; ++a2) {
      for (int b1 = 0; b1 < db; ++b1) {
        for (int b2 = 0; b2 < db; ++b2) {
          out(a1 * db + b1, a2 * db + b2) = x(a1 * db + b2, a2 * db + b1);
        }
      }
    }
  }
  return out;
}

StateFunctional functional_of(const CMat& x) {
  return [x](const CMat& effect) { return (x * effect).trace().real(); };
}

std::vector<double> marginal_on_a(const StateFunctional& state, const std::vector<CMat>& a_povm,
                                  const std::vector<CMat>& b_povm) {
  std::vector<double> out;
  for (const auto& e : a_povm) {
    double p = 0;
    for (const auto& f : b_povm) p += state(kron(e, f));
    out.push_back(p);
  }
  return out;
}

double signalling_deviation(const StateFunctional& state, const std::vector<CMat>& a_povm,
                            const std::vector<CMat>& b_povm1, const std::vector<CMat>& b_povm2) {
  const auto m1 = marginal_on_a(state, a_povm, b_povm1);
  const auto m2 = marginal_on_a(state, a_povm, b_povm2);
  double dev = 0;
  for (size_t i = 0; i < m1.size(); ++i) dev = std::max(dev, std::abs(m1[i] - m2[i]));
  return dev;
}

InfluenceReport influence_check(int da, int db, int trials, std::uint64_t seed, double tol) {
  Rng rng(seed);
  InfluenceReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    CMat x = random_density(da * db, rng);
    if (t % 3 == 2) x = partial_transpose(x, da, db);  // dual-of-separable member
    const auto state = functional_of(x);
    const auto a_povm = random_povm(da, 2 + rng.uniform_int(2), rng);
    const auto b_povm1 = random_povm(db, 2 + rng.uniform_int(2), rng);
    const auto b_povm2 = random_povm(db, 2 + rng.uniform_int(2), rng);
    rep.max_deviation =
        std::max(rep.max_deviation, signalling_deviation(state, a_povm, b_povm1, b_povm2));
    // Other direction: B marginals against a swap of the A measurement.
    const auto swap_state = [&x, da, db](const CMat& eff) {
      return (x * eff).trace().real();
    };
    const auto a_povm2 = random_povm(da, 2 + rng.uniform_int(2), rng);
    const auto b_povm = random_povm(db, 2 + rng.uniform_int(2), rng);
    std::vector<double> mb1, mb2;
    for (const auto& f : b_povm) {
      double p1 = 0, p2 = 0;
      for (const auto& e : a_povm) p1 += swap_state(kron(e, f));
      for (const auto& e : a_povm2) p2 += swap_state(kron(e, f));
      mb1.push_back(p1);
      mb2.push_back(p2);
    }
    for (size_t i = 0; i < mb1.size(); ++i) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(mb1[i] - mb2[i]));
    }
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

OverlapResult max_separable_overlap(const CMat& x, int da, int db, int restarts, int max_iters,
                                    std::uint64_t seed, double tol) {
  if (x.rows() != da * db) throw std::invalid_argument("state dimension mismatch");
  Rng rng(seed);
  OverlapResult best;
  best.projector_bound = -1e300;

  auto a_matrix = [&](const CVec& psi) {  // <chi (x) psi| X |chi' (x) psi>
    CMat m = CMat::Zero(da, da);
    for (int a1 = 0; a1 < da; ++a1) {
      for (int a2 = 0; a2 < da; ++a2) {
        std::complex<double> v = 0;
        for (int b1 = 0; b1 < db; ++b1) {
          for (int b2 = 0; b2 < db; ++b2) {
            v += std::conj(psi(b1)) * x(a1 * db + b1, a2 * db + b2) * psi(b2);
          }
        }
        m(a1, a2) = v;
      }
    }
    return m;
  };
  auto b_matrix = [&](const CVec& chi) {
    CMat m = CMat::Zero(db, db);
    for (int b1 = 0; b1 < db; ++b1) {
      for (int b2 = 0; b2 < db; ++b2) {
        std::complex<double> v = 0;
        for (int a1 = 0; a1 < da; ++a1) {
          for (int a2 = 0; a2 < da; ++a2) {
            v += std::conj(chi(a1)) * x(a1 * db + b1, a2 * db + b2) * chi(a2);
          }
        }
        m(b1, b2) = v;
      }
    }
    return m;
  };
  auto top_vec = [](const CMat& m) {
    const Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0);
    return std::make_pair(es.eigenvalues().maxCoeff(),
                          CVec(es.eigenvectors().col(m.rows() - 1)));
  };

  for (int r = 0; r < restarts; ++r) {
    CVec psi = random_pure(db, rng);
    CVec chi = random_pure(da, rng);
    double val = -1e300;
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
      auto [va, new_chi] = top_vec(a_matrix(psi));
      chi = new_chi;
      auto [vb, new_psi] = top_vec(b_matrix(chi));
      psi = new_psi;
      if (std::abs(vb - val) <= tol) {
        val = vb;
        converged = true;
        break;
      }
      val = vb;
    }
    if (val > best.projector_bound) {
      best.projector_bound = val;
      best.chi = chi;
      best.psi = psi;
      best.converged = converged;
    }
  }
  best.interval_bound = std::max(best.projector_bound, x.trace().real());
  return best;
}

TestabilityReport testability_scan(int da, int db, const std::vector<CMat>& states, int restarts,
                                   std::uint64_t seed, double tol) {
  TestabilityReport rep;
  rep.axiom1_holds = true;
  if (states.size() == 1) {
    TestabilityEntry e;
    e.pure = (states[0] * states[0]).trace().real() >= 1.0 - kMembershipTol;
    e.testable = true;
    e.overlap = 1.0;
    e.note = "singleton state list: A = I is a test (uniqueness is vacuous)";
    rep.entries.push_back(e);
    return rep;
  }
  for (size_t i = 0; i < states.size(); ++i) {
    TestabilityEntry e;
    e.pure = (states[i] * states[i]).trace().real() >= 1.0 - kMembershipTol;
    const auto overlap =
        max_separable_overlap(states[i], da, db, restarts, 200, seed + static_cast<int>(i));
    e.overlap = overlap.projector_bound;
    if (e.overlap >= 1.0 - tol) {
      const CMat witness = kron(CMat(overlap.chi * overlap.chi.adjoint()),
                                CMat(overlap.psi * overlap.psi.adjoint()));
      e.worst_other = 0.0;
      for (size_t j = 0; j < states.size(); ++j) {
        if (j == i) continue;
        e.worst_other = std::max(e.worst_other, (witness * states[j]).trace().real());
      }
      e.testable = e.worst_other < 1.0 - tol;
      if (!e.testable) e.note = "every passing product projector also passes another listed state";
    } else {
      e.testable = false;
      e.note = "no product projector passes the state (bound " + std::to_string(e.overlap) + ")";
    }
    if (e.pure && !e.testable) {
      rep.axiom1_holds = false;
      rep.untestable_pure.push_back(static_cast<int>(i));
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

SeparableConeSample separable_cone_sample(int d, int count, std::uint64_t seed) {
  Rng rng(seed);
  SeparableConeSample sample;
  for (int t = 0; t < count; ++t) {
    const CVec chi = random_pure(d, rng);
    const CVec psi = random_pure(d, rng);
    sample.products.push_back(
        kron(CMat(chi * chi.adjoint()), CMat(psi * psi.adjoint())));
  }
  // Gram rank over the real Hermitian inner product.
  Eigen::MatrixXd gram(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      gram(i, j) = (sample.products[i] * sample.products[j]).trace().real();
    }
  }
  sample.gram_rank = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(gram).rank();
  return sample;
}

bool in_dual_of_sample(const CMat& w, const SeparableConeSample& sample, double tol) {
  for (const auto& g : sample.products) {
    if ((w * g).trace().real() < -tol) return false;
  }
  return true;
}

}  // namespace opalg
