#pragma once

#include <functional>

#include "opalg/quantum.hpp"

namespace opalg {

CMat kron(const CMat& a, const CMat& b);

// Kronecker product of two local effects; validated to lie in [0, I (x) I].
QuantumEffect product_effect(const QuantumEffect& e, const QuantumEffect& f);

CMat swap_operator(int d);
CMat max_entangled_projector(int d);
CMat partial_transpose(const CMat& x, int da, int db);  // transpose on the B factor

// A composite-state functional: effect matrix -> probability. Valid states
// are X-functionals A -> tr(AX); corrupted (non-additive) assignments are
// representable too, which is what the no-signalling check must catch.
using StateFunctional = std::function<double(const CMat&)>;
StateFunctional functional_of(const CMat& x);

// Marginal on A of a joint measurement {E_i (x) F_j}.
std::vector<double> marginal_on_a(const StateFunctional& state, const std::vector<CMat>& a_povm,
                                  const std::vector<CMat>& b_povm);

struct InfluenceReport {
  int trials = 0;
  double max_deviation = 0.0;
  bool pass = false;
};
// Random composite states (densities and partial transposes of densities)
// against random local measurement swaps, in both directions.
InfluenceReport influence_check(int da, int db, int trials, std::uint64_t seed,
                                double tol = kIdentityTol);

// Deviation of one state functional from no-signalling under given POVMs.
double signalling_deviation(const StateFunctional& state, const std::vector<CMat>& a_povm,
                            const std::vector<CMat>& b_povm1, const std::vector<CMat>& b_povm2);

struct OverlapResult {
  double projector_bound = 0.0;  // max over product projectors of <chi psi|X|psi chi>
  double interval_bound = 0.0;   // the full-interval variant; A = I always qualifies
  CVec chi, psi;                 // optimizer
  bool converged = false;
};
// Alternating eigenvector ascent over the two factors from multiple random
// starts; the paper's normal form makes the projector bound the quantity
// testability needs.
OverlapResult max_separable_overlap(const CMat& x, int da, int db, int restarts = 32,
                                    int max_iters = 200, std::uint64_t seed = 1,
                                    double tol = 1e-10);

struct TestabilityEntry {
  bool pure = false;
  bool testable = false;
  double overlap = 0.0;      // projector-form bound on the state itself
  double worst_other = 0.0;  // value of the witness projector on other states
  std::string note;
};
struct TestabilityReport {
  std::vector<TestabilityEntry> entries;
  bool axiom1_holds = false;
  std::vector<int> untestable_pure;
};
// Runs the testability definition against every listed state: a product
// projector passing the state and no other listed one. A singleton list is
// trivially testable via A = I.
TestabilityReport testability_scan(int da, int db, const std::vector<CMat>& states,
                                   int restarts = 32, std::uint64_t seed = 1, double tol = 1e-6);

struct SeparableConeSample {
  std::vector<CMat> products;  // product effects P (x) Q
  int gram_rank = 0;           // rank of the sampled Gram matrix
};
SeparableConeSample separable_cone_sample(int d, int count, std::uint64_t seed);

// tr(W G) >= -tol for every sampled generator.
bool in_dual_of_sample(const CMat& w, const SeparableConeSample& sample, double tol = kMembershipTol);

}  // namespace opalg
