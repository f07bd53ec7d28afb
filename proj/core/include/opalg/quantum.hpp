#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>

#include "opalg/rng.hpp"
#include "opalg/sequential.hpp"
#include "opalg/structure.hpp"

namespace opalg {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Tolerances for the floating-point side of the workbench: membership in
// operator intervals/cones at 1e-9, algebraic identities at 1e-12.
inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kIdentityTol = 1e-12;

struct QuantumEffect {
  CMat op;  // Hermitian, 0 <= op <= I within kMembershipTol
};

struct DensityState {
  CMat rho;  // PSD, unit trace
};

struct QuantumOperation {
  int dim = 0;
  std::vector<CMat> kraus;
  CMat choi;  // cached; PSD iff completely positive
};

bool is_hermitian(const CMat& m, double tol = kMembershipTol);
double min_eigenvalue(const CMat& hermitian);
double max_eigenvalue(const CMat& hermitian);
bool is_effect(const CMat& m, double tol = kMembershipTol);
bool is_density(const CMat& m, double tol = kMembershipTol);

// Choi block (i,j) = Phi(|i><j|).
CMat kraus_to_choi(const std::vector<CMat>& kraus, int dim);
std::vector<CMat> choi_to_kraus(const CMat& choi, int dim, double tol = 1e-10);

QuantumOperation make_operation(int dim, std::vector<CMat> kraus);
QuantumOperation operation_from_choi(int dim, const CMat& choi, double tol = 1e-10);

CMat apply_operation(const QuantumOperation& op, const CMat& rho);
QuantumOperation compose(const QuantumOperation& a, const QuantumOperation& b);  // a after b
// Defined when the sum stays trace-nonincreasing.
std::optional<QuantumOperation> add_operations(const QuantumOperation& a, const QuantumOperation& b,
                                               double tol = kMembershipTol);
bool is_completely_positive(const QuantumOperation& op, double tol = kMembershipTol);
bool is_trace_nonincreasing(const QuantumOperation& op, double tol = kMembershipTol);
bool is_trace_preserving(const QuantumOperation& op, double tol = kMembershipTol);

// Difference of operations by the Choi criterion (representation
// independent); the literal Kraus-submultiset reading is a consistency
// check on top of it, not the decision rule.
std::optional<QuantumOperation> op_ominus(const QuantumOperation& a, const QuantumOperation& b,
                                          double tol = kMembershipTol);
bool kraus_submultiset(const std::vector<CMat>& small, const std::vector<CMat>& big,
                       double tol = 1e-8);

double trace_distance(const CMat& a, const CMat& b);

// --- random objects --------------------------------------------------------

CMat random_unitary(int d, Rng& rng);
CVec random_pure(int d, Rng& rng);
CMat random_density(int d, Rng& rng);
CMat random_effect(int d, Rng& rng);
QuantumOperation random_operation(int d, int kraus_count, Rng& rng, bool trace_preserving = false);
std::vector<CMat> random_povm(int d, int outcomes, Rng& rng);

// --- fuzzy sets --------------------------------------------------------

// Classical effect algebra of grid-valued fuzzy sets on d points, with its
// diagonal embedding into quantum effects.
struct FuzzyAlgebra {
  PartialStructure structure;
  std::vector<RatVec> values;           // element id -> function values
  std::vector<QuantumEffect> embedding; // diagonal matrices
  bool embedding_additive = false;      // embedding preserves + on the grid
};
FuzzyAlgebra fuzzy_set_algebra(int d, int grid_denom = 4);

// --- sampled effect algebra fragment ----------------------------------

struct EffectSample {
  PartialStructure structure;
  std::vector<CMat> effects;
};
// Random effects with supplements, closed under + (operator sum <= I) to a
// fixed pairwise depth; matching tolerance 1e-9. Throws past `cap`.
EffectSample quantum_effect_sample(int d, int count, std::uint64_t seed, int closure_rounds = 1,
                                   size_t cap = 400);

// --- Gleason-type inversion --------------------------------------------

std::vector<CMat> informationally_complete_effects(int d);

struct GleasonResult {
  enum class Status { Recovered, NonAdditive, NotPositive, NotNormalized };
  Status status = Status::NonAdditive;
  CMat rho;
  double residual = 0.0;   // linear-system inconsistency
  double min_eig = 0.0;
  double trace = 0.0;
  std::string certificate;
  bool ok() const { return status == Status::Recovered; }
};
// Solves tr(rho E_j) = values_j over Hermitian rho, then verifies the
// density-matrix constraints. Throws on a non-spanning effect set.
GleasonResult gleason_check(int d, const std::vector<CMat>& effects,
                            const std::vector<double>& values);

// --- operation algebra ---------------------------------------------------

// Finite carrier of CP maps closed under + (where trace-nonincreasing) and
// composition: the maps X -> sum_k |a_k><b_k| X |b_k><a_k| over partial
// functions b -> a in a seeded random basis, plus the identity map.
struct OperationAlgebraInstance {
  PartialStructure structure;
  std::vector<QuantumOperation> ops;
  std::vector<bool> trace_preserving;  // per element, from the matrices
};
OperationAlgebraInstance operation_algebra_instance(int d, std::uint64_t seed, size_t cap = 700);

// Random-instance deviations for the operation-algebra laws on general CP
// maps (addition assoc/comm, cancellation, distributivity, zero/unit,
// top-set behavior of trace-preserving maps).
struct OpIdentityReport {
  int trials = 0;
  double max_plus_assoc = 0, max_plus_comm = 0, max_distrib = 0, max_cancel = 0;
  double max_zero = 0, max_unit = 0;
  double min_top_excess = 1e300;  // adding a nonzero op to a TP op overshoots by this much
  double max_deviation() const;
};
OpIdentityReport opalg_identity_trials(int d, int trials, std::uint64_t seed);

struct ReciprocityResult {
  int trials = 0;
  double max_deviation = 0.0;
};
// |chi(e_phi) - phi(e_chi)| over random pure pairs.
ReciprocityResult reciprocity_check(int d, int trials, std::uint64_t seed);

// --- sampled PSD self-duality -------------------------------------------

struct PsdSelfDualReport {
  int pairs = 0;
  int nonmembers = 0;
  double min_pair_inner = 0.0;       // min tr(AB) over sampled PSD pairs
  double worst_witness_value = 0.0;  // max over non-members of tr(W X); negative = separated
  bool pass = false;
};
PsdSelfDualReport psd_self_dual_sample(int d, int pairs, int nonmembers, std::uint64_t seed,
                                       double tol = kMembershipTol);

// --- instruments -----------------------------------------------------------

struct KrausInstrumentSpec {
  std::string id;                     // measurement name
  std::vector<std::string> outcomes;  // outcome names, one per Kraus operator
  std::vector<CMat> kraus;
};

// Instrument over cached density-matrix tokens. Conditional probabilities
// are Born values rounded onto a dyadic grid with the last outcome taking
// the residual, so each conditional distribution sums to 1 exactly and the
// derived sequential theory is exactly prefix-consistent.
class QuantumInstrument : public Instrument {
 public:
  QuantumInstrument(int d, std::vector<KrausInstrumentSpec> specs, std::vector<CMat> initial_states,
                    long grid_denom = 1L << 20);
  int initial_token(int state_index) override;
  RatVec conditional_probs(int token, int measurement) override;
  int successor(int token, int outcome_global) override;

  const std::vector<KrausInstrumentSpec>& specs() const { return specs_; }
  double born_probability(int token, int measurement, int local_outcome) const;

 private:
  int d_;
  std::vector<KrausInstrumentSpec> specs_;
  long grid_;
  std::vector<CMat> tokens_;
  std::vector<int> outcome_to_spec_;
  std::vector<int> outcome_to_local_;
  std::map<std::pair<int, int>, RatVec> cond_cache_;
  std::map<std::pair<int, int>, int> succ_cache_;
};

struct QuantumTheoryBundle {
  PhenomenologicalTheory theory;
  std::unique_ptr<QuantumInstrument> instrument;
};

// Phenomenological theory whose measurements are the given instruments and
// whose states are the Born probabilities of the given density matrices
// (rounded onto the instrument's grid).
QuantumTheoryBundle make_quantum_theory(int d, std::vector<KrausInstrumentSpec> specs,
                                        const std::vector<CMat>& initial_states,
                                        long grid_denom = 1L << 20);

// Projective measurement instrument in a given orthonormal basis.
KrausInstrumentSpec projective_instrument(const std::string& id, const CMat& basis,
                                          const std::string& outcome_prefix);

}  // namespace opalg
