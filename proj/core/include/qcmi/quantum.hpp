#pragma once

// Quantum CMI minimization over decompositions ρ = Σ_α K^α.
//
// Each step updates the ensemble K and the entanglement operator Δ:
//
//   K^α   ∝ exp[ln R^α(K) + Δ]           (normalized, kept on supp ρ)
//   K̃^α   ∝ exp[ln R^α(K_new) + Δ]
//   I      = ρ^{-1/2} (Σ K̃) ρ^{-1/2} + π_0
//   Δ_new  = −ln(e^{−Δ/2} I e^{−Δ/2})
//
// For the pure kind each exponential is replaced by its top eigenpair.
// Δ is carried in nats; entanglement is reported in bits.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qcmi/classical.hpp"
#include "qcmi/hermitian.hpp"
#include "qcmi/solver_config.hpp"

namespace qcmi {

enum class EnsembleKind { mixed, pure };

struct EnsembleCheck {
  double min_eigenvalue = 0.0;   // over all members
  double trace_defect = 0.0;     // |Σ tr K − 1|
  double rank_defect = 0.0;      // max λ_2/λ_1 (pure kind only)
  double hermitian_defect = 0.0;
  bool ok = true;
};

/// K^α on H_xy with Σ_α tr K^α = 1.
struct Ensemble {
  BipartiteDims dims;
  std::vector<HermitianMatrix> members;
  EnsembleKind kind = EnsembleKind::mixed;

  int size() const noexcept { return static_cast<int>(members.size()); }
  std::vector<double> weights() const;
  HermitianMatrix sum() const;
  /// Checks PSD (−psd_tol), trace sum (trace_tol), rank one for pure (rank_tol).
  EnsembleCheck check(double psd_tol = 1e-10, double trace_tol = 1e-10, double rank_tol = 1e-8) const;
};

struct EntanglementOperator {
  HermitianMatrix delta;
};

/// Spectral data of ρ shared by every step.
struct RhoGeometry {
  HermitianMatrix rho;
  BipartiteDims dims;
  Spectrum spectrum;
  HermitianMatrix pi_supp;
  HermitianMatrix pi_ker;
  Matrix support;  // orthonormal basis of supp ρ
  HermitianMatrix inv_sqrt;
  HermitianMatrix sqrt;
  double eps = kDefaultKernelEps;
};

/// Validates ρ as a density matrix on dims (PSD, trace 1 to 1e-8).
RhoGeometry make_geometry(const HermitianMatrix& rho, BipartiteDims dims, double eps = kDefaultKernelEps);

struct StepResult {
  Ensemble ensemble;
  EntanglementOperator delta;
  double normalizer = 1.0;  // Σ tr of the unnormalized K numerators
  int reseeded = 0;         // branches re-seeded under the weight floor
};

struct SolverReport {
  double entanglement_bits = 0.0;  // (1/2)·CMI of the final ensemble
  double dual_bits = 0.0;          // tr(ρΔ) / (2 ln 2)
  Ensemble ensemble;
  EntanglementOperator delta;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> cmi_history;  // bits
  bool converged = false;
  double final_residual = 0.0;
  std::uint64_t seed = 0;  // seed of the reported restart
  double damping = 1.0;    // η actually used
  bool diverged = false;   // every damping level diverged; fields hold the last finite iterate
};

/// Σ_α w_α [S(ρ^α_x) + S(ρ^α_y) − S(ρ^α)], bits.
double quantum_cmi(const Ensemble& e);

/// R^α = K^α_x ⊗ K^α_y / w_α (zero when w_α = 0).
std::vector<HermitianMatrix> quantum_r(const Ensemble& e);
HermitianMatrix quantum_r(const HermitianMatrix& k, BipartiteDims dims);

/// L(K, K') = Σ_α tr K^α (ln K^α − ln R'^α), nats; +∞ on support violation.
double quantum_lagrangian(const Ensemble& e, const Ensemble& e2);

/// The four KL terms (bits) summing to L(K,K')/ln 2.
struct QuantumLagrangianDecomposition {
  double weights = 0.0;
  double conditional_mi = 0.0;
  double x_marginals = 0.0;
  double y_marginals = 0.0;
  double total() const { return weights + conditional_mi + x_marginals + y_marginals; }
};
QuantumLagrangianDecomposition quantum_lagrangian_decomposition(const Ensemble& e, const Ensemble& e2);

StepResult mixed_step(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo,
                      const SolverConfig& cfg, std::mt19937_64& rng);
StepResult mixed_step(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho,
                      const SolverConfig& cfg);

StepResult pure_step(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo,
                     const SolverConfig& cfg, std::mt19937_64& rng);
StepResult pure_step(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho,
                     const SolverConfig& cfg);

/// mixed: max_α ‖π_s(ln K^α − ln R^α − Δ)π_s‖_F over supp K^α, plus ‖Σ K − ρ‖_F.
/// pure:  max_α ‖π_1(ln R^α + Δ)|ψ_α⟩ − ln w_α |ψ_α⟩‖_2, plus ‖Σ K − ρ‖_F.
double stationarity_residual(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo);
double stationarity_residual(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho);

/// tr(ρΔ) / (2 ln 2).
double entanglement_from_delta(const HermitianMatrix& rho, const EntanglementOperator& delta);

/// Called after every accepted iteration with (iteration, K, Δ).
using IterationObserver = std::function<void(int, const Ensemble&, const EntanglementOperator&)>;

/// Runs the iteration from a given ensemble and Δ⁰ (single restart). If the
/// iteration diverges (non-finite values or |Δ_ij| ≥ 700) it is rerun from
/// the same start with the damping η halved, up to four times.
SolverReport solve_from(Ensemble start, EntanglementOperator delta0, const RhoGeometry& geo,
                        const SolverConfig& cfg, const IterationObserver& observe = {});

/// Default nalpha: (nx·ny)².
int default_nalpha(BipartiteDims dims) noexcept;

/// E_mixed / E_pure estimates; minimum over cfg.restarts HJW-random starts.
/// nalpha ≤ 0 selects default_nalpha(dims).
SolverReport mixed_solve(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, const SolverConfig& cfg);
SolverReport pure_solve(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, const SolverConfig& cfg);

/// Top eigenpair (w, ψ) of a rank-one member.
struct WeightedState {
  double weight = 0.0;
  Vector psi;
};
WeightedState top_eigenpair(const HermitianMatrix& m);

/// K^α = diag(P(·,·,α)) on the |xy⟩ basis.
Ensemble diagonal_ensemble(const JointDistribution& p);
/// Δ = diag(Δ(x,y)).
EntanglementOperator diagonal_delta(const ClassicalDelta& d);

}  // namespace qcmi
