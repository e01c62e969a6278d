#pragma once

// Named states and random initial ensembles.
//
// Basis order is |xy⟩ lexicographic with x major: for two qubits
// 00, 01, 10, 11. Bell order is φ+, φ−, ψ+, ψ−.

#include <array>
#include <cstdint>
#include <vector>

#include "qcmi/hermitian.hpp"
#include "qcmi/quantum.hpp"

namespace qcmi {

/// Unit vector in H_xy.
class StateVector {
 public:
  StateVector() = default;
  /// Throws Error{out_of_range} unless ‖amplitudes‖ = 1 to 1e-12.
  explicit StateVector(Vector amplitudes);
  /// Normalizes a non-zero vector.
  static StateVector normalized(const Vector& v);

  Eigen::Index dim() const noexcept { return amps_.size(); }
  const Vector& amplitudes() const noexcept { return amps_; }
  HermitianMatrix projector() const { return HermitianMatrix::projector(amps_); }

 private:
  Vector amps_;
};

/// nalpha × d matrix with orthonormal columns: Σ_α T^α_j conj(T^α_j') = δ_jj'.
struct RightUnitary {
  Matrix t;

  int nalpha() const noexcept { return static_cast<int>(t.rows()); }
  int d() const noexcept { return static_cast<int>(t.cols()); }
  /// max |T†T − 1|.
  double defect() const;
};

enum class Bell { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

/// |φ+⟩, |φ−⟩, |ψ+⟩, |ψ−⟩ in that order.
std::array<StateVector, 4> bell_basis();

/// Σ_μ m_μ |B(μ)⟩⟨B(μ)|. Throws Error{off_simplex} if m is off the simplex by > 1e-10.
HermitianMatrix bell_mixture(const std::array<double, 4>& m);

/// Bell-mixture weights of W(F): (F, (1−F)/3, (1−F)/3, (1−F)/3).
std::array<double, 4> werner_weights(double f);

/// W(F) for F ∈ [0,1].
HermitianMatrix werner(double f);

/// σ(α) = (2/7)|ψ+⟩⟨ψ+| + (α/7)σ+ + ((5−α)/7)σ− on 3⊗3, α ∈ [2,5].
HermitianMatrix horodecki(double alpha);

/// Orthonormalized columns of a seeded complex Gaussian nalpha × d matrix.
RightUnitary random_right_unitary(int nalpha, int d, std::uint64_t seed);

/// Ensemble reconstructing rho built from its support eigenpairs.
/// Pure kind: K^α = |n_α⟩⟨n_α| with |n_α⟩ = Σ_j T^α_j √λ_j |φ_j⟩.
/// Mixed kind: λ·K_1 + (1−λ)·K_2 for two independent pure ensembles and a
/// seeded λ ∈ (0,1). Throws Error{rank_too_high} when nalpha < rank(rho).
Ensemble hjw_initial_ensemble(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, EnsembleKind kind,
                              std::uint64_t seed, double eps = kDefaultKernelEps);

/// The same construction from an explicit right-unitary (pure kind).
Ensemble hjw_ensemble(const HermitianMatrix& rho, BipartiteDims dims, const RightUnitary& t,
                      double eps = kDefaultKernelEps);

/// Haar-ish random pure state from a seeded complex Gaussian.
StateVector random_state(int dim, std::uint64_t seed);

/// Seeded random unitary (QR of a complex Gaussian with phase fix).
Matrix random_unitary(int dim, std::uint64_t seed);

/// Seeded random density matrix G G† / tr with G complex Gaussian dim × rank.
HermitianMatrix random_density_matrix(int dim, int rank, std::uint64_t seed);

}  // namespace qcmi
