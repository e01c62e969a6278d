#pragma once

#include <cstdint>
#include <vector>

namespace qcmi {

/// How the support projector π_1 of ρ enters exp(ln R + Δ).
enum class SupportMode {
  /// V exp(V†(ln R + Δ)V) V† with V spanning supp ρ. Default.
  compressed,
  /// π_1 exp(ln R + Δ) π_1, exactly as the sandwich is written.
  sandwich,
};

struct SolverConfig {
  double tol = 1e-7;
  int max_iter = 5000;
  double eps_kernel = 1e-12;
  double w_floor = 1e-13;
  int restarts = 1;
  std::uint64_t seed = 1;
  SupportMode support = SupportMode::compressed;
  /// Exponent η on I in the Δ update, η ∈ (0, 1]; 1 is undamped.
  double damping = 1.0;
  /// Consecutive iterations the stopping test must hold.
  int patience = 5;

  static SolverConfig quantum_defaults() { return SolverConfig{}; }
  static SolverConfig classical_defaults() {
    SolverConfig c;
    c.tol = 1e-9;
    c.max_iter = 10000;
    c.patience = 1;
    return c;
  }

  /// Throws Error{out_of_range} on tol ≤ 0, w_floor ∉ (0, 1e-6], restarts < 1, max_iter < 1.
  void validate() const;
};

/// Deterministic seed for restart `index` derived from `base` (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace qcmi
