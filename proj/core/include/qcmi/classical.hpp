#pragma once

// Classical CMI minimization: the alternating (Arimoto-Blahut-style)
// sequence P → P̃(x,y)·R(x,y,α)/Σ_α R(x,y,α) over distributions whose
// (x,y) marginal is pinned to a target.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcmi/solver_config.hpp"

namespace qcmi {

/// Non-negative P(x,y,α) summing to 1. Storage index is (x·ny + y)·nalpha + α.
class JointDistribution {
 public:
  JointDistribution() = default;
  /// Validates non-negativity and normalization (1e-12). Throws Error.
  JointDistribution(int nx, int ny, int nalpha, std::vector<double> p);

  static JointDistribution zeros(int nx, int ny, int nalpha);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nalpha() const noexcept { return na_; }

  double operator()(int x, int y, int a) const { return p_[index(x, y, a)]; }
  double& operator()(int x, int y, int a) { return p_[index(x, y, a)]; }
  const std::vector<double>& values() const noexcept { return p_; }

  double marginal_xy(int x, int y) const;
  double marginal_xa(int x, int a) const;
  double marginal_ya(int y, int a) const;
  double marginal_a(int a) const;

  bool same_shape(const JointDistribution& o) const noexcept {
    return nx_ == o.nx_ && ny_ == o.ny_ && na_ == o.na_;
  }

 private:
  std::size_t index(int x, int y, int a) const {
    return (static_cast<std::size_t>(x) * ny_ + y) * na_ + a;
  }
  int nx_ = 0, ny_ = 0, na_ = 0;
  std::vector<double> p_;
};

/// Target P̃(x,y): non-negative, sums to 1.
struct ClassicalTarget {
  int nx = 0;
  int ny = 0;
  std::vector<double> p;  // index x·ny + y

  double operator()(int x, int y) const { return p[static_cast<std::size_t>(x) * ny + y]; }
  /// Throws Error{off_simplex} / Error{dimension_mismatch}.
  void validate() const;
};

/// Δ(x,y) = −ln(Σ_α R(x,y,α) / P(x,y)), in nats. Zero where P(x,y) = 0.
struct ClassicalDelta {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double operator()(int x, int y) const { return values[static_cast<std::size_t>(x) * ny + y]; }
};

struct ClassicalReport {
  double entanglement_bits = 0.0;  // (1/2)·CMI of the final distribution
  double dual_bits = 0.0;          // ⟨Δ⟩ / (2 ln 2)
  JointDistribution distribution;
  ClassicalDelta delta;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> cmi_history;  // bits
  bool converged = false;
  std::uint64_t seed = 0;  // seed of the reported restart
};

/// H(x:y|α) in bits.
double classical_cmi(const JointDistribution& p);

/// R(x,y,α) = P(x,α)P(y,α)/P(α), with 0/0 := 0.
JointDistribution classical_r(const JointDistribution& p);

/// L(P,P') = Σ P ln(P/R[P']) in nats; +∞ if P > 0 where R[P'] = 0.
double classical_lagrangian(const JointDistribution& p, const JointDistribution& p2);

/// The four KL terms whose sum is L(P,P')/ln 2 (bits): D(P_α//P'_α),
/// Σ P(α) D(P(xy|α)//P(x|α)P(y|α)), Σ P(α) D(P(x|α)//P'(x|α)), and the y analogue.
struct LagrangianDecomposition {
  double weights = 0.0;
  double conditional_mi = 0.0;
  double x_marginals = 0.0;
  double y_marginals = 0.0;
  double total() const { return weights + conditional_mi + x_marginals + y_marginals; }
};
LagrangianDecomposition classical_lagrangian_decomposition(const JointDistribution& p, const JointDistribution& p2);

/// One step of the sequence. Cells where Σ_α R = 0 but P̃ > 0 are spread
/// uniformly over α.
JointDistribution classical_step(const JointDistribution& p, const ClassicalTarget& target);

ClassicalDelta classical_delta(const JointDistribution& p);

/// ⟨Δ⟩ = Σ P(x,y)Δ(x,y), nats.
double classical_delta_expectation(const JointDistribution& p, const ClassicalDelta& delta);

/// max over cells with P(x,y) > 0 of |P(x,y,α) − P(x,y)R(x,y,α)/Σ_α R(x,y,α)|.
double classical_stationarity_residual(const JointDistribution& p);

/// P⁰(x,y,α) = P̃(x,y)·u_{xy}(α), one Dirichlet(1,…,1) draw per cell.
/// (A single shared u_α would already be a fixed point of the sequence.)
JointDistribution classical_initial(const ClassicalTarget& target, int nalpha, std::uint64_t seed);

/// E_cla estimate: minimum over cfg.restarts seeded runs of the sequence.
ClassicalReport classical_solve(const ClassicalTarget& target, int nalpha, const SolverConfig& cfg);

/// Runs the sequence from a given starting point (single restart).
ClassicalReport classical_solve_from(JointDistribution start, const ClassicalTarget& target,
                                     const SolverConfig& cfg);

/// (x,y) marginal of p as a target.
ClassicalTarget marginal_target(const JointDistribution& p);

}  // namespace qcmi
