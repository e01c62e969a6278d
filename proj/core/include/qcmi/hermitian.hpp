#pragma once

// Dense complex-Hermitian linear algebra used by every quantum iteration.
//
// All quantities are in nats internally. Entropies and relative entropies
// returned to callers are in bits.

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "qcmi/error.hpp"

namespace qcmi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDefaultKernelEps = 1e-12;

/// Square complex matrix with M = M† (to kHermitianTol, absolute).
///
/// Construction through `from` validates the symmetry and then stores the
/// exact Hermitian part (M + M†)/2, so downstream code never sees drift.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Validates `m` and stores its Hermitian part. Throws Error{not_hermitian}.
  static HermitianMatrix from(const Matrix& m, double tol = kHermitianTol);

  /// Stores (m + m†)/2 without validation. For results of matrix functions
  /// whose symmetry is guaranteed up to roundoff.
  static HermitianMatrix hermitize(const Matrix& m);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix diagonal(const RealVector& d);
  static HermitianMatrix projector(const Vector& psi);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Eigensystem with eigenvalues ascending and orthonormal eigenvector columns.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  double max() const { return values.size() ? values(values.size() - 1) : 0.0; }
  double min() const { return values.size() ? values(0) : 0.0; }
  Matrix reconstruct() const;
};

/// Local dimensions of H_x ⊗ H_y. Basis order is |xy⟩ lexicographic, x major.
struct BipartiteDims {
  int nx = 1;
  int ny = 1;

  int total() const noexcept { return nx * ny; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

struct Projectors {
  HermitianMatrix supp;
  HermitianMatrix ker;
};

Spectrum eig_hermitian(const HermitianMatrix& m);

/// Applies a real scalar function through the spectral decomposition.
HermitianMatrix apply_function(const Spectrum& s, const std::function<double(double)>& f);
HermitianMatrix apply_function(const HermitianMatrix& m, const std::function<double(double)>& f);

/// Eigenvalues at or below eps·λ_max span the kernel. λ_max ≤ 0 means the
/// whole space is kernel. Throws Error{not_psd} when some λ < −eps·λ_max.
Projectors support_kernel_projectors(const HermitianMatrix& m, double eps = kDefaultKernelEps);
Projectors support_kernel_projectors(const Spectrum& s, double eps = kDefaultKernelEps);

/// Orthonormal basis (columns) of the support of a PSD matrix.
Matrix support_basis(const Spectrum& s, double eps = kDefaultKernelEps);

/// tr_x: result lives on H_y.
HermitianMatrix partial_trace_x(const HermitianMatrix& m, BipartiteDims dims);
/// tr_y: result lives on H_x.
HermitianMatrix partial_trace_y(const HermitianMatrix& m, BipartiteDims dims);

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Von Neumann entropy in bits, 0 log 0 := 0. Requires a density matrix
/// (PSD, unit trace to 1e-8).
double von_neumann_entropy(const HermitianMatrix& rho);

/// −Σ λ log2 λ over the positive part of the spectrum; no validation.
double entropy_bits_unchecked(const RealVector& eigenvalues);

/// D(ρ // σ) in bits. +∞ when supp ρ ⊄ supp σ.
double quantum_kl(const HermitianMatrix& rho, const HermitianMatrix& sigma,
                  double eps = kDefaultKernelEps);

/// π_1 ρ^{−1/2} π_1, with eigenvalues ≤ eps·λ_max mapped to 0.
HermitianMatrix inv_sqrt_on_support(const HermitianMatrix& rho, double eps = kDefaultKernelEps);

/// Matrix logarithm on the support of a PSD matrix; kernel directions map to 0.
HermitianMatrix log_on_support(const HermitianMatrix& m, double eps = kDefaultKernelEps);

/// ln m with kernel eigenvalues replaced by `sentinel` (a large negative
/// number standing in for −∞).
HermitianMatrix log_with_sentinel(const Spectrum& s, double sentinel, double eps = kDefaultKernelEps);

/// Sentinel used for ln of kernel eigenvalues of r when forming ln r + delta:
/// min(ln λ_supp) − 50 − 2‖delta‖_∞.
double kernel_log_sentinel(const Spectrum& r, const HermitianMatrix& delta,
                           double eps = kDefaultKernelEps);

/// π_1 exp(ln r + delta) π_1 via the eigendecomposition path, with ln of
/// r's kernel replaced by kernel_log_sentinel so those directions contribute
/// ~e^{-50} relative weight. r = 0 returns 0.
HermitianMatrix exp_logsum(const HermitianMatrix& r, const HermitianMatrix& delta,
                           const HermitianMatrix& pi1, double eps = kDefaultKernelEps);

/// V exp(V†(ln r + delta)V) V† for orthonormal columns V (`support`): the
/// exponential of ln r + delta compressed onto range(V), same sentinel as
/// `exp_logsum`. Equals it whenever V V† commutes with ln r + delta.
HermitianMatrix exp_logsum_compressed(const HermitianMatrix& r, const HermitianMatrix& delta,
                                      const Matrix& support, double eps = kDefaultKernelEps);

/// Rational-approximation path for full-rank r: forms A = −(ln r + delta),
/// shifts it PSD and evaluates exp(−A) with a Padé approximant; then
/// sandwiches with pi1. Used to cross-check `exp_logsum`.
HermitianMatrix exp_logsum_rational(const HermitianMatrix& r, const HermitianMatrix& delta,
                                    const HermitianMatrix& pi1, double eps = kDefaultKernelEps);

/// exp(−a) for Hermitian a via Padé [13/13] with scaling and squaring.
Matrix expm_neg_pade(const Matrix& a);

/// exp(m) for a general square matrix via Padé [13/13] with scaling and squaring.
Matrix expm_pade(const Matrix& m);

/// Largest |m_ij| row sum.
double norm_inf(const Matrix& m);

double hermitian_defect(const Matrix& m);

}  // namespace qcmi
