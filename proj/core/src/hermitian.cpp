#include "qcmi/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qcmi {

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << ": expected non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::dimension_mismatch, os.str());
  }
}

double kernel_threshold(const Spectrum& s, double eps) { return eps * std::max(s.max(), 0.0); }

// Columns of `basis` spanning the part of its range that lies inside supp(r).
// Q exp(Q†(ln_r + delta)Q) Q†.
HermitianMatrix exp_on_subspace(const Matrix& ln_r, const HermitianMatrix& delta, const Matrix& q) {
  if (q.cols() == 0) return HermitianMatrix::zero(delta.dim());
  const Matrix b = hermitian_part(q.adjoint() * (ln_r + delta.matrix()) * q);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  const RealVector e = es.eigenvalues().array().exp();
  const Matrix vq = q * es.eigenvectors();
  return HermitianMatrix::hermitize(vq * e.asDiagonal() * vq.adjoint());
}

Matrix sentinel_log(const Spectrum& s, const HermitianMatrix& delta, double eps) {
  return log_with_sentinel(s, kernel_log_sentinel(s, delta, eps), eps).matrix();
}

}  // namespace

HermitianMatrix HermitianMatrix::from(const Matrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  const double defect = hermitian_defect(m);
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "max |m_ij - conj(m_ji)| = " << defect << " exceeds " << tol;
    throw Error(ErrorKind::not_hermitian, os.str());
  }
  return HermitianMatrix(hermitian_part(m));
}

HermitianMatrix HermitianMatrix::hermitize(const Matrix& m) {
  require_square(m, "HermitianMatrix");
  return HermitianMatrix(hermitian_part(m));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) { return HermitianMatrix(Matrix::Zero(dim, dim)); }

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal());
}

HermitianMatrix HermitianMatrix::projector(const Vector& psi) {
  return HermitianMatrix(hermitian_part(psi * psi.adjoint()));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "HermitianMatrix +=");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "HermitianMatrix -=");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

Matrix Spectrum::reconstruct() const { return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint(); }

double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double norm_inf(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

Spectrum eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::not_hermitian, "eigensolver failed to converge");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

HermitianMatrix apply_function(const Spectrum& s, const std::function<double(double)>& f) {
  RealVector fv(s.values.size());
  for (Eigen::Index j = 0; j < fv.size(); ++j) fv(j) = f(s.values(j));
  return HermitianMatrix::hermitize(s.vectors * fv.cast<Complex>().asDiagonal() * s.vectors.adjoint());
}

HermitianMatrix apply_function(const HermitianMatrix& m, const std::function<double(double)>& f) {
  return apply_function(eig_hermitian(m), f);
}

Projectors support_kernel_projectors(const Spectrum& s, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::out_of_range, "kernel eps must be positive");
  const double lmax = s.max();
  const double thr = eps * std::max(lmax, 0.0);
  if (s.min() < -thr) {
    std::ostringstream os;
    os << "eigenvalue " << s.min() << " below -eps*lambda_max = " << -thr;
    throw Error(ErrorKind::not_psd, os.str());
  }
  const Eigen::Index n = s.values.size();
  Matrix ker = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (lmax <= 0.0 || s.values(j) <= thr) ker += s.vectors.col(j) * s.vectors.col(j).adjoint();
  }
  HermitianMatrix pk = HermitianMatrix::hermitize(ker);
  HermitianMatrix ps = HermitianMatrix::identity(n) - pk;
  return Projectors{std::move(ps), std::move(pk)};
}

Projectors support_kernel_projectors(const HermitianMatrix& m, double eps) {
  return support_kernel_projectors(eig_hermitian(m), eps);
}

Matrix support_basis(const Spectrum& s, double eps) {
  const double thr = kernel_threshold(s, eps);
  const Eigen::Index n = s.values.size();
  Eigen::Index first = 0;
  if (s.max() <= 0.0) return Matrix(n, 0);
  while (first < n && s.values(first) <= thr) ++first;
  return s.vectors.rightCols(n - first);
}

HermitianMatrix partial_trace_x(const HermitianMatrix& m, BipartiteDims dims) {
  if (m.dim() != dims.total()) throw Error(ErrorKind::dimension_mismatch, "partial_trace_x: dim != nx*ny");
  Matrix out = Matrix::Zero(dims.ny, dims.ny);
  const Matrix& a = m.matrix();
  for (int x = 0; x < dims.nx; ++x)
    out += a.block(x * dims.ny, x * dims.ny, dims.ny, dims.ny);
  return HermitianMatrix::hermitize(out);
}

HermitianMatrix partial_trace_y(const HermitianMatrix& m, BipartiteDims dims) {
  if (m.dim() != dims.total()) throw Error(ErrorKind::dimension_mismatch, "partial_trace_y: dim != nx*ny");
  Matrix out = Matrix::Zero(dims.nx, dims.nx);
  const Matrix& a = m.matrix();
  for (int x = 0; x < dims.nx; ++x)
    for (int xp = 0; xp < dims.nx; ++xp)
      out(x, xp) = a.block(x * dims.ny, xp * dims.ny, dims.ny, dims.ny).trace();
  return HermitianMatrix::hermitize(out);
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const Eigen::Index na = a.dim(), nb = b.dim();
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.matrix();
  return HermitianMatrix::hermitize(out);
}

double entropy_bits_unchecked(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    const double l = eigenvalues(j);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann_entropy(const HermitianMatrix& rho) {
  const Spectrum s = eig_hermitian(rho);
  const double tr = s.values.sum();
  if (std::abs(tr - 1.0) > 1e-8 || s.min() < -1e-8) {
    std::ostringstream os;
    os << "trace " << tr << ", min eigenvalue " << s.min();
    throw Error(ErrorKind::not_density_matrix, os.str());
  }
  return std::max(0.0, entropy_bits_unchecked(s.values));
}

double quantum_kl(const HermitianMatrix& rho, const HermitianMatrix& sigma, double eps) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::dimension_mismatch, "quantum_kl");
  const Spectrum sr = eig_hermitian(rho);
  const Spectrum ss = eig_hermitian(sigma);
  for (const Spectrum* s : {&sr, &ss}) {
    if (std::abs(s->values.sum() - 1.0) > 1e-8 || s->min() < -1e-8)
      throw Error(ErrorKind::not_density_matrix, "quantum_kl arguments must be density matrices");
  }
  const Projectors ps = support_kernel_projectors(ss, eps);
  const double leak = (ps.ker.matrix() * rho.matrix()).trace().real();
  if (leak > 1e-10) return std::numeric_limits<double>::infinity();

  const double thr_s = kernel_threshold(ss, eps);
  RealVector log_s(ss.values.size());
  for (Eigen::Index j = 0; j < log_s.size(); ++j)
    log_s(j) = ss.values(j) > thr_s ? std::log2(ss.values(j)) : 0.0;
  const Matrix ln_sigma = ss.vectors * log_s.asDiagonal() * ss.vectors.adjoint();
  const double cross = (rho.matrix() * ln_sigma).trace().real();
  return -entropy_bits_unchecked(sr.values) - cross;
}

HermitianMatrix inv_sqrt_on_support(const HermitianMatrix& rho, double eps) {
  const Spectrum s = eig_hermitian(rho);
  (void)support_kernel_projectors(s, eps);  // PSD check
  const double thr = kernel_threshold(s, eps);
  const bool all_kernel = s.max() <= 0.0;
  return apply_function(s, [&](double l) { return (all_kernel || l <= thr) ? 0.0 : 1.0 / std::sqrt(l); });
}

HermitianMatrix log_on_support(const HermitianMatrix& m, double eps) {
  const Spectrum s = eig_hermitian(m);
  const double thr = kernel_threshold(s, eps);
  const bool all_kernel = s.max() <= 0.0;
  return apply_function(s, [&](double l) { return (all_kernel || l <= thr) ? 0.0 : std::log(l); });
}

HermitianMatrix log_with_sentinel(const Spectrum& s, double sentinel, double eps) {
  const double thr = kernel_threshold(s, eps);
  const bool all_kernel = s.max() <= 0.0;
  return apply_function(s, [&](double l) { return (all_kernel || l <= thr) ? sentinel : std::log(l); });
}

double kernel_log_sentinel(const Spectrum& r, const HermitianMatrix& delta, double eps) {
  const double thr = kernel_threshold(r, eps);
  double min_log = 0.0;
  bool any = false;
  for (Eigen::Index j = 0; j < r.values.size(); ++j) {
    if (r.max() > 0.0 && r.values(j) > thr) {
      const double l = std::log(r.values(j));
      min_log = any ? std::min(min_log, l) : l;
      any = true;
    }
  }
  return min_log - 50.0 - 2.0 * norm_inf(delta.matrix());
}

HermitianMatrix exp_logsum(const HermitianMatrix& r, const HermitianMatrix& delta, const HermitianMatrix& pi1,
                           double eps) {
  if (r.dim() != delta.dim() || r.dim() != pi1.dim()) throw Error(ErrorKind::dimension_mismatch, "exp_logsum");
  const Spectrum s = eig_hermitian(r);
  if (s.max() <= 0.0) return HermitianMatrix::zero(r.dim());
  const Matrix id = Matrix::Identity(r.dim(), r.dim());
  const HermitianMatrix full = exp_on_subspace(sentinel_log(s, delta, eps), delta, id);
  return HermitianMatrix::hermitize(pi1.matrix() * full.matrix() * pi1.matrix());
}

HermitianMatrix exp_logsum_compressed(const HermitianMatrix& r, const HermitianMatrix& delta, const Matrix& support,
                                      double eps) {
  if (r.dim() != delta.dim() || support.rows() != r.dim())
    throw Error(ErrorKind::dimension_mismatch, "exp_logsum_compressed");
  const Spectrum s = eig_hermitian(r);
  if (s.max() <= 0.0) return HermitianMatrix::zero(r.dim());
  return exp_on_subspace(sentinel_log(s, delta, eps), delta, support);
}

HermitianMatrix exp_logsum_rational(const HermitianMatrix& r, const HermitianMatrix& delta,
                                    const HermitianMatrix& pi1, double eps) {
  if (r.dim() != delta.dim() || r.dim() != pi1.dim())
    throw Error(ErrorKind::dimension_mismatch, "exp_logsum_rational");
  const Spectrum s = eig_hermitian(r);
  if (s.max() <= 0.0) return HermitianMatrix::zero(r.dim());
  const double sentinel = kernel_log_sentinel(s, delta, eps);
  const Matrix a = -(log_with_sentinel(s, sentinel, eps).matrix() + delta.matrix());
  const Matrix e = expm_neg_pade(a);
  return HermitianMatrix::hermitize(pi1.matrix() * e * pi1.matrix());
}

}  // namespace qcmi
