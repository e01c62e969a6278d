#include "qcmi/states.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qcmi/error.hpp"

namespace qcmi {

namespace {

Matrix complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  return g;
}

// Orthonormal columns of g via Householder QR, phases fixed so R has a
// positive diagonal.
Matrix orthonormal_columns(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 1 || std::abs(amps_.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "state vector norm " << amps_.norm() << " differs from 1";
    throw Error(ErrorKind::out_of_range, os.str());
  }
}

StateVector StateVector::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::out_of_range, "cannot normalize a zero vector");
  return StateVector(v / n);
}

double RightUnitary::defect() const {
  const Matrix gram = t.adjoint() * t;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

std::array<StateVector, 4> bell_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector phi_p(4), phi_m(4), psi_p(4), psi_m(4);
  phi_p << s, 0, 0, s;
  phi_m << s, 0, 0, -s;
  psi_p << 0, s, s, 0;
  psi_m << 0, s, -s, 0;
  return {StateVector::normalized(phi_p), StateVector::normalized(phi_m), StateVector::normalized(psi_p),
          StateVector::normalized(psi_m)};
}

HermitianMatrix bell_mixture(const std::array<double, 4>& m) {
  double sum = 0.0;
  for (double v : m) {
    if (!(v >= -1e-10)) throw Error(ErrorKind::off_simplex, "Bell weight is negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw Error(ErrorKind::off_simplex, "Bell weights do not sum to 1");
  const auto basis = bell_basis();
  HermitianMatrix rho = HermitianMatrix::zero(4);
  for (int mu = 0; mu < 4; ++mu) rho += std::max(m[mu], 0.0) * basis[mu].projector();
  return rho;
}

std::array<double, 4> werner_weights(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorKind::out_of_range, "Werner F must lie in [0, 1]");
  const double rest = (1.0 - f) / 3.0;
  return {f, rest, rest, rest};
}

HermitianMatrix werner(double f) { return bell_mixture(werner_weights(f)); }

HermitianMatrix horodecki(double alpha) {
  if (!(alpha >= 2.0 && alpha <= 5.0)) throw Error(ErrorKind::out_of_range, "Horodecki alpha must lie in [2, 5]");
  Vector psi = Vector::Zero(9);
  psi(0) = psi(4) = psi(8) = 1.0 / std::sqrt(3.0);
  RealVector d = RealVector::Zero(9);
  // σ+ on 01, 12, 20; σ− on 10, 21, 02.
  for (int i : {1, 5, 6}) d(i) = alpha / 21.0;
  for (int i : {3, 7, 2}) d(i) = (5.0 - alpha) / 21.0;
  return (2.0 / 7.0) * HermitianMatrix::projector(psi) + HermitianMatrix::diagonal(d);
}

RightUnitary random_right_unitary(int nalpha, int d, std::uint64_t seed) {
  if (d < 1 || nalpha < d) throw Error(ErrorKind::rank_too_high, "right-unitary needs nalpha >= d >= 1");
  std::mt19937_64 rng(seed);
  return RightUnitary{orthonormal_columns(complex_gaussian(nalpha, d, rng))};
}

Ensemble hjw_ensemble(const HermitianMatrix& rho, BipartiteDims dims, const RightUnitary& t, double eps) {
  if (rho.dim() != dims.total()) throw Error(ErrorKind::dimension_mismatch, "rho dim != nx*ny");
  Spectrum s = eig_hermitian(rho);
  s.values = s.values.cwiseMax(0.0);
  const double thr = eps * s.max();
  std::vector<Eigen::Index> supp;
  for (Eigen::Index j = 0; j < s.values.size(); ++j)
    if (s.values(j) > thr) supp.push_back(j);
  if (static_cast<int>(supp.size()) != t.d()) {
    std::ostringstream os;
    os << "right-unitary has " << t.d() << " columns but rank(rho) = " << supp.size();
    throw Error(ErrorKind::dimension_mismatch, os.str());
  }
  // Columns √λ_j |φ_j⟩ over the support.
  Matrix scaled(rho.dim(), supp.size());
  for (std::size_t c = 0; c < supp.size(); ++c) scaled.col(c) = std::sqrt(s.values(supp[c])) * s.vectors.col(supp[c]);
  Ensemble e{dims, {}, EnsembleKind::pure};
  e.members.reserve(t.nalpha());
  for (int a = 0; a < t.nalpha(); ++a) {
    const Vector n = scaled * t.t.row(a).transpose();
    e.members.push_back(HermitianMatrix::projector(n));
  }
  return e;
}

Ensemble hjw_initial_ensemble(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, EnsembleKind kind,
                              std::uint64_t seed, double eps) {
  Spectrum s = eig_hermitian(rho);
  const double thr = eps * std::max(s.max(), 0.0);
  int rank = 0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j)
    if (s.values(j) > thr) ++rank;
  if (nalpha < rank) {
    std::ostringstream os;
    os << "nalpha = " << nalpha << " is below rank(rho) = " << rank;
    throw Error(ErrorKind::rank_too_high, os.str());
  }
  Ensemble first = hjw_ensemble(rho, dims, random_right_unitary(nalpha, rank, seed), eps);
  if (kind == EnsembleKind::pure) return first;
  const Ensemble second = hjw_ensemble(rho, dims, random_right_unitary(nalpha, rank, derive_seed(seed, 1)), eps);
  std::mt19937_64 rng(derive_seed(seed, 2));
  const double lam = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
  for (int a = 0; a < nalpha; ++a) first.members[a] = lam * first.members[a] + (1.0 - lam) * second.members[a];
  first.kind = EnsembleKind::mixed;
  return first;
}

StateVector random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return StateVector::normalized(complex_gaussian(dim, 1, rng).col(0));
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return orthonormal_columns(complex_gaussian(dim, dim, rng));
}

HermitianMatrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) throw Error(ErrorKind::out_of_range, "rank must lie in [1, dim]");
  std::mt19937_64 rng(seed);
  const Matrix g = complex_gaussian(dim, rank, rng);
  HermitianMatrix rho = HermitianMatrix::hermitize(g * g.adjoint());
  return (1.0 / rho.trace()) * rho;
}

}  // namespace qcmi
