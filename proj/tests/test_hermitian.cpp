#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "qcmi/hermitian.hpp"
#include "qcmi/states.hpp"

using namespace qcmi;
using namespace qcmi::test;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return HermitianMatrix::diagonal(v);
}

// exp(ln r + delta) straight from Eigen, r full rank.
Matrix reference_exp_logsum(const HermitianMatrix& r, const HermitianMatrix& delta) {
  Eigen::SelfAdjointEigenSolver<Matrix> er(r.matrix());
  const Matrix ln_r = er.eigenvectors() * er.eigenvalues().array().log().matrix().asDiagonal() *
                      er.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(ln_r + delta.matrix());
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("eig_hermitian on analytic inputs") {
  const Spectrum d = eig_hermitian(diag({2, 1}));
  CHECK(d.values(0) == doctest::Approx(1.0));
  CHECK(d.values(1) == doctest::Approx(2.0));
  CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(0, 1)) == doctest::Approx(1.0));

  const Spectrum id = eig_hermitian(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0));

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Spectrum px = eig_hermitian(HermitianMatrix::from(x));
  CHECK(px.values(0) == doctest::Approx(-1.0));
  CHECK(px.values(1) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(px.vectors.col(0).dot((Vector(2) << s, -s).finished())) ==
        doctest::Approx(1.0));
  CHECK(std::abs(px.vectors.col(1).dot((Vector(2) << s, s).finished())) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian reconstructs seeded random matrices") {
  for (int k = 0; k < 20; ++k) {
    const HermitianMatrix m = random_hermitian(2 + k % 8, 1000 + k);
    const Spectrum s = eig_hermitian(m);
    CHECK(rel_frobenius(s.reconstruct(), m.matrix()) < 1e-10);
    const Matrix gram = s.vectors.adjoint() * s.vectors;
    CHECK(max_abs(gram - Matrix::Identity(m.dim(), m.dim())) < 1e-12);
    for (Eigen::Index i = 1; i < s.values.size(); ++i) CHECK(s.values(i - 1) <= s.values(i));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  try {
    HermitianMatrix::from(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_hermitian);
  }
}

TEST_CASE("support and kernel projectors") {
  const Projectors p = support_kernel_projectors(diag({1, 1e-20, 0.3}), 1e-12);
  CHECK(max_abs(p.ker.matrix() - diag({0, 1, 0}).matrix()) < 1e-12);
  CHECK(max_abs(p.supp.matrix() - diag({1, 0, 1}).matrix()) < 1e-12);

  const Projectors id = support_kernel_projectors(HermitianMatrix::identity(2));
  CHECK(max_abs(id.ker.matrix()) < 1e-12);
  CHECK(max_abs(id.supp.matrix() - Matrix::Identity(2, 2)) < 1e-12);

  const Projectors z = support_kernel_projectors(HermitianMatrix::zero(2));
  CHECK(max_abs(z.ker.matrix() - Matrix::Identity(2, 2)) < 1e-12);

  CHECK_THROWS_AS(support_kernel_projectors(diag({1, -0.1})), Error);

  for (int k = 0; k < 10; ++k) {
    const HermitianMatrix rho = random_density_matrix(6, 1 + k % 6, 50 + k);
    const Projectors q = support_kernel_projectors(rho);
    CHECK(max_abs(q.supp.matrix() + q.ker.matrix() - Matrix::Identity(6, 6)) < 1e-12);
    CHECK(max_abs(q.supp.matrix() * q.ker.matrix()) < 1e-10);
    CHECK(max_abs(q.supp.matrix() * q.supp.matrix() - q.supp.matrix()) < 1e-10);
    CHECK(q.supp.trace() == doctest::Approx(1 + k % 6));
  }
}

TEST_CASE("partial traces") {
  const auto bell = bell_basis();
  const HermitianMatrix phi = bell[0].projector();
  CHECK(max_abs(partial_trace_y(phi, {2, 2}).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(partial_trace_x(phi, {2, 2}).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-12);

  const HermitianMatrix a = random_density_matrix(2, 2, 7);
  const HermitianMatrix b = 3.0 * random_density_matrix(3, 3, 8);
  const HermitianMatrix ab = kron(a, b);
  CHECK(max_abs(partial_trace_y(ab, {2, 3}).matrix() - b.trace() * a.matrix()) < 1e-12);
  CHECK(max_abs(partial_trace_x(ab, {2, 3}).matrix() - a.trace() * b.matrix()) < 1e-12);

  for (int k = 0; k < 10; ++k) {
    const BipartiteDims dims{2 + k % 2, 2 + k % 3};
    const HermitianMatrix m = random_density_matrix(dims.total(), dims.total(), 90 + k);
    const HermitianMatrix tx = partial_trace_x(m, dims), ty = partial_trace_y(m, dims);
    CHECK(tx.dim() == dims.ny);
    CHECK(ty.dim() == dims.nx);
    CHECK(std::abs(tx.trace() - m.trace()) < 1e-12);
    CHECK(std::abs(ty.trace() - m.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(partial_trace_x(HermitianMatrix::identity(5), {2, 2}), Error);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(diag({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(bell_basis()[2].projector()) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(diag({0.75, 0.25})) == doctest::Approx(0.8112781244591328).epsilon(1e-13));
  CHECK_THROWS_AS(von_neumann_entropy(diag({0.7, 0.7})), Error);
  for (int k = 0; k < 20; ++k) {
    const int dim = 2 + k % 7;
    const double s = von_neumann_entropy(random_density_matrix(dim, 1 + k % dim, 300 + k));
    CHECK(s >= 0.0);
    CHECK(s <= std::log2(dim) + 1e-12);
  }
}

TEST_CASE("quantum KL") {
  const HermitianMatrix rho = random_density_matrix(4, 4, 11);
  CHECK(std::abs(quantum_kl(rho, rho)) < 1e-12);
  CHECK(quantum_kl(diag({1, 0}), diag({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(std::isinf(quantum_kl(diag({0.5, 0.5}), diag({1, 0}))));

  // Commuting pair: classical KL of the eigenvalue vectors.
  std::mt19937_64 rng(12);
  const std::vector<double> p = random_simplex(5, rng), q = random_simplex(5, rng);
  const Matrix u = random_unitary(5, 13);
  RealVector pv(5), qv(5);
  double classical = 0.0;
  for (int i = 0; i < 5; ++i) {
    pv(i) = p[i];
    qv(i) = q[i];
    classical += p[i] * std::log2(p[i] / q[i]);
  }
  const HermitianMatrix a = HermitianMatrix::hermitize(u * HermitianMatrix::diagonal(pv).matrix() * u.adjoint());
  const HermitianMatrix b = HermitianMatrix::hermitize(u * HermitianMatrix::diagonal(qv).matrix() * u.adjoint());
  CHECK(quantum_kl(a, b) == doctest::Approx(classical).epsilon(1e-10));

  for (int k = 0; k < 200; ++k) {
    const int dim = 2 + k % 5;
    const double d = quantum_kl(random_density_matrix(dim, 1 + k % dim, 2000 + k),
                                random_density_matrix(dim, dim, 3000 + k));
    CHECK(d >= -1e-10);
  }
}

TEST_CASE("inverse square root on the support") {
  CHECK(max_abs(inv_sqrt_on_support(HermitianMatrix::identity(2)).matrix() - Matrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(inv_sqrt_on_support(diag({4, 0})).matrix() - diag({0.5, 0}).matrix()) < 1e-12);
  for (int k = 0; k < 10; ++k) {
    const HermitianMatrix rho = random_density_matrix(5, 5, 400 + k);
    const Matrix s = inv_sqrt_on_support(rho).matrix();
    CHECK(max_abs(s * rho.matrix() * s - Matrix::Identity(5, 5)) < 1e-8);
    const HermitianMatrix sing = random_density_matrix(5, 2, 500 + k);
    const Matrix t = inv_sqrt_on_support(sing).matrix();
    CHECK(max_abs(t * sing.matrix() * t - support_kernel_projectors(sing).supp.matrix()) < 1e-8);
  }
}

TEST_CASE("exp_logsum examples") {
  const HermitianMatrix killed = exp_logsum(diag({0.5, 0}), diag({std::numbers::ln2, 7}), HermitianMatrix::identity(2));
  CHECK(max_abs(killed.matrix() - diag({1, 0}).matrix()) < 1e-12);

  const HermitianMatrix r = random_density_matrix(4, 4, 21);
  const HermitianMatrix same = exp_logsum(r, HermitianMatrix::zero(4), HermitianMatrix::identity(4));
  CHECK(rel_frobenius(same.matrix(), r.matrix()) < 1e-10);

  const HermitianMatrix zero = exp_logsum(HermitianMatrix::zero(3), random_hermitian(3, 1), HermitianMatrix::identity(3));
  CHECK(max_abs(zero.matrix()) == 0.0);
}

TEST_CASE("exp_logsum matches the direct eigendecomposition for full-rank r") {
  for (int k = 0; k < 30; ++k) {
    const int dim = 2 + k % 8;
    const HermitianMatrix r = random_density_matrix(dim, dim, 600 + k);
    const HermitianMatrix d = random_hermitian(dim, 700 + k, 0.7);
    const HermitianMatrix got = exp_logsum(r, d, HermitianMatrix::identity(dim));
    CHECK(rel_frobenius(got.matrix(), reference_exp_logsum(r, d)) < 1e-8);
    CHECK(hermitian_defect(got.matrix()) < 1e-10);
    const Matrix id = Matrix::Identity(dim, dim);
    CHECK(rel_frobenius(exp_logsum_compressed(r, d, id).matrix(), got.matrix()) < 1e-12);
  }
}

TEST_CASE("rational path agrees with the eigendecomposition path") {
  for (int k = 0; k < 100; ++k) {
    const int dim = 2 + k % 8;
    const HermitianMatrix r = random_density_matrix(dim, dim, 800 + k);
    const HermitianMatrix d = random_hermitian(dim, 900 + k, 1.0);
    const HermitianMatrix pi1 = HermitianMatrix::identity(dim);
    CHECK(rel_frobenius(exp_logsum_rational(r, d, pi1).matrix(), exp_logsum(r, d, pi1).matrix()) < 1e-8);
  }
}

TEST_CASE("exp_logsum on singular r") {
  for (int k = 0; k < 10; ++k) {
    const HermitianMatrix r = random_density_matrix(6, 3, 1100 + k);
    const HermitianMatrix d = random_hermitian(6, 1200 + k, 0.5);
    const Spectrum rs = eig_hermitian(r);
    const Matrix v = support_basis(rs);
    const Matrix ker = support_kernel_projectors(rs).ker.matrix();

    // Compressed onto supp r: kernel directions carry nothing.
    const HermitianMatrix c = exp_logsum_compressed(r, d, v);
    CHECK(max_abs(ker * c.matrix()) < 1e-14 * c.trace());
    CHECK(eig_hermitian(c).min() > -1e-12);

    // Sentinel path: the kernel block is suppressed and the result tends to the compressed one.
    const HermitianMatrix e = exp_logsum(r, d, HermitianMatrix::identity(6));
    CHECK(max_abs(ker * e.matrix() * ker) < 1e-2 * e.trace());
    CHECK(rel_frobenius(e.matrix(), c.matrix()) < 5e-2);
    CHECK(eig_hermitian(e).min() > -1e-12);

    // Δ block-diagonal in supp/ker: both paths agree and the kernel gets zero.
    const Matrix pi = v * v.adjoint();
    const HermitianMatrix db = HermitianMatrix::hermitize(pi * d.matrix() * pi + ker * d.matrix() * ker);
    const HermitianMatrix eb = exp_logsum(r, db, HermitianMatrix::identity(6));
    CHECK(rel_frobenius(eb.matrix(), exp_logsum_compressed(r, db, v).matrix()) < 1e-10);
    CHECK(max_abs(ker * eb.matrix() * ker) < 1e-15);
  }
}

TEST_CASE("Pade exponential") {
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  Matrix expect(2, 2);
  expect << std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0);
  CHECK(max_abs(expm_pade(rot) - expect) < 1e-13);

  for (int k = 0; k < 10; ++k) {
    const HermitianMatrix a = random_hermitian(5, 1300 + k, 3.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
    const Matrix ref = es.eigenvectors() * (-es.eigenvalues().array()).exp().matrix().asDiagonal() *
                       es.eigenvectors().adjoint();
    CHECK(rel_frobenius(expm_neg_pade(a.matrix()), ref) < 1e-10);
  }
}
