#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "qcmi/classical.hpp"
#include "qcmi/error.hpp"
#include "qcmi/oracles.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/states.hpp"

using namespace qcmi;
using namespace qcmi::test;

namespace {

HermitianMatrix product_pure(BipartiteDims dims, std::uint64_t seed) {
  const Vector a = random_state(dims.nx, seed).amplitudes();
  const Vector b = random_state(dims.ny, seed + 1).amplitudes();
  Vector ab(dims.total());
  for (int x = 0; x < dims.nx; ++x)
    for (int y = 0; y < dims.ny; ++y) ab(x * dims.ny + y) = a(x) * b(y);
  return HermitianMatrix::projector(ab);
}

Ensemble single(const HermitianMatrix& k, EnsembleKind kind = EnsembleKind::mixed) {
  return Ensemble{{2, 2}, {k}, kind};
}

// Σ_α tr K(log2 K − log2 R), each log taken on its own support.
double trace_form_cmi(const Ensemble& e) {
  const std::vector<HermitianMatrix> rs = quantum_r(e);
  double total = 0.0;
  for (int a = 0; a < e.size(); ++a) {
    const Matrix lk = log_on_support(e.members[a]).matrix();
    const Matrix lr = log_on_support(rs[a]).matrix();
    total += (e.members[a].matrix() * (lk - lr)).trace().real() / std::numbers::ln2;
  }
  return total;
}

}  // namespace

TEST_CASE("quantum CMI examples") {
  const HermitianMatrix phi = bell_basis()[0].projector();
  CHECK(quantum_cmi(single(phi)) == doctest::Approx(2.0).epsilon(1e-12));

  Ensemble prod{{2, 3}, {}, EnsembleKind::pure};
  for (int a = 0; a < 3; ++a) prod.members.push_back((1.0 / 3) * product_pure({2, 3}, 10 + 2 * a));
  CHECK(std::abs(quantum_cmi(prod)) < 1e-10);

  for (int k = 0; k < 20; ++k) {
    const Ensemble e = random_ensemble({2, 2 + k % 2}, 3, 100 + k);
    const double c = quantum_cmi(e);
    CHECK(c >= -1e-8);
    CHECK(c == doctest::Approx(trace_form_cmi(e)).epsilon(1e-9));
  }

  // Pure members: Σ w·2S(ρ_x).
  const Ensemble pure = hjw_initial_ensemble(werner(0.8), {2, 2}, 6, EnsembleKind::pure, 3);
  double expect = 0.0;
  for (const auto& k : pure.members) {
    const double w = k.trace();
    expect += w * 2 * von_neumann_entropy((1.0 / w) * partial_trace_y(k, {2, 2}));
  }
  CHECK(quantum_cmi(pure) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("quantum R") {
  const HermitianMatrix phi = bell_basis()[0].projector();
  CHECK(max_abs(quantum_r(phi, {2, 2}).matrix() - 0.25 * Matrix::Identity(4, 4)) < 1e-14);
  const HermitianMatrix p = 0.3 * product_pure({2, 2}, 5);
  CHECK(max_abs(quantum_r(p, {2, 2}).matrix() - p.matrix()) < 1e-14);
  CHECK(max_abs(quantum_r(HermitianMatrix::zero(4), {2, 2}).matrix()) == 0.0);
  for (int k = 0; k < 20; ++k) {
    const Ensemble e = random_ensemble({2, 3}, 4, 200 + k);
    const std::vector<HermitianMatrix> rs = quantum_r(e);
    for (int a = 0; a < e.size(); ++a) {
      CHECK(std::abs(rs[a].trace() - e.members[a].trace()) < 1e-14);
      CHECK(eig_hermitian(rs[a]).min() > -1e-14);
    }
  }
}

TEST_CASE("quantum Lagrangian identities") {
  Ensemble prod{{2, 2}, {0.5 * product_pure({2, 2}, 1), 0.5 * product_pure({2, 2}, 7)}, EnsembleKind::pure};
  CHECK(std::abs(quantum_lagrangian(prod, prod)) < 1e-10);

  for (int k = 0; k < 30; ++k) {
    const BipartiteDims dims{2, 2 + k % 2};
    const Ensemble e = random_ensemble(dims, 3, 300 + k), e2 = random_ensemble(dims, 3, 400 + k);
    const double self = quantum_lagrangian(e, e);
    CHECK(self / std::numbers::ln2 == doctest::Approx(quantum_cmi(e)).epsilon(1e-10));
    CHECK(quantum_lagrangian(e, e2) >= self - 1e-8);
    const QuantumLagrangianDecomposition d = quantum_lagrangian_decomposition(e, e2);
    CHECK(std::abs(d.total() - quantum_lagrangian(e, e2) / std::numbers::ln2) < 1e-8);
    CHECK(std::abs((quantum_lagrangian(e, e2) - self) / std::numbers::ln2 - (d.weights + d.x_marginals + d.y_marginals)) <
          1e-8);
    CHECK(d.weights >= -1e-10);
    CHECK(d.x_marginals >= -1e-10);
    CHECK(d.y_marginals >= -1e-10);
  }

  // Support violation: rank-one R' cannot carry a full-rank K.
  const Ensemble full = random_ensemble({2, 2}, 1, 9);
  CHECK(std::isinf(quantum_lagrangian(full, single(product_pure({2, 2}, 3)))));
}

TEST_CASE("quantum Lagrangian is convex in its first argument") {
  for (int k = 0; k < 30; ++k) {
    const Ensemble a = random_ensemble({2, 2}, 3, 500 + k), b = random_ensemble({2, 2}, 3, 600 + k);
    const Ensemble q = random_ensemble({2, 2}, 3, 700 + k);
    const double lam = (k + 1) / 32.0;
    Ensemble m{{2, 2}, {}, EnsembleKind::mixed};
    for (int i = 0; i < 3; ++i) m.members.push_back(lam * a.members[i] + (1 - lam) * b.members[i]);
    CHECK(quantum_lagrangian(m, q) <= lam * quantum_lagrangian(a, q) + (1 - lam) * quantum_lagrangian(b, q) + 1e-8);
  }
}

TEST_CASE("first update for a pure state with one member") {
  const HermitianMatrix phi = bell_basis()[0].projector();
  const SolverConfig cfg;
  const EntanglementOperator zero{HermitianMatrix::zero(4)};
  // I = π_1 + π_0, so Δ¹ is just the gauge shift −ln c·1 (c = tr π_1 R π_1 = 1/4).
  const Matrix shift = std::log(4.0) * Matrix::Identity(4, 4);
  const StepResult m = mixed_step(single(phi), zero, phi, cfg);
  CHECK(m.normalizer == doctest::Approx(0.25));
  CHECK(max_abs(m.ensemble.members[0].matrix() - phi.matrix()) < 1e-10);
  CHECK(max_abs(m.delta.delta.matrix() - shift) < 1e-10);

  const StepResult p = pure_step(single(phi, EnsembleKind::pure), zero, phi, cfg);
  CHECK(max_abs(p.ensemble.members[0].matrix() - phi.matrix()) < 1e-10);
  CHECK(max_abs(p.delta.delta.matrix() - shift) < 1e-10);
  CHECK(stationarity_residual(p.ensemble, p.delta, phi) < 1e-10);

  CHECK_THROWS_AS(mixed_step(single(phi, EnsembleKind::pure), zero, phi, cfg), Error);
  CHECK_THROWS_AS(pure_step(single(phi), zero, phi, cfg), Error);
}

TEST_CASE("diagonal inputs reproduce the classical sequence") {
  for (int k = 0; k < 5; ++k) {
    const ClassicalTarget t = random_target(2, 2 + k % 2, 800 + k);
    JointDistribution p = classical_initial(t, 3, 900 + k);
    const RealVector d = Eigen::Map<const RealVector>(t.p.data(), static_cast<Eigen::Index>(t.p.size()));
    const RhoGeometry geo = make_geometry(HermitianMatrix::diagonal(d), {t.nx, t.ny});
    Ensemble e = diagonal_ensemble(p);
    EntanglementOperator delta = diagonal_delta(classical_delta(p));
    const SolverConfig cfg;
    std::mt19937_64 rng(1);
    for (int n = 0; n < 30; ++n) {
      p = classical_step(p, t);
      StepResult s = mixed_step(e, delta, geo, cfg, rng);
      e = std::move(s.ensemble);
      delta = std::move(s.delta);
      const Ensemble ref = diagonal_ensemble(p);
      for (int a = 0; a < 3; ++a) CHECK(max_abs(e.members[a].matrix() - ref.members[a].matrix()) < 1e-8);
    }
    // K̃ is normalized, so Δ matches the classical Δ up to an additive constant.
    const Matrix gap = delta.delta.matrix() - diagonal_delta(classical_delta(p)).delta.matrix();
    const RealVector g = gap.diagonal().real();
    CHECK(g.maxCoeff() - g.minCoeff() < 1e-8);
    CHECK(max_abs(gap - Matrix(gap.diagonal().asDiagonal())) < 1e-14);
    CHECK(quantum_cmi(e) == doctest::Approx(classical_cmi(p)).epsilon(1e-8));
  }
}

TEST_CASE("stationarity residual at converged classical-diagonal data") {
  const ClassicalTarget t = random_target(2, 2, 1000);
  SolverConfig cfg = SolverConfig::classical_defaults();
  cfg.tol = 1e-13;
  cfg.max_iter = 200000;
  const ClassicalReport rep = classical_solve(t, 2, cfg);
  REQUIRE(rep.converged);
  const RealVector d = Eigen::Map<const RealVector>(t.p.data(), 4);
  const double q = stationarity_residual(diagonal_ensemble(rep.distribution), diagonal_delta(rep.delta),
                                         HermitianMatrix::diagonal(d));
  CHECK(std::abs(q - classical_stationarity_residual(rep.distribution)) < 1e-8);
}

TEST_CASE("mixed solve on Werner(0.9)") {
  const SolverReport r = mixed_solve(werner(0.9), {2, 2}, 6, SolverConfig{});
  CHECK(r.iterations <= SolverConfig{}.max_iter);
  CHECK(r.final_residual < 1e-6);
  CHECK(r.residual_history.back() < r.residual_history.front());
  CHECK(std::abs(r.entanglement_bits - r.dual_bits) < 1e-6);
  CHECK(r.entanglement_bits <= bell_mixture_eof(werner_weights(0.9)) + 1e-6);
  CHECK(static_cast<int>(r.residual_history.size()) == r.iterations);
  CHECK(static_cast<int>(r.cmi_history.size()) == r.iterations);
}

TEST_CASE("pure solve on Werner(0.8)") {
  const SolverReport r = pure_solve(werner(0.8), {2, 2}, 6, SolverConfig{});
  CHECK(r.converged);
  CHECK(r.final_residual < 1e-6);
  CHECK(stationarity_residual(r.ensemble, r.delta, werner(0.8)) < 1e-6);
  CHECK(max_abs(r.ensemble.sum().matrix() - werner(0.8).matrix()) < 1e-6);
  CHECK(r.ensemble.check().ok);
  CHECK(r.entanglement_bits == doctest::Approx(bell_mixture_eof(werner_weights(0.8))).epsilon(5e-3));
}

TEST_CASE("pure solve on a Bell state") {
  const SolverReport r = pure_solve(bell_basis()[0].projector(), {2, 2}, 0, SolverConfig{});
  CHECK(std::abs(r.entanglement_bits - 1.0) < 1e-4);
  CHECK(std::abs(r.dual_bits - 1.0) < 1e-4);
}

TEST_CASE("pure and mixed solves are reproducible") {
  const SolverConfig cfg;
  CHECK(pure_solve(werner(0.7), {2, 2}, 6, cfg).entanglement_bits ==
        pure_solve(werner(0.7), {2, 2}, 6, cfg).entanglement_bits);
  // Werner(1/2) has a degenerate top eigenvalue at the first step.
  CHECK(pure_solve(werner(0.5), {2, 2}, 6, cfg).entanglement_bits ==
        pure_solve(werner(0.5), {2, 2}, 6, cfg).entanglement_bits);
  CHECK(mixed_solve(werner(0.7), {2, 2}, 6, cfg).entanglement_bits ==
        mixed_solve(werner(0.7), {2, 2}, 6, cfg).entanglement_bits);
}

TEST_CASE("mixed solve on pure states gives the reduced entropy") {
  for (int k = 0; k < 3; ++k) {
    const StateVector psi = random_state(4, 1100 + k);
    const SolverReport r = mixed_solve(psi.projector(), {2, 2}, 4, SolverConfig{});
    CHECK(std::abs(r.entanglement_bits - pure_state_eof(psi, {2, 2})) < 1e-4);
  }
}

TEST_CASE("separable diagonal state has zero mixed entanglement") {
  std::mt19937_64 rng(12);
  const std::vector<double> p = random_simplex(4, rng);
  const RealVector d = Eigen::Map<const RealVector>(p.data(), 4);
  const SolverReport r = mixed_solve(HermitianMatrix::diagonal(d), {2, 2}, 0, SolverConfig{});
  CHECK(std::abs(r.entanglement_bits) < 1e-6);
}

TEST_CASE("every iterate keeps the ensemble invariants") {
  for (EnsembleKind kind : {EnsembleKind::mixed, EnsembleKind::pure}) {
    const HermitianMatrix rho = werner(0.85);
    const RhoGeometry geo = make_geometry(rho, {2, 2});
    SolverConfig cfg;
    cfg.max_iter = 200;
    int seen = 0;
    bool ok = true;
    double worst_delta = 0.0;
    solve_from(hjw_initial_ensemble(rho, {2, 2}, 6, kind, 4), {HermitianMatrix::zero(4)}, geo, cfg,
               [&](int, const Ensemble& e, const EntanglementOperator& d) {
                 ++seen;
                 ok = ok && e.check().ok;
                 worst_delta = std::max(worst_delta, hermitian_defect(d.delta.matrix()));
               });
    CHECK(seen > 0);
    CHECK(ok);
    CHECK(worst_delta <= 1e-10);
  }
}

TEST_CASE("solver configuration is validated") {
  SolverConfig bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(mixed_solve(werner(0.7), {2, 2}, 6, bad), Error);
  bad.damping = 1.5;
  CHECK_THROWS_AS(mixed_solve(werner(0.7), {2, 2}, 6, bad), Error);
  SolverConfig tol;
  tol.tol = 0;
  CHECK_THROWS_AS(pure_solve(werner(0.7), {2, 2}, 6, tol), Error);
  SolverConfig floor;
  floor.w_floor = 1e-3;
  CHECK_THROWS_AS(pure_solve(werner(0.7), {2, 2}, 6, floor), Error);
  CHECK_THROWS_AS(pure_solve(werner(0.7), {2, 2}, 2, SolverConfig{}), Error);  // rank 4 > nalpha
  CHECK_THROWS_AS(make_geometry(1.5 * werner(0.7), {2, 2}), Error);
}

TEST_CASE("entanglement from delta") {
  CHECK(entanglement_from_delta(werner(0.6), {HermitianMatrix::zero(4)}) == 0.0);
  const HermitianMatrix d = random_hermitian(4, 5);
  const HermitianMatrix rho = random_density_matrix(4, 4, 6);
  CHECK(entanglement_from_delta(rho, {d}) ==
        doctest::Approx((rho.matrix() * d.matrix()).trace().real() / (2 * std::numbers::ln2)));
}
