#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcmi/classical.hpp"
#include "qcmi/hermitian.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/states.hpp"

namespace qcmi::test {

inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return v;
}

inline JointDistribution random_joint(int nx, int ny, int na, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return JointDistribution(nx, ny, na, random_simplex(static_cast<std::size_t>(nx) * ny * na, rng));
}

inline ClassicalTarget random_target(int nx, int ny, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return ClassicalTarget{nx, ny, random_simplex(static_cast<std::size_t>(nx) * ny, rng)};
}

// Full-rank members with random weights; no reconstruction constraint.
inline Ensemble random_ensemble(BipartiteDims dims, int nalpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<double> w = random_simplex(nalpha, rng);
  Ensemble e{dims, {}, EnsembleKind::mixed};
  for (int a = 0; a < nalpha; ++a)
    e.members.push_back(w[a] * random_density_matrix(dims.total(), dims.total(), derive_seed(seed, a)));
  return e;
}

inline HermitianMatrix random_hermitian(int dim, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
  return HermitianMatrix::hermitize(m);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// ‖a − b‖_F / max(‖b‖_F, tiny)
inline double rel_frobenius(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace qcmi::test
