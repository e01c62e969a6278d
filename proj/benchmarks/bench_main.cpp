#include <benchmark/benchmark.h>

#include "qcmi/classical.hpp"
#include "qcmi/hermitian.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/states.hpp"

using namespace qcmi;

namespace {

HermitianMatrix random_delta(int dim, std::uint64_t seed) {
  return HermitianMatrix::hermitize(0.3 * random_unitary(dim, seed) * random_density_matrix(dim, dim, seed + 1).matrix() *
                                    random_unitary(dim, seed).adjoint());
}

void BM_ExpLogsumEig(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const HermitianMatrix r = random_density_matrix(dim, dim, 1);
  const HermitianMatrix d = random_delta(dim, 2);
  const HermitianMatrix pi1 = HermitianMatrix::identity(dim);
  for (auto _ : state) benchmark::DoNotOptimize(exp_logsum(r, d, pi1));
}
BENCHMARK(BM_ExpLogsumEig)->Arg(4)->Arg(9)->Arg(16);

void BM_ExpLogsumRational(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const HermitianMatrix r = random_density_matrix(dim, dim, 1);
  const HermitianMatrix d = random_delta(dim, 2);
  const HermitianMatrix pi1 = HermitianMatrix::identity(dim);
  for (auto _ : state) benchmark::DoNotOptimize(exp_logsum_rational(r, d, pi1));
}
BENCHMARK(BM_ExpLogsumRational)->Arg(4)->Arg(9)->Arg(16);

void BM_MixedStep(benchmark::State& state) {
  const HermitianMatrix rho = horodecki(4.0);
  const RhoGeometry geo = make_geometry(rho, {3, 3});
  const Ensemble e = hjw_initial_ensemble(rho, {3, 3}, 12, EnsembleKind::mixed, 1);
  const EntanglementOperator delta{HermitianMatrix::zero(9)};
  const SolverConfig cfg;
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(mixed_step(e, delta, geo, cfg, rng));
}
BENCHMARK(BM_MixedStep);

void BM_PureStep(benchmark::State& state) {
  const HermitianMatrix rho = horodecki(4.0);
  const RhoGeometry geo = make_geometry(rho, {3, 3});
  const Ensemble e = hjw_initial_ensemble(rho, {3, 3}, 12, EnsembleKind::pure, 1);
  const EntanglementOperator delta{HermitianMatrix::zero(9)};
  const SolverConfig cfg;
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(pure_step(e, delta, geo, cfg, rng));
}
BENCHMARK(BM_PureStep);

void BM_PureSolveWerner(benchmark::State& state) {
  const HermitianMatrix rho = werner(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(pure_solve(rho, {2, 2}, 6, SolverConfig{}));
}
BENCHMARK(BM_PureSolveWerner)->Unit(benchmark::kMillisecond);

void BM_ClassicalSolve(benchmark::State& state) {
  const ClassicalTarget t{3, 3, {0.2, 0.05, 0.05, 0.1, 0.15, 0.05, 0.05, 0.1, 0.25}};
  for (auto _ : state) benchmark::DoNotOptimize(classical_solve(t, 3, SolverConfig::classical_defaults()));
}
BENCHMARK(BM_ClassicalSolve)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
