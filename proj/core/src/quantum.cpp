#include "qcmi/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qcmi/states.hpp"

namespace qcmi {

namespace {

constexpr double kLogClamp = 1e-300;
constexpr double kDegenerateGap = 1e-12;

HermitianMatrix exp_term(const HermitianMatrix& r, const HermitianMatrix& delta, const RhoGeometry& geo,
                         SupportMode mode) {
  if (mode == SupportMode::sandwich) return exp_logsum(r, delta, geo.pi_supp, geo.eps);
  return exp_logsum_compressed(r, delta, geo.support, geo.eps);
}

// Top eigenpair of m; under near-degeneracy the eigenvector closest to
// `previous` inside the top eigenspace.
WeightedState top_with_tiebreak(const HermitianMatrix& m, const Vector* previous) {
  const Spectrum s = eig_hermitian(m);
  const Eigen::Index n = s.values.size();
  const double top = s.values(n - 1);
  Eigen::Index first = n - 1;
  while (first > 0 && top - s.values(first - 1) <= kDegenerateGap * std::max(std::abs(top), 1e-300)) --first;
  Vector psi = s.vectors.col(n - 1);
  if (first < n - 1 && previous != nullptr && previous->size() == n) {
    const Matrix space = s.vectors.middleCols(first, n - first);
    const Vector proj = space * (space.adjoint() * (*previous));
    if (proj.norm() > 1e-8) psi = proj / proj.norm();
  }
  return WeightedState{std::max(top, 0.0), psi};
}

// ρ^{1/2} g for a complex Gaussian g: √w|ψ⟩ of a random HJW member.
Vector random_hjw_vector(const RhoGeometry& geo, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector g(geo.rho.dim());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(normal(rng), normal(rng));
  return geo.sqrt.matrix() * g;
}

// Replaces members whose trace fell under the floor by a small fresh HJW
// member and renormalizes. Returns the number replaced.
int apply_weight_floor(std::vector<HermitianMatrix>& members, EnsembleKind kind, const RhoGeometry& geo,
                       const SolverConfig& cfg, std::mt19937_64& rng) {
  int count = 0;
  const double seed_weight = 10.0 * cfg.w_floor;
  for (auto& k : members) {
    if (k.trace() >= cfg.w_floor) continue;
    HermitianMatrix fresh = HermitianMatrix::projector(random_hjw_vector(geo, rng));
    if (kind == EnsembleKind::mixed) {
      std::uniform_real_distribution<double> unif(0.05, 0.95);
      const double lam = unif(rng);
      fresh = lam * fresh + (1.0 - lam) * HermitianMatrix::projector(random_hjw_vector(geo, rng));
    }
    const double tr = fresh.trace();
    if (tr > 0.0) k = (seed_weight / tr) * fresh;
    ++count;
  }
  if (count > 0) {
    double total = 0.0;
    for (const auto& k : members) total += k.trace();
    for (auto& k : members) k *= 1.0 / total;
  }
  return count;
}

// Δ_new = −ln(e^{−Δ/2} I^η e^{−Δ/2}), I = S (Σ K̃) S + π_0. η = 1 is the
// undamped update; every η shares the fixed points I = 1.
HermitianMatrix delta_update(const HermitianMatrix& delta, const HermitianMatrix& ktilde_sum, const RhoGeometry& geo,
                             double damping) {
  const Matrix& s = geo.inv_sqrt.matrix();
  Matrix info = s * ktilde_sum.matrix() * s + geo.pi_ker.matrix();
  if (damping != 1.0)
    info = apply_function(HermitianMatrix::hermitize(info), [damping](double l) {
             return std::pow(std::max(l, 0.0), damping);
           }).matrix();
  const HermitianMatrix half = apply_function(delta, [](double l) { return std::exp(-0.5 * l); });
  const HermitianMatrix inner = HermitianMatrix::hermitize(half.matrix() * info * half.matrix());
  return apply_function(inner, [](double l) { return -std::log(std::max(l, kLogClamp)); });
}

struct Normalized {
  std::vector<HermitianMatrix> members;
  double normalizer = 0.0;
};

Normalized mixed_update(const std::vector<HermitianMatrix>& rs, const HermitianMatrix& delta, const RhoGeometry& geo,
                        SupportMode mode) {
  Normalized out;
  out.members.reserve(rs.size());
  for (const auto& r : rs) {
    out.members.push_back(exp_term(r, delta, geo, mode));
    out.normalizer += out.members.back().trace();
  }
  if (out.normalizer > 0.0)
    for (auto& k : out.members) k *= 1.0 / out.normalizer;
  return out;
}

Normalized pure_update(const std::vector<HermitianMatrix>& rs, const HermitianMatrix& delta, const RhoGeometry& geo,
                       SupportMode mode, const std::vector<Vector>& previous) {
  Normalized out;
  out.members.reserve(rs.size());
  for (std::size_t a = 0; a < rs.size(); ++a) {
    const WeightedState ws =
        top_with_tiebreak(exp_term(rs[a], delta, geo, mode), a < previous.size() ? &previous[a] : nullptr);
    out.members.push_back(ws.weight * HermitianMatrix::projector(ws.psi));
    out.normalizer += ws.weight;
  }
  if (out.normalizer > 0.0)
    for (auto& k : out.members) k *= 1.0 / out.normalizer;
  return out;
}

std::vector<Vector> member_states(const std::vector<HermitianMatrix>& members) {
  std::vector<Vector> out;
  out.reserve(members.size());
  for (const auto& k : members) out.push_back(top_eigenpair(k).psi);
  return out;
}

std::vector<HermitianMatrix> r_of(const std::vector<HermitianMatrix>& members, BipartiteDims dims) {
  std::vector<HermitianMatrix> out;
  out.reserve(members.size());
  for (const auto& k : members) out.push_back(quantum_r(k, dims));
  return out;
}

StepResult generic_step(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo,
                        const SolverConfig& cfg, std::mt19937_64& rng) {
  if (e.dims != geo.dims || delta.delta.dim() != geo.rho.dim())
    throw Error(ErrorKind::dimension_mismatch, "step: ensemble, delta and rho disagree on dimensions");
  const bool pure = e.kind == EnsembleKind::pure;
  const std::vector<Vector> prev = pure ? member_states(e.members) : std::vector<Vector>{};

  Normalized k = pure ? pure_update(quantum_r(e), delta.delta, geo, cfg.support, prev)
                      : mixed_update(quantum_r(e), delta.delta, geo, cfg.support);
  StepResult res;
  res.normalizer = k.normalizer;
  if (!(k.normalizer > 0.0)) {
    // Every branch collapsed; restart from the input ensemble.
    res.ensemble = e;
    res.delta = delta;
    return res;
  }
  res.reseeded = apply_weight_floor(k.members, e.kind, geo, cfg, rng);

  // Fix the additive gauge of Δ so that Σ tr exp(ln R + Δ) = 1 before the
  // normalization; no K iterate depends on it.
  const HermitianMatrix gauged =
      delta.delta - std::log(k.normalizer) * HermitianMatrix::identity(delta.delta.dim());

  const std::vector<Vector> cur = pure ? member_states(k.members) : std::vector<Vector>{};
  const std::vector<HermitianMatrix> r_next = r_of(k.members, e.dims);
  const Normalized kt = pure ? pure_update(r_next, gauged, geo, cfg.support, cur)
                             : mixed_update(r_next, gauged, geo, cfg.support);
  HermitianMatrix kt_sum = HermitianMatrix::zero(geo.rho.dim());
  for (const auto& m : kt.members) kt_sum += m;

  res.ensemble = Ensemble{e.dims, std::move(k.members), e.kind};
  res.delta = EntanglementOperator{kt.normalizer > 0.0 ? delta_update(gauged, kt_sum, geo, cfg.damping) : gauged};
  return res;
}

SolverReport solve_restarts(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, EnsembleKind kind,
                            const SolverConfig& cfg) {
  cfg.validate();
  const RhoGeometry geo = make_geometry(rho, dims, cfg.eps_kernel);
  const int na = nalpha > 0 ? nalpha : default_nalpha(dims);
  SolverReport best;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = r == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    Ensemble start = hjw_initial_ensemble(geo.rho, dims, na, kind, seed, cfg.eps_kernel);
    SolverConfig run = cfg;
    run.seed = seed;
    SolverReport rep = solve_from(std::move(start), EntanglementOperator{HermitianMatrix::zero(rho.dim())}, geo, run);
    rep.seed = seed;
    if (!have || rep.entanglement_bits < best.entanglement_bits) {
      best = std::move(rep);
      have = true;
    }
  }
  return best;
}

}  // namespace

std::vector<double> Ensemble::weights() const {
  std::vector<double> w;
  w.reserve(members.size());
  for (const auto& k : members) w.push_back(k.trace());
  return w;
}

HermitianMatrix Ensemble::sum() const {
  HermitianMatrix s = HermitianMatrix::zero(dims.total());
  for (const auto& k : members) s += k;
  return s;
}

EnsembleCheck Ensemble::check(double psd_tol, double trace_tol, double rank_tol) const {
  EnsembleCheck c;
  double total = 0.0;
  for (const auto& k : members) {
    const Spectrum s = eig_hermitian(k);
    c.min_eigenvalue = std::min(c.min_eigenvalue, s.min());
    c.hermitian_defect = std::max(c.hermitian_defect, hermitian_defect(k.matrix()));
    total += s.values.sum();
    if (kind == EnsembleKind::pure && s.values.size() > 1 && s.max() > 0.0) {
      const double second = s.values(s.values.size() - 2);
      c.rank_defect = std::max(c.rank_defect, std::abs(second) / s.max());
    }
  }
  c.trace_defect = std::abs(total - 1.0);
  c.ok = c.min_eigenvalue >= -psd_tol && c.trace_defect <= trace_tol &&
         (kind == EnsembleKind::mixed || c.rank_defect <= rank_tol);
  return c;
}

RhoGeometry make_geometry(const HermitianMatrix& rho, BipartiteDims dims, double eps) {
  if (rho.dim() != dims.total()) throw Error(ErrorKind::dimension_mismatch, "rho dim != nx*ny");
  RhoGeometry g;
  g.rho = rho;
  g.dims = dims;
  g.eps = eps;
  g.spectrum = eig_hermitian(rho);
  if (std::abs(g.spectrum.values.sum() - 1.0) > 1e-8 || g.spectrum.min() < -1e-8) {
    std::ostringstream os;
    os << "rho has trace " << g.spectrum.values.sum() << " and min eigenvalue " << g.spectrum.min();
    throw Error(ErrorKind::not_density_matrix, os.str());
  }
  // Roundoff-negative eigenvalues are part of the kernel.
  Spectrum clipped = g.spectrum;
  clipped.values = clipped.values.cwiseMax(0.0);
  const Projectors p = support_kernel_projectors(clipped, eps);
  g.pi_supp = p.supp;
  g.pi_ker = p.ker;
  g.support = support_basis(clipped, eps);
  const double thr = eps * clipped.max();
  g.inv_sqrt = apply_function(clipped, [thr](double l) { return l > thr ? 1.0 / std::sqrt(l) : 0.0; });
  g.sqrt = apply_function(clipped, [thr](double l) { return l > thr ? std::sqrt(l) : 0.0; });
  return g;
}

HermitianMatrix quantum_r(const HermitianMatrix& k, BipartiteDims dims) {
  const double w = k.trace();
  if (!(w > 0.0)) return HermitianMatrix::zero(k.dim());
  return (1.0 / w) * kron(partial_trace_y(k, dims), partial_trace_x(k, dims));
}

std::vector<HermitianMatrix> quantum_r(const Ensemble& e) { return r_of(e.members, e.dims); }

double quantum_cmi(const Ensemble& e) {
  double total = 0.0;
  for (const auto& k : e.members) {
    const double w = k.trace();
    if (!(w > 0.0)) continue;
    const HermitianMatrix rho = (1.0 / w) * k;
    const double sx = entropy_bits_unchecked(eig_hermitian(partial_trace_y(rho, e.dims)).values);
    const double sy = entropy_bits_unchecked(eig_hermitian(partial_trace_x(rho, e.dims)).values);
    const double sxy = entropy_bits_unchecked(eig_hermitian(rho).values);
    total += w * (sx + sy - sxy);
  }
  return total;
}

double quantum_lagrangian(const Ensemble& e, const Ensemble& e2) {
  if (e.size() != e2.size() || e.dims != e2.dims) throw Error(ErrorKind::dimension_mismatch, "quantum_lagrangian");
  double total = 0.0;
  for (int a = 0; a < e.size(); ++a) {
    const HermitianMatrix& k = e.members[a];
    const double w = k.trace();
    if (!(w > 0.0)) continue;
    const HermitianMatrix r2 = quantum_r(e2.members[a], e2.dims);
    const Spectrum sr = eig_hermitian(r2);
    const Projectors pr = support_kernel_projectors(
        Spectrum{sr.values.cwiseMax(0.0), sr.vectors}, kDefaultKernelEps);
    if ((pr.ker.matrix() * k.matrix()).trace().real() > 1e-10 * w) return std::numeric_limits<double>::infinity();
    const double thr = kDefaultKernelEps * std::max(sr.max(), 0.0);
    const HermitianMatrix ln_r = apply_function(sr, [thr](double l) { return l > thr ? std::log(l) : 0.0; });
    const Spectrum sk = eig_hermitian(k);
    double k_ln_k = 0.0;
    for (Eigen::Index j = 0; j < sk.values.size(); ++j)
      if (sk.values(j) > 0.0) k_ln_k += sk.values(j) * std::log(sk.values(j));
    total += k_ln_k - (k.matrix() * ln_r.matrix()).trace().real();
  }
  return total;
}

QuantumLagrangianDecomposition quantum_lagrangian_decomposition(const Ensemble& e, const Ensemble& e2) {
  if (e.size() != e2.size() || e.dims != e2.dims)
    throw Error(ErrorKind::dimension_mismatch, "quantum_lagrangian_decomposition");
  QuantumLagrangianDecomposition d;
  for (int a = 0; a < e.size(); ++a) {
    const double w = e.members[a].trace();
    const double w2 = e2.members[a].trace();
    if (!(w > 0.0)) continue;
    if (!(w2 > 0.0)) {
      d.weights = std::numeric_limits<double>::infinity();
      continue;
    }
    d.weights += w * std::log2(w / w2);
    const HermitianMatrix rho = (1.0 / w) * e.members[a];
    const HermitianMatrix rho2 = (1.0 / w2) * e2.members[a];
    const HermitianMatrix rx = partial_trace_y(rho, e.dims), ry = partial_trace_x(rho, e.dims);
    d.conditional_mi += w * quantum_kl(rho, kron(rx, ry));
    d.x_marginals += w * quantum_kl(rx, partial_trace_y(rho2, e.dims));
    d.y_marginals += w * quantum_kl(ry, partial_trace_x(rho2, e.dims));
  }
  return d;
}

WeightedState top_eigenpair(const HermitianMatrix& m) { return top_with_tiebreak(m, nullptr); }

StepResult mixed_step(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo,
                      const SolverConfig& cfg, std::mt19937_64& rng) {
  if (e.kind != EnsembleKind::mixed) throw Error(ErrorKind::out_of_range, "mixed_step needs a mixed ensemble");
  return generic_step(e, delta, geo, cfg, rng);
}

StepResult mixed_step(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho,
                      const SolverConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return mixed_step(e, delta, make_geometry(rho, e.dims, cfg.eps_kernel), cfg, rng);
}

StepResult pure_step(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo,
                     const SolverConfig& cfg, std::mt19937_64& rng) {
  if (e.kind != EnsembleKind::pure) throw Error(ErrorKind::out_of_range, "pure_step needs a pure ensemble");
  return generic_step(e, delta, geo, cfg, rng);
}

StepResult pure_step(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho,
                     const SolverConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return pure_step(e, delta, make_geometry(rho, e.dims, cfg.eps_kernel), cfg, rng);
}

double stationarity_residual(const Ensemble& e, const EntanglementOperator& delta, const RhoGeometry& geo) {
  const double recon = (e.sum().matrix() - geo.rho.matrix()).norm();
  double worst = 0.0;
  const Matrix& d = delta.delta.matrix();
  for (const auto& k : e.members) {
    const double w = k.trace();
    if (!(w > 0.0)) continue;
    const HermitianMatrix r = quantum_r(k, e.dims);
    const HermitianMatrix ln_r = log_on_support(r, geo.eps);
    if (e.kind == EnsembleKind::pure) {
      const WeightedState ws = top_eigenpair(k);
      const Vector lhs = geo.pi_supp.matrix() * ((ln_r.matrix() + d) * ws.psi);
      worst = std::max(worst, (lhs - std::log(ws.weight) * ws.psi).norm());
    } else {
      const Spectrum sk = eig_hermitian(k);
      const Matrix supp = support_basis(Spectrum{sk.values.cwiseMax(0.0), sk.vectors}, geo.eps);
      const HermitianMatrix ln_k = log_on_support(k, geo.eps);
      const Matrix gap = supp.adjoint() * (ln_k.matrix() - ln_r.matrix() - d) * supp;
      worst = std::max(worst, gap.norm());
    }
  }
  return worst + recon;
}

double stationarity_residual(const Ensemble& e, const EntanglementOperator& delta, const HermitianMatrix& rho) {
  return stationarity_residual(e, delta, make_geometry(rho, e.dims));
}

double entanglement_from_delta(const HermitianMatrix& rho, const EntanglementOperator& delta) {
  if (rho.dim() != delta.delta.dim()) throw Error(ErrorKind::dimension_mismatch, "entanglement_from_delta");
  return (rho.matrix() * delta.delta.matrix()).trace().real() / (2.0 * std::numbers::ln2);
}

int default_nalpha(BipartiteDims dims) noexcept { return dims.total() * dims.total(); }

namespace {

constexpr double kDivergedDelta = 700.0;  // exp overflows near 709
constexpr int kDampingHalvings = 4;

bool finite_delta(const HermitianMatrix& d) {
  const double m = d.matrix().cwiseAbs().maxCoeff();
  return std::isfinite(m) && m < kDivergedDelta;
}

// One run at fixed damping. Returns false if the iteration diverged; rep
// then holds the last finite iterate.
bool run_attempt(const Ensemble& start, const EntanglementOperator& delta0, const RhoGeometry& geo,
                 const SolverConfig& cfg, const IterationObserver& observe, SolverReport& rep) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 0xF1002));
  rep = SolverReport{};
  rep.damping = cfg.damping;
  Ensemble e = start;
  EntanglementOperator delta = delta0;
  double prev = 0.5 * quantum_cmi(e);
  int streak = 0;
  bool ok = true;
  for (int it = 0; it < cfg.max_iter; ++it) {
    StepResult step;
    try {
      step = e.kind == EnsembleKind::pure ? pure_step(e, delta, geo, cfg, rng) : mixed_step(e, delta, geo, cfg, rng);
    } catch (const Error&) {
      ok = false;  // eigensolver breakdown on non-finite input
      break;
    }
    if (!finite_delta(step.delta.delta)) {
      ok = false;
      break;
    }
    const double cmi = quantum_cmi(step.ensemble);
    const double res = stationarity_residual(step.ensemble, step.delta, geo);
    if (!std::isfinite(cmi) || !std::isfinite(res)) {
      ok = false;
      break;
    }
    e = std::move(step.ensemble);
    delta = std::move(step.delta);
    rep.cmi_history.push_back(cmi);
    rep.residual_history.push_back(res);
    rep.iterations = it + 1;
    if (observe) observe(rep.iterations, e, delta);
    const double ent = 0.5 * cmi;
    streak = (res < cfg.tol && std::abs(ent - prev) < cfg.tol) ? streak + 1 : 0;
    prev = ent;
    if (streak >= cfg.patience) {
      rep.converged = true;
      break;
    }
  }
  rep.final_residual = rep.residual_history.empty() ? stationarity_residual(e, delta, geo)
                                                    : rep.residual_history.back();
  rep.entanglement_bits = 0.5 * quantum_cmi(e);
  rep.dual_bits = entanglement_from_delta(geo.rho, delta);
  rep.ensemble = std::move(e);
  rep.delta = std::move(delta);
  rep.seed = cfg.seed;
  rep.diverged = !ok;
  return ok;
}

}  // namespace

SolverReport solve_from(Ensemble start, EntanglementOperator delta0, const RhoGeometry& geo, const SolverConfig& cfg,
                        const IterationObserver& observe) {
  cfg.validate();
  SolverConfig run = cfg;
  SolverReport rep;
  for (int h = 0; h <= kDampingHalvings; ++h) {
    if (run_attempt(start, delta0, geo, run, observe, rep)) return rep;
    run.damping *= 0.5;
  }
  return rep;
}

SolverReport mixed_solve(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, const SolverConfig& cfg) {
  return solve_restarts(rho, dims, nalpha, EnsembleKind::mixed, cfg);
}

SolverReport pure_solve(const HermitianMatrix& rho, BipartiteDims dims, int nalpha, const SolverConfig& cfg) {
  return solve_restarts(rho, dims, nalpha, EnsembleKind::pure, cfg);
}

Ensemble diagonal_ensemble(const JointDistribution& p) {
  const BipartiteDims dims{p.nx(), p.ny()};
  Ensemble e{dims, {}, EnsembleKind::mixed};
  for (int a = 0; a < p.nalpha(); ++a) {
    RealVector d(dims.total());
    for (int x = 0; x < p.nx(); ++x)
      for (int y = 0; y < p.ny(); ++y) d(x * p.ny() + y) = p(x, y, a);
    e.members.push_back(HermitianMatrix::diagonal(d));
  }
  return e;
}

EntanglementOperator diagonal_delta(const ClassicalDelta& d) {
  return EntanglementOperator{HermitianMatrix::diagonal(Eigen::Map<const RealVector>(d.values.data(), d.values.size()))};
}

}  // namespace qcmi
