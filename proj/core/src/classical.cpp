#include "qcmi/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qcmi/error.hpp"

namespace qcmi {

void SolverConfig::validate() const {
  if (!(tol > 0)) throw Error(ErrorKind::out_of_range, "tol must be positive");
  if (!(w_floor > 0 && w_floor <= 1e-6)) throw Error(ErrorKind::out_of_range, "w_floor must lie in (0, 1e-6]");
  if (restarts < 1) throw Error(ErrorKind::out_of_range, "restarts must be >= 1");
  if (max_iter < 1) throw Error(ErrorKind::out_of_range, "max_iter must be >= 1");
  if (!(eps_kernel > 0)) throw Error(ErrorKind::out_of_range, "eps_kernel must be positive");
  if (!(damping > 0 && damping <= 1)) throw Error(ErrorKind::out_of_range, "damping must lie in (0, 1]");
  if (patience < 1) throw Error(ErrorKind::out_of_range, "patience must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

JointDistribution::JointDistribution(int nx, int ny, int nalpha, std::vector<double> p)
    : nx_(nx), ny_(ny), na_(nalpha), p_(std::move(p)) {
  if (nx < 1 || ny < 1 || nalpha < 1) throw Error(ErrorKind::dimension_mismatch, "JointDistribution sizes must be >= 1");
  if (p_.size() != static_cast<std::size_t>(nx) * ny * nalpha)
    throw Error(ErrorKind::dimension_mismatch, "JointDistribution: value count != nx*ny*nalpha");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error(ErrorKind::off_simplex, "JointDistribution: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "JointDistribution sums to " << sum;
    throw Error(ErrorKind::off_simplex, os.str());
  }
}

JointDistribution JointDistribution::zeros(int nx, int ny, int nalpha) {
  JointDistribution d;
  d.nx_ = nx;
  d.ny_ = ny;
  d.na_ = nalpha;
  d.p_.assign(static_cast<std::size_t>(nx) * ny * nalpha, 0.0);
  return d;
}

double JointDistribution::marginal_xy(int x, int y) const {
  double s = 0.0;
  for (int a = 0; a < na_; ++a) s += (*this)(x, y, a);
  return s;
}

double JointDistribution::marginal_xa(int x, int a) const {
  double s = 0.0;
  for (int y = 0; y < ny_; ++y) s += (*this)(x, y, a);
  return s;
}

double JointDistribution::marginal_ya(int y, int a) const {
  double s = 0.0;
  for (int x = 0; x < nx_; ++x) s += (*this)(x, y, a);
  return s;
}

double JointDistribution::marginal_a(int a) const {
  double s = 0.0;
  for (int x = 0; x < nx_; ++x)
    for (int y = 0; y < ny_; ++y) s += (*this)(x, y, a);
  return s;
}

void ClassicalTarget::validate() const {
  if (nx < 1 || ny < 1 || p.size() != static_cast<std::size_t>(nx) * ny)
    throw Error(ErrorKind::dimension_mismatch, "ClassicalTarget: value count != nx*ny");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw Error(ErrorKind::off_simplex, "ClassicalTarget: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorKind::off_simplex, "ClassicalTarget does not sum to 1");
}

JointDistribution classical_r(const JointDistribution& p) {
  JointDistribution r = JointDistribution::zeros(p.nx(), p.ny(), p.nalpha());
  for (int a = 0; a < p.nalpha(); ++a) {
    const double pa = p.marginal_a(a);
    if (pa <= 0.0) continue;
    std::vector<double> px(p.nx()), py(p.ny());
    for (int x = 0; x < p.nx(); ++x) px[x] = p.marginal_xa(x, a);
    for (int y = 0; y < p.ny(); ++y) py[y] = p.marginal_ya(y, a);
    for (int x = 0; x < p.nx(); ++x)
      for (int y = 0; y < p.ny(); ++y) r(x, y, a) = px[x] * py[y] / pa;
  }
  return r;
}

namespace {

// Σ P ln(P/Q) over P > 0; +∞ when Q = 0 there.
double kl_nats(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

}  // namespace

double classical_lagrangian(const JointDistribution& p, const JointDistribution& p2) {
  if (!p.same_shape(p2)) throw Error(ErrorKind::dimension_mismatch, "classical_lagrangian: shape mismatch");
  return kl_nats(p.values(), classical_r(p2).values());
}

double classical_cmi(const JointDistribution& p) {
  return std::max(0.0, kl_nats(p.values(), classical_r(p).values())) / std::numbers::ln2;
}

LagrangianDecomposition classical_lagrangian_decomposition(const JointDistribution& p,
                                                           const JointDistribution& p2) {
  if (!p.same_shape(p2)) throw Error(ErrorKind::dimension_mismatch, "classical_lagrangian_decomposition");
  LagrangianDecomposition d;
  const int nx = p.nx(), ny = p.ny(), na = p.nalpha();
  std::vector<double> wa(na), wa2(na);
  for (int a = 0; a < na; ++a) {
    wa[a] = p.marginal_a(a);
    wa2[a] = p2.marginal_a(a);
  }
  d.weights = kl_nats(wa, wa2);
  for (int a = 0; a < na; ++a) {
    if (wa[a] <= 0.0) continue;
    std::vector<double> pxy(nx * ny), prod(nx * ny), px(nx), py(ny), px2(nx), py2(ny);
    for (int x = 0; x < nx; ++x) {
      px[x] = p.marginal_xa(x, a) / wa[a];
      px2[x] = wa2[a] > 0 ? p2.marginal_xa(x, a) / wa2[a] : 0.0;
    }
    for (int y = 0; y < ny; ++y) {
      py[y] = p.marginal_ya(y, a) / wa[a];
      py2[y] = wa2[a] > 0 ? p2.marginal_ya(y, a) / wa2[a] : 0.0;
    }
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        pxy[x * ny + y] = p(x, y, a) / wa[a];
        prod[x * ny + y] = px[x] * py[y];
      }
    d.conditional_mi += wa[a] * kl_nats(pxy, prod);
    d.x_marginals += wa[a] * kl_nats(px, px2);
    d.y_marginals += wa[a] * kl_nats(py, py2);
  }
  d.weights /= std::numbers::ln2;
  d.conditional_mi /= std::numbers::ln2;
  d.x_marginals /= std::numbers::ln2;
  d.y_marginals /= std::numbers::ln2;
  return d;
}

JointDistribution classical_step(const JointDistribution& p, const ClassicalTarget& target) {
  if (target.nx != p.nx() || target.ny != p.ny()) throw Error(ErrorKind::dimension_mismatch, "classical_step");
  const JointDistribution r = classical_r(p);
  JointDistribution out = JointDistribution::zeros(p.nx(), p.ny(), p.nalpha());
  const int na = p.nalpha();
  for (int x = 0; x < p.nx(); ++x)
    for (int y = 0; y < p.ny(); ++y) {
      const double t = target(x, y);
      if (t <= 0.0) continue;
      const double rs = r.marginal_xy(x, y);
      for (int a = 0; a < na; ++a) out(x, y, a) = rs > 0.0 ? t * r(x, y, a) / rs : t / na;
    }
  return out;
}

ClassicalDelta classical_delta(const JointDistribution& p) {
  const JointDistribution r = classical_r(p);
  ClassicalDelta d{p.nx(), p.ny(), std::vector<double>(static_cast<std::size_t>(p.nx()) * p.ny(), 0.0)};
  for (int x = 0; x < p.nx(); ++x)
    for (int y = 0; y < p.ny(); ++y) {
      const double pxy = p.marginal_xy(x, y);
      if (pxy <= 0.0) continue;
      d.values[static_cast<std::size_t>(x) * p.ny() + y] = -std::log(r.marginal_xy(x, y) / pxy);
    }
  return d;
}

double classical_delta_expectation(const JointDistribution& p, const ClassicalDelta& delta) {
  double s = 0.0;
  for (int x = 0; x < p.nx(); ++x)
    for (int y = 0; y < p.ny(); ++y) {
      const double pxy = p.marginal_xy(x, y);
      if (pxy > 0.0) s += pxy * delta(x, y);
    }
  return s;
}

double classical_stationarity_residual(const JointDistribution& p) {
  const JointDistribution r = classical_r(p);
  const int na = p.nalpha();
  double worst = 0.0;
  for (int x = 0; x < p.nx(); ++x)
    for (int y = 0; y < p.ny(); ++y) {
      const double pxy = p.marginal_xy(x, y);
      if (pxy <= 0.0) continue;
      const double rs = r.marginal_xy(x, y);
      for (int a = 0; a < na; ++a) {
        const double want = rs > 0.0 ? pxy * r(x, y, a) / rs : pxy / na;
        worst = std::max(worst, std::abs(p(x, y, a) - want));
      }
    }
  return worst;
}

JointDistribution classical_initial(const ClassicalTarget& target, int nalpha, std::uint64_t seed) {
  target.validate();
  if (nalpha < 1) throw Error(ErrorKind::out_of_range, "nalpha must be >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  JointDistribution p = JointDistribution::zeros(target.nx, target.ny, nalpha);
  std::vector<double> u(nalpha);
  for (int x = 0; x < target.nx; ++x)
    for (int y = 0; y < target.ny; ++y) {
      double s = 0.0;
      for (double& v : u) s += (v = expo(rng));
      for (int a = 0; a < nalpha; ++a) p(x, y, a) = target(x, y) * u[a] / s;
    }
  return p;
}

ClassicalTarget marginal_target(const JointDistribution& p) {
  ClassicalTarget t{p.nx(), p.ny(), std::vector<double>(static_cast<std::size_t>(p.nx()) * p.ny())};
  for (int x = 0; x < p.nx(); ++x)
    for (int y = 0; y < p.ny(); ++y) t.p[static_cast<std::size_t>(x) * p.ny() + y] = p.marginal_xy(x, y);
  return t;
}

ClassicalReport classical_solve_from(JointDistribution start, const ClassicalTarget& target,
                                     const SolverConfig& cfg) {
  cfg.validate();
  ClassicalReport rep;
  JointDistribution p = std::move(start);
  double prev = classical_cmi(p);
  int streak = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    p = classical_step(p, target);
    const double cmi = classical_cmi(p);
    const double res = classical_stationarity_residual(p);
    rep.cmi_history.push_back(cmi);
    rep.residual_history.push_back(res);
    rep.iterations = it + 1;
    streak = (res < cfg.tol && std::abs(cmi - prev) < cfg.tol) ? streak + 1 : 0;
    prev = cmi;
    if (streak >= cfg.patience) {
      rep.converged = true;
      break;
    }
  }
  rep.delta = classical_delta(p);
  rep.entanglement_bits = 0.5 * classical_cmi(p);
  rep.dual_bits = classical_delta_expectation(p, rep.delta) / (2.0 * std::numbers::ln2);
  rep.distribution = std::move(p);
  return rep;
}

ClassicalReport classical_solve(const ClassicalTarget& target, int nalpha, const SolverConfig& cfg) {
  target.validate();
  cfg.validate();
  if (nalpha < 1) throw Error(ErrorKind::out_of_range, "nalpha must be >= 1");
  ClassicalReport best;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = r == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    ClassicalReport rep = classical_solve_from(classical_initial(target, nalpha, seed), target, cfg);
    rep.seed = seed;
    if (!have || rep.entanglement_bits < best.entanglement_bits) {
      best = std::move(rep);
      have = true;
    }
  }
  return best;
}

}  // namespace qcmi
