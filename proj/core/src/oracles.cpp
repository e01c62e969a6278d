#include "qcmi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "qcmi/error.hpp"

namespace qcmi {

namespace {

// Flat search state: q[cell·na + a] = P(α=a | cell), cell = x·ny + y.
struct Problem {
  int nx, ny, na;
  std::vector<double> target;
  long evals = 0;

  // (1/2)·H(x:y|α) of P = target·q, bits.
  double value(const std::vector<double>& q) {
    ++evals;
    double total = 0.0;
    for (int a = 0; a < na; ++a) {
      double pa = 0.0;
      double px[16] = {}, py[16] = {};
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
          const double p = target[x * ny + y] * q[(x * ny + y) * na + a];
          px[x] += p;
          py[y] += p;
          pa += p;
        }
      if (pa <= 0.0) continue;
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
          const double p = target[x * ny + y] * q[(x * ny + y) * na + a];
          if (p > 0.0) total += p * std::log2(p * pa / (px[x] * py[y]));
        }
    }
    return 0.5 * std::max(total, 0.0);
  }
};

std::vector<double> dirichlet_start(const Problem& pr, double concentration, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> q(static_cast<std::size_t>(pr.nx) * pr.ny * pr.na);
  for (int c = 0; c < pr.nx * pr.ny; ++c) {
    double s = 0.0;
    for (int a = 0; a < pr.na; ++a) s += (q[c * pr.na + a] = gamma(rng) + 1e-300);
    for (int a = 0; a < pr.na; ++a) q[c * pr.na + a] /= s;
  }
  return q;
}

// Best split u·s / (1−u)·s of the mass of q[i] + q[j]; updates q and f.
void line_search(Problem& pr, std::vector<double>& q, std::size_t i, std::size_t j, double& f) {
  const double s = q[i] + q[j];
  if (s <= 0.0) return;
  auto eval = [&](double u) {
    const double qi = q[i], qj = q[j];
    q[i] = u * s;
    q[j] = (1.0 - u) * s;
    const double v = pr.value(q);
    q[i] = qi;
    q[j] = qj;
    return v;
  };
  constexpr int grid = 16;
  double best_u = q[i] / s, best = f;
  for (int k = 0; k <= grid; ++k) {
    const double u = static_cast<double>(k) / grid;
    const double v = eval(u);
    if (v < best) {
      best = v;
      best_u = u;
    }
  }
  // Golden section around the best grid point (or the current split).
  double lo = std::max(0.0, best_u - 1.0 / grid);
  double hi = std::min(1.0, best_u + 1.0 / grid);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 40 && hi - lo > 1e-13; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = eval(d);
    }
  }
  if (fc < best) {
    best = fc;
    best_u = c;
  }
  if (fd < best) {
    best = fd;
    best_u = d;
  }
  if (best < f) {
    q[i] = best_u * s;
    q[j] = (1.0 - best_u) * s;
    f = best;
  }
}

double descend(Problem& pr, std::vector<double> q, double f, long stop_at) {
  while (pr.evals < stop_at) {
    const double before = f;
    for (int cell = 0; cell < pr.nx * pr.ny; ++cell) {
      if (pr.target[cell] <= 0.0) continue;
      for (int a = 0; a < pr.na; ++a)
        for (int b = a + 1; b < pr.na; ++b)
          line_search(pr, q, static_cast<std::size_t>(cell) * pr.na + a, static_cast<std::size_t>(cell) * pr.na + b,
                      f);
    }
    if (before - f <= 1e-15) break;
  }
  return f;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::out_of_range, "binary entropy argument must lie in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double bell_mixture_eof(const std::array<double, 4>& m) {
  double sum = 0.0, mmax = 0.0;
  for (double v : m) {
    if (!(v >= -1e-10)) throw Error(ErrorKind::off_simplex, "Bell weight is negative");
    sum += v;
    mmax = std::max(mmax, v);
  }
  if (std::abs(sum - 1.0) > 1e-10) throw Error(ErrorKind::off_simplex, "Bell weights do not sum to 1");
  const double t = mmax < 0.5 ? 0.0 : (2.0 * mmax - 1.0) * (2.0 * mmax - 1.0);
  return binary_entropy(std::clamp(0.5 * (1.0 + std::sqrt(std::max(1.0 - t, 0.0))), 0.0, 1.0));
}

double pure_state_eof(const StateVector& psi, BipartiteDims dims) {
  if (psi.dim() != dims.total()) throw Error(ErrorKind::dimension_mismatch, "state dim != nx*ny");
  // Schmidt coefficients are the singular values of the nx × ny amplitude matrix.
  Matrix a(dims.nx, dims.ny);
  for (int x = 0; x < dims.nx; ++x)
    for (int y = 0; y < dims.ny; ++y) a(x, y) = psi.amplitudes()(x * dims.ny + y);
  const RealVector sv = Eigen::JacobiSVD<Matrix>(a).singularValues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = sv(i) * sv(i);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

double brute_force_classical(const ClassicalTarget& target, int nalpha, long budget, std::uint64_t seed) {
  target.validate();
  if (nalpha < 1) throw Error(ErrorKind::out_of_range, "nalpha must be >= 1");
  if (target.nx * target.ny * nalpha > kBruteForceMaxCells) {
    std::ostringstream os;
    os << "nx*ny*nalpha = " << target.nx * target.ny * nalpha << " exceeds " << kBruteForceMaxCells;
    throw Error(ErrorKind::size_cap, os.str());
  }
  if (budget < 10000) throw Error(ErrorKind::out_of_range, "budget must be >= 1e4");

  Problem pr{target.nx, target.ny, nalpha, target.p};
  std::mt19937_64 rng(seed);

  // Multistart: sample, keep the best few as descent seeds.
  constexpr std::size_t keep = 6;
  std::vector<std::pair<double, std::vector<double>>> pool;
  const long sampling = budget / 5;
  for (long s = 0; pr.evals < sampling; ++s) {
    std::vector<double> q = dirichlet_start(pr, s % 2 == 0 ? 1.0 : 0.25, rng);
    const double f = pr.value(q);
    pool.emplace_back(f, std::move(q));
    if (pool.size() > 4 * keep) {
      std::sort(pool.begin(), pool.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      pool.resize(keep);
    }
  }
  std::sort(pool.begin(), pool.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  if (pool.size() > keep) pool.resize(keep);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pool) best = std::min(best, p.first);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const long remaining = budget - pr.evals;
    const long share = remaining / static_cast<long>(pool.size() - k);
    best = std::min(best, descend(pr, pool[k].second, pool[k].first, pr.evals + share));
  }
  return best;
}

}  // namespace qcmi
