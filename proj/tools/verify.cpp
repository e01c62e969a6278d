#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "qcmi/classical.hpp"
#include "qcmi/error.hpp"
#include "qcmi/oracles.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/state_file.hpp"
#include "qcmi/states.hpp"

namespace qcmi::cli {

namespace {

struct Suite {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++total;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return v;
}

ClassicalTarget random_target(int nx, int ny, std::mt19937_64& rng) {
  return ClassicalTarget{nx, ny, random_simplex(static_cast<std::size_t>(nx) * ny, rng)};
}

Ensemble random_ensemble(BipartiteDims dims, int nalpha, std::uint64_t seed) {
  Ensemble e{dims, {}, EnsembleKind::mixed};
  std::mt19937_64 rng(seed);
  const std::vector<double> w = random_simplex(nalpha, rng);
  for (int a = 0; a < nalpha; ++a)
    e.members.push_back(w[a] * random_density_matrix(dims.total(), dims.total(), derive_seed(seed, a)));
  return e;
}

void state_file_suite(const VerifyOptions& o, Suite& s) {
  for (int k = 0; k < o.sizes; ++k) {
    const std::uint64_t seed = derive_seed(o.seed, 100 + k);
    const BipartiteDims dims{2 + k % 2, 2 + (k / 2) % 2};
    const StateFile in{dims, random_density_matrix(dims.total(), 1 + k % dims.total(), seed)};
    std::stringstream text;
    write_state(text, in);
    const StateFile back = parse_state(text);
    s.record(back.dims == in.dims && back.rho.matrix() == in.rho.matrix(), "round trip is not bit-exact");
  }
  if (!o.state_path.empty()) {
    try {
      read_state_file(o.state_path);
      s.record(true, "");
    } catch (const Error& e) {
      s.record(false, o.state_path + ": " + e.what());
    }
  }
}

void kl_suite(const VerifyOptions& o, Suite& s) {
  std::mt19937_64 rng(derive_seed(o.seed, 200));
  for (int k = 0; k < o.sizes; ++k) {
    const std::vector<double> p = random_simplex(6, rng), q = random_simplex(6, rng);
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += p[i] * std::log2(p[i] / q[i]);
    s.record(d >= -1e-10, fmt("classical KL %.3e < 0", d));
    const int dim = 2 + k % 4;
    const double dq = quantum_kl(random_density_matrix(dim, dim, derive_seed(o.seed, 300 + k)),
                                 random_density_matrix(dim, dim, derive_seed(o.seed, 400 + k)));
    s.record(dq >= -1e-10, fmt("quantum KL %.3e < 0", dq));
  }
}

void classical_lagrangian_suite(const VerifyOptions& o, Suite& s) {
  std::mt19937_64 rng(derive_seed(o.seed, 500));
  for (int k = 0; k < o.sizes; ++k) {
    const JointDistribution p(2, 3, 3, random_simplex(18, rng));
    const JointDistribution p2(2, 3, 3, random_simplex(18, rng));
    const double l = classical_lagrangian(p, p2) / std::numbers::ln2;
    const double parts = classical_lagrangian_decomposition(p, p2).total();
    s.record(std::abs(l - parts) <= 1e-8, fmt("L/ln2 = %.12f but KL terms sum to %.12f", l, parts));
    const double self = classical_lagrangian(p, p);
    s.record(classical_lagrangian(p, p2) >= self - 1e-10, "L(P,P') < L(P,P)");
  }
}

void quantum_lagrangian_suite(const VerifyOptions& o, Suite& s) {
  for (int k = 0; k < o.sizes; ++k) {
    const BipartiteDims dims{2, 2 + k % 2};
    const Ensemble e = random_ensemble(dims, 3, derive_seed(o.seed, 600 + k));
    const Ensemble e2 = random_ensemble(dims, 3, derive_seed(o.seed, 700 + k));
    const double l = quantum_lagrangian(e, e2) / std::numbers::ln2;
    const double parts = quantum_lagrangian_decomposition(e, e2).total();
    s.record(std::abs(l - parts) <= 1e-8, fmt("L/ln2 = %.12f but KL terms sum to %.12f", l, parts));
    s.record(quantum_lagrangian(e, e2) >= quantum_lagrangian(e, e) - 1e-8, "L(K,K') < L(K,K)");
  }
}

void embedding_suite(const VerifyOptions& o, Suite& s) {
  for (int k = 0; k < o.sizes; ++k) {
    std::mt19937_64 rng(derive_seed(o.seed, 800 + k));
    const int nx = 2 + k % 2, ny = 2 + (k / 2) % 2, na = 3 + k % 3;
    const ClassicalTarget t = random_target(nx, ny, rng);
    JointDistribution p = classical_initial(t, na, derive_seed(o.seed, 900 + k));
    const RealVector diag = Eigen::Map<const RealVector>(t.p.data(), t.p.size());
    const RhoGeometry geo = make_geometry(HermitianMatrix::diagonal(diag), {nx, ny});
    Ensemble e = diagonal_ensemble(p);
    EntanglementOperator delta = diagonal_delta(classical_delta(p));
    const SolverConfig cfg;
    std::mt19937_64 step_rng(cfg.seed);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      p = classical_step(p, t);
      StepResult st = mixed_step(e, delta, geo, cfg, step_rng);
      e = std::move(st.ensemble);
      delta = std::move(st.delta);
      const Ensemble ref = diagonal_ensemble(p);
      for (int a = 0; a < na; ++a)
        worst = std::max(worst, (e.members[a].matrix() - ref.members[a].matrix()).cwiseAbs().maxCoeff());
    }
    s.record(worst <= 1e-8, fmt("quantum and classical iterates differ by %.3e", worst));
  }
}

void classical_oracle_suite(const VerifyOptions& o, Suite& s) {
  std::mt19937_64 rng(derive_seed(o.seed, 1000));
  for (int k = 0; k < o.sizes; ++k) {
    const ClassicalTarget t = random_target(2, 2, rng);
    SolverConfig cfg = SolverConfig::classical_defaults();
    cfg.seed = derive_seed(o.seed, 1100 + k);
    for (int na : {1, 2}) {
      const double solved = classical_solve(t, na, cfg).entanglement_bits;
      const double oracle = brute_force_classical(t, na, 100000, derive_seed(o.seed, 1200 + k));
      s.record(std::abs(solved - oracle) <= 1e-3, fmt("solver %.6f vs oracle %.6f", solved, oracle));
    }
  }
}

void bell_oracle_suite(const VerifyOptions& o, Suite& s) {
  SolverConfig cfg;
  cfg.seed = o.seed;
  for (double f : {0.6, 0.75, 0.9, 1.0}) {
    const double solved = pure_solve(werner(f), {2, 2}, 6, cfg).entanglement_bits;
    const double oracle = bell_mixture_eof(werner_weights(f));
    s.record(std::abs(solved - oracle) <= 5e-3, fmt("E_pure %.6f vs formula %.6f", solved, oracle));
  }
}

}  // namespace

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  if (o.sizes < 1) {
    err << "error: sizes must be >= 1\n";
    return kUsage;
  }
  using Runner = void (*)(const VerifyOptions&, Suite&);
  const std::vector<std::pair<const char*, Runner>> suites = {
      {"state-file", state_file_suite},
      {"kl-nonnegativity", kl_suite},
      {"classical-lagrangian", classical_lagrangian_suite},
      {"quantum-lagrangian", quantum_lagrangian_suite},
      {"diagonal-embedding", embedding_suite},
      {"classical-oracle", classical_oracle_suite},
      {"bell-oracle", bell_oracle_suite},
  };
  bool all = true;
  for (const auto& [name, run] : suites) {
    Suite s;
    s.name = name;
    try {
      run(o, s);
    } catch (const Error& e) {
      s.record(false, e.what());
    }
    const bool ok = s.passed == s.total;
    all = all && ok;
    char line[96];
    std::snprintf(line, sizeof line, "%s  %-22s %d/%d", ok ? "PASS" : "FAIL", s.name.c_str(), s.passed, s.total);
    out << line;
    if (!ok) out << "  " << s.first_failure;
    out << '\n';
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace qcmi::cli
