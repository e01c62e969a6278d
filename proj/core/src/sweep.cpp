#include "qcmi/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "qcmi/classical.hpp"
#include "qcmi/error.hpp"
#include "qcmi/oracles.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/states.hpp"

namespace qcmi {

namespace {

SweepRow run_point(const SweepSpec& spec, double param, std::uint64_t seed) {
  SweepRow row;
  row.param = param;
  const HermitianMatrix rho = family_state(spec.family, param);
  const BipartiteDims dims = family_dims(spec.family);
  if (spec.family == Family::werner) row.e_oracle = bell_mixture_eof(werner_weights(param));

  SolverConfig q = spec.quantum;
  q.seed = seed;
  if (spec.mode == SweepMode::both || spec.mode == SweepMode::pure) {
    const SolverReport r = pure_solve(rho, dims, spec.nalpha, q);
    row.e_pure = r.entanglement_bits;
    row.iters_pure = r.iterations;
    row.converged = row.converged && r.converged;
  }
  if (spec.mode == SweepMode::both || spec.mode == SweepMode::mixed) {
    const SolverReport r = mixed_solve(rho, dims, spec.nalpha, q);
    row.e_mixed = r.entanglement_bits;
    row.iters_mixed = r.iterations;
    row.converged = row.converged && r.converged;
  }
  if (spec.mode == SweepMode::classical_diag) {
    ClassicalTarget t{dims.nx, dims.ny, {}};
    double total = 0.0;
    for (int i = 0; i < dims.total(); ++i) total += std::max(rho(i, i).real(), 0.0);
    for (int i = 0; i < dims.total(); ++i) t.p.push_back(std::max(rho(i, i).real(), 0.0) / total);
    SolverConfig c = spec.classical;
    c.seed = seed;
    const ClassicalReport r = classical_solve(t, spec.nalpha, c);
    row.e_mixed = r.entanglement_bits;
    row.iters_mixed = r.iterations;
    row.converged = r.converged;
  }
  return row;
}

void put_number(std::ostream& out, const std::optional<double>& v) {
  if (!v) return;
  char buf[40];
  // Values that round to zero print as 0 rather than -0.
  std::snprintf(buf, sizeof buf, "%.10f", std::abs(*v) < 5e-11 ? 0.0 : *v);
  out << buf;
}

void put_int(std::ostream& out, const std::optional<int>& v) {
  if (v) out << *v;
}

}  // namespace

SweepSpec SweepSpec::defaults(Family family) {
  SweepSpec s;
  s.family = family;
  if (family == Family::horodecki) {
    s.from = 2.0;
    s.to = 5.0;
    s.step = 0.25;
    s.nalpha = 12;
  }
  return s;
}

void SweepSpec::validate() const {
  if (!(step > 0.0)) throw Error(ErrorKind::out_of_range, "sweep step must be positive");
  if (!(from <= to)) throw Error(ErrorKind::out_of_range, "sweep needs from <= to");
  const double lo = family == Family::werner ? 0.0 : 2.0;
  const double hi = family == Family::werner ? 1.0 : 5.0;
  if (from < lo || to > hi) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "sweep range must lie in [%g, %g]", lo, hi);
    throw Error(ErrorKind::out_of_range, buf);
  }
  if (nalpha < 0) throw Error(ErrorKind::out_of_range, "nalpha must be >= 1 (0 selects the default)");
  if (workers < 1) throw Error(ErrorKind::out_of_range, "workers must be >= 1");
  quantum.validate();
  classical.validate();
}

std::vector<double> SweepSpec::grid() const {
  const long n = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> g;
  g.reserve(n);
  for (long i = 0; i < n; ++i) g.push_back(std::min(from + static_cast<double>(i) * step, to));
  return g;
}

HermitianMatrix family_state(Family family, double param) {
  return family == Family::werner ? werner(param) : horodecki(param);
}

BipartiteDims family_dims(Family family) {
  return family == Family::werner ? BipartiteDims{2, 2} : BipartiteDims{3, 3};
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> g = spec.grid();
  std::vector<SweepRow> rows(g.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < g.size() && !failed; i = next++) {
      try {
        rows[i] = run_point(spec, g[i], derive_seed(spec.quantum.seed, i));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(spec.workers, static_cast<int>(g.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", r.param);
    out << buf << ',';
    put_number(out, r.e_pure);
    out << ',';
    put_number(out, r.e_mixed);
    out << ',';
    put_number(out, r.e_oracle);
    out << ',';
    put_int(out, r.iters_pure);
    out << ',';
    put_int(out, r.iters_mixed);
    out << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

std::optional<Family> parse_family(const std::string& s) {
  if (s == "werner") return Family::werner;
  if (s == "horodecki") return Family::horodecki;
  return std::nullopt;
}

std::optional<SweepMode> parse_sweep_mode(const std::string& s) {
  if (s == "both") return SweepMode::both;
  if (s == "pure") return SweepMode::pure;
  if (s == "mixed") return SweepMode::mixed;
  if (s == "classical-diag" || s == "classical") return SweepMode::classical_diag;
  return std::nullopt;
}

}  // namespace qcmi
