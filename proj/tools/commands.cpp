#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qcmi/classical.hpp"
#include "qcmi/error.hpp"
#include "qcmi/quantum.hpp"
#include "qcmi/state_file.hpp"
#include "qcmi/states.hpp"

namespace qcmi::cli {

namespace {

using json = nlohmann::ordered_json;

json complex_list(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back({m(i, j).real(), m(i, j).imag()});
  return a;
}

json quantum_report(const SolverReport& r, const std::string& mode, BipartiteDims dims) {
  json j;
  j["mode"] = mode;
  j["nx"] = dims.nx;
  j["ny"] = dims.ny;
  j["nalpha"] = r.ensemble.size();
  j["seed"] = r.seed;
  j["entanglement_bits"] = r.entanglement_bits;
  j["dual_bits"] = r.dual_bits;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["final_residual"] = r.final_residual;
  json members = json::array();
  for (const auto& k : r.ensemble.members) {
    json m;
    m["weight"] = k.trace();
    if (r.ensemble.kind == EnsembleKind::pure) {
      const WeightedState ws = top_eigenpair(k);
      m["psi"] = complex_list(ws.psi);
    } else {
      m["matrix"] = complex_list(k.matrix());
    }
    members.push_back(std::move(m));
  }
  j["members"] = std::move(members);
  j["delta"] = complex_list(r.delta.delta.matrix());
  return j;
}

json classical_report(const ClassicalReport& r, BipartiteDims dims) {
  json j;
  j["mode"] = "classical";
  j["nx"] = dims.nx;
  j["ny"] = dims.ny;
  const JointDistribution& p = r.distribution;
  j["nalpha"] = p.nalpha();
  j["seed"] = r.seed;
  j["entanglement_bits"] = r.entanglement_bits;
  j["dual_bits"] = r.dual_bits;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["final_residual"] = r.residual_history.empty() ? 0.0 : r.residual_history.back();
  json members = json::array();
  for (int a = 0; a < p.nalpha(); ++a) {
    const double w = p.marginal_a(a);
    json cond = json::array();
    for (int x = 0; x < p.nx(); ++x)
      for (int y = 0; y < p.ny(); ++y) cond.push_back(w > 0.0 ? p(x, y, a) / w : 0.0);
    members.push_back({{"weight", w}, {"p_xy_given_alpha", std::move(cond)}});
  }
  j["members"] = std::move(members);
  j["delta"] = r.delta.values;
  return j;
}

ClassicalTarget diagonal_target(const StateFile& s) {
  ClassicalTarget t{s.dims.nx, s.dims.ny, {}};
  double total = 0.0;
  for (int i = 0; i < s.dims.total(); ++i) total += std::max(s.rho(i, i).real(), 0.0);
  for (int i = 0; i < s.dims.total(); ++i) t.p.push_back(std::max(s.rho(i, i).real(), 0.0) / total);
  return t;
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path);
  if (!(f << text)) {
    err << "error: io: cannot write " << path << '\n';
    return false;
  }
  return true;
}

}  // namespace

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const StateFile s = read_state_file(o.state_path);
    json report;
    double e = 0.0, dual = 0.0, residual = 0.0;
    int iterations = 0;
    bool converged = false;
    if (o.mode == "classical") {
      SolverConfig cfg = SolverConfig::classical_defaults();
      if (o.tol) cfg.tol = *o.tol;
      if (o.max_iter) cfg.max_iter = *o.max_iter;
      cfg.restarts = o.restarts;
      cfg.seed = o.seed;
      const int na = o.nalpha > 0 ? o.nalpha : s.dims.total();
      const ClassicalReport r = classical_solve(diagonal_target(s), na, cfg);
      report = classical_report(r, s.dims);
      e = r.entanglement_bits;
      dual = r.dual_bits;
      iterations = r.iterations;
      converged = r.converged;
      residual = r.residual_history.empty() ? 0.0 : r.residual_history.back();
    } else if (o.mode == "pure" || o.mode == "mixed") {
      SolverConfig cfg = SolverConfig::quantum_defaults();
      if (o.tol) cfg.tol = *o.tol;
      if (o.max_iter) cfg.max_iter = *o.max_iter;
      cfg.restarts = o.restarts;
      cfg.seed = o.seed;
      const SolverReport r = o.mode == "pure" ? pure_solve(s.rho, s.dims, o.nalpha, cfg)
                                              : mixed_solve(s.rho, s.dims, o.nalpha, cfg);
      report = quantum_report(r, o.mode, s.dims);
      e = r.entanglement_bits;
      dual = r.dual_bits;
      iterations = r.iterations;
      converged = r.converged;
      residual = r.final_residual;
    } else {
      err << "error: unknown mode '" << o.mode << "' (pure|mixed|classical)\n";
      return kUsage;
    }

    if (!o.out.empty() && !write_text(o.out, report.dump(2) + "\n", out, err)) return kUsage;
    if (o.json) {
      out << report.dump(2) << '\n';
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "mode        %s\ndims        %d x %d\nnalpha      %d\n", o.mode.c_str(),
                    s.dims.nx, s.dims.ny, report["nalpha"].get<int>());
      out << line;
      std::snprintf(line, sizeof line, "E           %.10f bits\nE (dual)    %.10f bits\n", e, dual);
      out << line;
      std::snprintf(line, sizeof line, "iterations  %d\nresidual    %.3e\nconverged   %s\n", iterations, residual,
                    converged ? "yes" : "no");
      out << line;
    }
    if (!converged) err << "warning: not converged after " << iterations << " iterations\n";
    return converged ? kOk : kNotConverged;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  }
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* dst = &out;
    if (!o.out.empty() && o.out != "-") {
      file.open(o.out);
      if (!file) throw Error(ErrorKind::io, "cannot write " + o.out);
      dst = &file;
    }
    const std::vector<SweepRow> rows = run_sweep(o.spec);
    write_sweep_csv(*dst, rows);
    if (!*dst) throw Error(ErrorKind::io, "write failed: " + o.out);
    int stalled = 0;
    for (const auto& r : rows) stalled += r.converged ? 0 : 1;
    if (stalled > 0) err << "note: " << stalled << " of " << rows.size() << " points did not converge\n";
    return kOk;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  }
}

int cmd_make_state(const MakeStateOptions& o, std::ostream& out, std::ostream& err) {
  try {
    StateFile s;
    if (o.family == "werner") {
      s = {{2, 2}, werner(o.param)};
    } else if (o.family == "horodecki") {
      s = {{3, 3}, horodecki(o.param)};
    } else if (o.family == "bell-mixture") {
      s = {{2, 2}, bell_mixture(o.weights)};
    } else if (o.family == "random") {
      if (o.nx < 1 || o.ny < 1) throw Error(ErrorKind::out_of_range, "nx and ny must be >= 1");
      s = {{o.nx, o.ny}, random_density_matrix(o.nx * o.ny, o.rank, o.seed)};
    } else {
      err << "error: unknown family '" << o.family << "' (werner|horodecki|bell-mixture|random)\n";
      return kUsage;
    }
    std::ostringstream text;
    write_state(text, s);
    return write_text(o.out, text.str(), out, err) ? kOk : kUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  }
}

}  // namespace qcmi::cli
