#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace qcmi;
using namespace qcmi::cli;

namespace {

void add_quantum_flags(CLI::App* app, SolverConfig& cfg) {
  app->add_option("--tol", cfg.tol, "stopping tolerance");
  app->add_option("--max-iter", cfg.max_iter, "iteration cap per restart");
  app->add_option("--restarts", cfg.restarts, "independent seeded starts; minimum is kept");
  app->add_option("--seed", cfg.seed, "base seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcmi: entanglement of formation and CMI minima by alternating minimization"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "minimize the CMI for a state file");
  solve_cmd->add_option("state", solve.state_path, "state file (nx ny, then (nx*ny)^2 lines 're im')")->required();
  solve_cmd->add_option("--mode", solve.mode, "pure | mixed | classical")
      ->check(CLI::IsMember({"pure", "mixed", "classical"}));
  solve_cmd->add_option("--nalpha", solve.nalpha, "ensemble size (default (nx*ny)^2, classical nx*ny)");
  solve_cmd->add_option("--tol", solve.tol, "stopping tolerance");
  solve_cmd->add_option("--max-iter", solve.max_iter, "iteration cap per restart");
  solve_cmd->add_option("--restarts", solve.restarts, "independent seeded starts; minimum is kept");
  solve_cmd->add_option("--seed", solve.seed, "base seed");
  solve_cmd->add_option("--out", solve.out, "write the report and optimal decomposition as JSON");
  solve_cmd->add_flag("--json", solve.json, "print the JSON report instead of the summary");

  SweepOptions sweep;
  std::string family = "werner", mode = "both";
  double from = -1, to = -1, step = -1;
  int nalpha = -1;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep the Werner or Horodecki family and write CSV");
  sweep_cmd->add_option("--family", family, "werner | horodecki")->check(CLI::IsMember({"werner", "horodecki"}));
  sweep_cmd->add_option("--from", from, "first parameter");
  sweep_cmd->add_option("--to", to, "last parameter");
  sweep_cmd->add_option("--step", step, "grid step");
  sweep_cmd->add_option("--nalpha", nalpha, "ensemble size (default 6 Werner, 12 Horodecki)");
  sweep_cmd->add_option("--mode", mode, "both | pure | mixed | classical-diag")
      ->check(CLI::IsMember({"both", "pure", "mixed", "classical", "classical-diag"}));
  sweep_cmd->add_option("--workers", sweep.spec.workers, "grid points solved in parallel");
  sweep_cmd->add_option("--out", sweep.out, "CSV path, '-' for stdout");
  add_quantum_flags(sweep_cmd, sweep.spec.quantum);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant and oracle suites");
  verify_cmd->add_option("--seed", verify.seed, "base seed");
  verify_cmd->add_option("--sizes", verify.sizes, "cases per suite");
  verify_cmd->add_option("--state", verify.state_path, "also check that this state file parses");

  MakeStateOptions make;
  std::vector<double> weights;
  auto* make_cmd = app.add_subcommand("make-state", "write a state file");
  make_cmd->add_option("family", make.family, "werner | horodecki | bell-mixture | random")->required();
  make_cmd->add_option("--param", make.param, "F for werner, alpha for horodecki");
  make_cmd->add_option("--weights", weights, "four Bell weights (phi+, phi-, psi+, psi-)")->expected(4)->delimiter(',');
  make_cmd->add_option("--nx", make.nx, "random: dim of x");
  make_cmd->add_option("--ny", make.ny, "random: dim of y");
  make_cmd->add_option("--rank", make.rank, "random: rank (1 gives a pure state)");
  make_cmd->add_option("--seed", make.seed, "random: seed");
  make_cmd->add_option("--out", make.out, "output path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*solve_cmd) return cmd_solve(solve, std::cout, std::cerr);
  if (*sweep_cmd) {
    const Family f = *parse_family(family);
    SweepSpec& s = sweep.spec;
    const SweepSpec d = SweepSpec::defaults(f);
    s.family = f;
    s.from = from >= 0 ? from : d.from;
    s.to = to >= 0 ? to : d.to;
    s.step = step > 0 ? step : d.step;
    s.nalpha = nalpha >= 0 ? nalpha : d.nalpha;
    s.mode = *parse_sweep_mode(mode);
    return cmd_sweep(sweep, std::cout, std::cerr);
  }
  if (*verify_cmd) return cmd_verify(verify, std::cout, std::cerr);
  if (!weights.empty()) std::copy(weights.begin(), weights.end(), make.weights.begin());
  return cmd_make_state(make, std::cout, std::cerr);
}
