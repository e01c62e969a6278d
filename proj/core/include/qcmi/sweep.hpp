#pragma once

// Parameter sweeps over the Werner and Horodecki families.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcmi/hermitian.hpp"
#include "qcmi/solver_config.hpp"

namespace qcmi {

enum class Family { werner, horodecki };
/// classical_diag runs the classical solver on the computational-basis
/// diagonal of ρ and reports E_cla in the E_mixed column.
enum class SweepMode { both, pure, mixed, classical_diag };

struct SweepSpec {
  Family family = Family::werner;
  double from = 0.5;
  double to = 1.0;
  double step = 0.05;
  int nalpha = 6;
  SweepMode mode = SweepMode::both;
  int workers = 1;
  SolverConfig quantum = SolverConfig::quantum_defaults();
  SolverConfig classical = SolverConfig::classical_defaults();

  /// Werner: [0.5, 1] step 0.05, nalpha 6. Horodecki: [2, 5] step 0.25, nalpha 12.
  static SweepSpec defaults(Family family);
  /// Throws Error{out_of_range} unless from ≤ to, step > 0 and the grid lies in the family's domain.
  void validate() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double param = 0.0;
  std::optional<double> e_pure;
  std::optional<double> e_mixed;
  std::optional<double> e_oracle;
  std::optional<int> iters_pure;
  std::optional<int> iters_mixed;
  bool converged = true;
};

HermitianMatrix family_state(Family family, double param);
BipartiteDims family_dims(Family family);

/// Grid point i uses seed derive_seed(quantum.seed, i); rows come back in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepHeader = "param,E_pure,E_mixed,E_oracle,iters_pure,iters_mixed,converged";
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::optional<Family> parse_family(const std::string& s);
std::optional<SweepMode> parse_sweep_mode(const std::string& s);

}  // namespace qcmi
