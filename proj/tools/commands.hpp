#pragma once

// Command implementations behind the qcmi executable. Each returns the
// process exit code and writes to the given streams.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qcmi/sweep.hpp"

namespace qcmi::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,  // bad flags, unreadable or invalid input, unwritable output
  kNotConverged = 2,
  kVerifyFailed = 3,
};

struct SolveOptions {
  std::string state_path;
  std::string mode = "pure";  // pure | mixed | classical
  int nalpha = 0;             // 0 = default for the mode
  std::optional<double> tol;
  std::optional<int> max_iter;
  int restarts = 1;
  std::uint64_t seed = 1;
  std::string out;  // decomposition + report as JSON
  bool json = false;
};

struct SweepOptions {
  SweepSpec spec;
  std::string out = "-";
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int sizes = 10;  // cases per suite
  std::string state_path;
};

struct MakeStateOptions {
  std::string family;  // werner | horodecki | bell-mixture | random
  double param = 0.0;
  std::array<double, 4> weights{};
  int nx = 2, ny = 2, rank = 1;
  std::uint64_t seed = 1;
  std::string out = "-";
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err);
int cmd_make_state(const MakeStateOptions& o, std::ostream& out, std::ostream& err);

}  // namespace qcmi::cli
