#pragma once

// Plain-text density matrix files.
//
//   nx ny
//   re im        (nx·ny)² lines, row-major, |xy⟩ lexicographic
//
// Blank lines and lines starting with '#' are ignored.

#include <iosfwd>
#include <string>

#include "qcmi/hermitian.hpp"

namespace qcmi {

struct StateFile {
  BipartiteDims dims;
  HermitianMatrix rho;
};

/// Parses and validates (Hermitian, PSD, trace 1, all to 1e-8). Throws
/// Error{parse}, or the kind naming the violated invariant.
StateFile parse_state(std::istream& in);
StateFile read_state_file(const std::string& path);

/// %.17g round-trips every entry exactly.
void write_state(std::ostream& out, const StateFile& s);
void write_state_file(const std::string& path, const StateFile& s);

}  // namespace qcmi
