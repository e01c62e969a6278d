#pragma once

// Ground truth computed without the iterative solvers.

#include <array>
#include <cstdint>

#include "qcmi/classical.hpp"
#include "qcmi/hermitian.hpp"
#include "qcmi/states.hpp"

namespace qcmi {

/// h(p) = −p log2 p − (1−p) log2(1−p). Throws Error{out_of_range} off [0,1].
double binary_entropy(double p);

/// Entanglement of formation of a Bell mixture, bits:
/// t = 0 if m_max < 1/2 else (2 m_max − 1)², E = h((1 + √(1−t))/2).
double bell_mixture_eof(const std::array<double, 4>& m);

/// S(tr_y |ψ⟩⟨ψ|) in bits.
double pure_state_eof(const StateVector& psi, BipartiteDims dims);

/// Largest nx·ny·nalpha accepted by brute_force_classical.
inline constexpr int kBruteForceMaxCells = 16;

/// (1/2)·min CMI over P(x,y,α) with the target (x,y) marginal, bits.
/// Seeded Dirichlet multistart followed by coordinate descent that moves
/// mass between two α inside one (x,y) cell, with a direct line search on
/// the CMI. `budget` counts CMI evaluations (≥ 1e4). The result is the
/// smallest value evaluated at a feasible point.
double brute_force_classical(const ClassicalTarget& target, int nalpha, long budget, std::uint64_t seed);

}  // namespace qcmi
