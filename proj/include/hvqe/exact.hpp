#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "hvqe/lattice.hpp"

namespace hvqe {

struct GroundStateResult {
  double energy = 0.0;
  double residual = 0.0;  // ||Hv - E v||
  int iterations = 0;
  bool converged = false;
  std::optional<std::vector<std::complex<double>>> eigenvector;
  std::vector<double> ritz_trace;  // lowest Ritz value per iteration
};

/// Lanczos with full reorthogonalization and explicit restart from the best
/// Ritz vector; matrix-free H*v through the Pauli-term kernels.
GroundStateResult ground_state_lanczos(const Hamiltonian& h, double tol = 1e-10,
                                       int max_iter = 300, bool want_vector = false,
                                       std::uint64_t seed = 12345);

/// Minimum eigenvalue from a full dense Hermitian eigendecomposition
/// (independent oracle, N <= 12).
double dense_ground_energy(const Hamiltonian& h);

/// Infinite-ring ground energy per spin in Pauli units: 1 - 4 ln 2.
double bethe_reference();

}  // namespace hvqe
