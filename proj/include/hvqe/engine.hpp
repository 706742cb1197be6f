#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hvqe/ansatz.hpp"
#include "hvqe/circuit.hpp"
#include "hvqe/lattice.hpp"

namespace hvqe {

/// Dense 2^N amplitude array. Little-endian index convention: bit b of the
/// integer index is the state of qubit b; bit 1 means spin-down
/// (sigma^z eigenvalue -1).
struct StateVector {
  int nqubits = 0;
  std::vector<std::complex<double>> amps;

  std::size_t dim() const { return amps.size(); }
  double norm() const;
};

StateVector prepare_basis_state(int nqubits, const std::string& bitstring);

void apply_gate(StateVector& sv, const Gate& g, const std::vector<double>& parameters);

void apply_circuit(StateVector& sv, const Circuit& c, const std::vector<double>& parameters);

/// One-pass exp(-i theta P) kernel (P squares to identity). Same unitary as
/// the compiled gate fragment; used as the fast evaluation path.
void apply_pauli_rotation(StateVector& sv, const PauliTerm& term, double theta);

/// Applies every ansatz generator in order with its slot angle.
void apply_ansatz(StateVector& sv, const AnsatzSpec& spec, const std::vector<double>& parameters);

/// <psi|H|psi>; the imaginary part must vanish to 1e-10 and is discarded.
double expectation(const StateVector& sv, const Hamiltonian& h);

/// <psi| sum_i sigma_i^z |psi>.
double magnetization_z(const StateVector& sv);

/// |<a|b>|^2.
double overlap_sq(const StateVector& a, const StateVector& b);

struct SampledEnergy {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Three-setting (all-X, all-Y, all-Z) shot-based estimate; shots split
/// equally with the remainder going to Z. Deterministic under seed.
SampledEnergy estimate_energy_sampled(const StateVector& sv, const Hamiltonian& h,
                                      long shots, std::uint64_t seed);

/// y = y + coeff * P x, one pass per term; shared by expectation and Lanczos.
void accumulate_pauli_apply(const PauliTerm& term, const std::vector<std::complex<double>>& x,
                            std::vector<std::complex<double>>& y);

/// Binary dump: little-endian float64 (re, im) pairs in index order.
void dump_state(const StateVector& sv, const std::string& path);

}  // namespace hvqe
