#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hvqe/circuit.hpp"
#include "hvqe/pauli.hpp"

namespace hvqe {

// Dense verification oracles. Deliberately built from gate/Pauli matrices and
// Eigen decompositions, not from the state-vector kernels they check.

/// Dense matrix of the coefficient-stripped Pauli product on n qubits
/// (little-endian: bit b of the index is qubit b).
Eigen::MatrixXcd pauli_dense(int nqubits, const PauliTerm& term);

/// exp(-i theta P) via Hermitian eigendecomposition of P.
Eigen::MatrixXcd pauli_exponential_dense(int nqubits, const PauliTerm& term, double theta);

/// Product of gate matrices in application order; requires nqubits <= 10 and
/// every slot bound.
Eigen::MatrixXcd circuit_unitary(const Circuit& c, const std::vector<double>& parameters);

/// max |A - e^{i phi} B| after aligning on the largest element of A.
double phase_aligned_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace hvqe
