#include "hvqe/unitary.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace hvqe {

using Eigen::MatrixXcd;
using cd = std::complex<double>;

namespace {

MatrixXcd single_qubit_full(int nqubits, int q, const Eigen::Matrix2cd& m) {
  const std::size_t dim = std::size_t{1} << nqubits;
  const std::size_t bit = std::size_t{1} << q;
  MatrixXcd full = MatrixXcd::Zero(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    if (j & bit) continue;
    std::size_t j1 = j | bit;
    full(j, j) = m(0, 0);
    full(j, j1) = m(0, 1);
    full(j1, j) = m(1, 0);
    full(j1, j1) = m(1, 1);
  }
  return full;
}

MatrixXcd cnot_full(int nqubits, int control, int target) {
  const std::size_t dim = std::size_t{1} << nqubits;
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  MatrixXcd full = MatrixXcd::Zero(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    full((j & cbit) ? (j ^ tbit) : j, j) = 1.0;
  return full;
}

Eigen::Matrix2cd rotation_matrix(GateKind k, double angle) {
  const cd i(0.0, 1.0);
  Eigen::Matrix2cd m;
  double half = angle / 2.0;
  switch (k) {
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::RXplus:
    case GateKind::RXminus: {
      double t = (k == GateKind::RXplus ? M_PI : -M_PI) / 4.0;
      m << std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t);
      return m;
    }
    case GateKind::RYplus:
    case GateKind::RYminus: {
      double t = (k == GateKind::RYplus ? M_PI : -M_PI) / 4.0;
      m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      return m;
    }
    case GateKind::RZ:
      m << std::exp(-i * half), 0, 0, std::exp(i * half);
      return m;
    default:
      throw std::invalid_argument("not a single-qubit gate");
  }
}

}  // namespace

MatrixXcd pauli_dense(int nqubits, const PauliTerm& term) {
  const std::size_t dim = std::size_t{1} << nqubits;
  std::size_t flip = 0, phase_mask = 0;
  int ycount = 0;
  for (std::size_t i = 0; i < term.sites.size(); ++i) {
    std::size_t bit = std::size_t{1} << term.sites[i];
    char a = term.axes[i];
    if (a == 'x' || a == 'y') flip |= bit;
    if (a == 'y' || a == 'z') phase_mask |= bit;
    if (a == 'y') ++ycount;
  }
  const cd iunit(0.0, 1.0);
  cd yphase = std::pow(iunit, ycount);
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double sign = (std::popcount(k & phase_mask) & 1) ? -1.0 : 1.0;
    m(k ^ flip, k) = yphase * sign;
  }
  return m;
}

MatrixXcd pauli_exponential_dense(int nqubits, const PauliTerm& term, double theta) {
  MatrixXcd p = pauli_dense(nqubits, term);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(p);
  const cd i(0.0, 1.0);
  Eigen::VectorXcd phases(p.rows());
  for (Eigen::Index k = 0; k < p.rows(); ++k)
    phases(k) = std::exp(-i * theta * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd circuit_unitary(const Circuit& c, const std::vector<double>& parameters) {
  if (c.nqubits > 10) throw std::invalid_argument("circuit_unitary limited to 10 qubits");
  c.check();
  const std::size_t dim = std::size_t{1} << c.nqubits;
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates) {
    MatrixXcd m;
    if (g.kind == GateKind::CNOT) {
      m = cnot_full(c.nqubits, g.q0, g.q1);
    } else {
      double angle = g.angle;
      if (g.kind == GateKind::RZ && g.slot >= 0) {
        if (g.slot >= static_cast<int>(parameters.size()))
          throw std::invalid_argument("unbound parameter slot");
        angle = g.multiplier * parameters[g.slot];
      }
      m = single_qubit_full(c.nqubits, g.q0, rotation_matrix(g.kind, angle));
    }
    u = m * u;
  }
  return u;
}

double phase_aligned_distance(const MatrixXcd& a, const MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("shape mismatch");
  Eigen::Index mi = 0, mj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > best) {
        best = std::abs(a(i, j));
        mi = i;
        mj = j;
      }
  if (best < 1e-300) return (a - b).cwiseAbs().maxCoeff();
  cd phase = a(mi, mj) / b(mi, mj);
  phase /= std::abs(phase);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace hvqe
