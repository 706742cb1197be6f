#include "hvqe/exact.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "hvqe/engine.hpp"
#include "hvqe/rng.hpp"
#include "hvqe/unitary.hpp"

namespace hvqe {

using cd = std::complex<double>;
using Vec = std::vector<cd>;

namespace {

void matvec(const Hamiltonian& h, const Vec& x, Vec& y) {
  std::fill(y.begin(), y.end(), cd{0.0, 0.0});
  for (const auto& t : h.terms) accumulate_pauli_apply(t, x, y);
}

double vnorm(const Vec& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

cd vdot(const Vec& a, const Vec& b) {
  cd s{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
  return s;
}

void axpy(cd alpha, const Vec& x, Vec& y) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += alpha * x[j];
}

Vec random_unit_vector(std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vec v(dim);
  for (auto& a : v) a = cd{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
  double n = vnorm(v);
  for (auto& a : v) a /= n;
  return v;
}

}  // namespace

GroundStateResult ground_state_lanczos(const Hamiltonian& h, double tol, int max_iter,
                                       bool want_vector, std::uint64_t seed) {
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  const std::size_t dim = std::size_t{1} << h.nqubits;
  constexpr int kMaxKrylov = 300;

  GroundStateResult result;
  Vec start = random_unit_vector(dim, seed);

  while (result.iterations < max_iter) {
    const int cycle = std::min<int>(kMaxKrylov, max_iter - result.iterations);
    std::vector<Vec> basis;
    basis.push_back(start);
    std::vector<double> alpha, beta;  // tridiagonal entries
    Vec w(dim);
    Eigen::VectorXd ritz_coeffs;
    double theta = 0.0, res_est = 0.0;
    bool breakdown = false;

    int m = 0;
    for (; m < cycle; ++m) {
      matvec(h, basis[m], w);
      double a = vdot(basis[m], w).real();
      alpha.push_back(a);
      axpy(-a, basis[m], w);
      if (m > 0) axpy(-beta[m - 1], basis[m - 1], w);
      // Full reorthogonalization against the whole basis.
      for (const auto& q : basis) axpy(-vdot(q, w), q, w);

      // Lowest Ritz pair of the m+1 dimensional tridiagonal projection.
      const int k = m + 1;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      theta = es.eigenvalues()(0);
      ritz_coeffs = es.eigenvectors().col(0);
      result.ritz_trace.push_back(theta);
      ++result.iterations;

      double b = vnorm(w);
      res_est = b * std::abs(ritz_coeffs(k - 1));
      if (res_est <= tol || result.iterations >= max_iter) break;
      if (b < 1e-14) {  // invariant subspace
        breakdown = true;
        break;
      }
      beta.push_back(b);
      for (auto& x : w) x /= b;
      basis.push_back(w);
    }

    // Assemble the Ritz vector for restart / output / residual certification.
    Vec ritz(dim, cd{0.0, 0.0});
    for (std::size_t i = 0; i < basis.size() && i < static_cast<std::size_t>(ritz_coeffs.size()); ++i)
      axpy(ritz_coeffs(static_cast<int>(i)), basis[i], ritz);
    double rn = vnorm(ritz);
    for (auto& x : ritz) x /= rn;

    matvec(h, ritz, w);
    axpy(-theta, ritz, w);
    double residual = vnorm(w);

    result.energy = theta;
    result.residual = residual;
    if (residual <= tol || breakdown) {
      result.converged = true;
      if (want_vector) result.eigenvector = std::move(ritz);
      return result;
    }
    if (result.iterations >= max_iter) {
      // Non-convergence: best estimate reported, flagged unconverged.
      if (want_vector) result.eigenvector = std::move(ritz);
      return result;
    }
    start = std::move(ritz);  // explicit restart from the best Ritz vector
  }
  return result;
}

double dense_ground_energy(const Hamiltonian& h) {
  if (h.nqubits > 12) throw std::invalid_argument("dense oracle limited to 12 qubits");
  const std::size_t dim = std::size_t{1} << h.nqubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms) m += t.coeff * pauli_dense(h.nqubits, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double bethe_reference() { return 1.0 - 4.0 * std::log(2.0); }

}  // namespace hvqe
