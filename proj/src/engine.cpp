#include "hvqe/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hvqe/rng.hpp"

namespace hvqe {

using cd = std::complex<double>;

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

StateVector prepare_basis_state(int nqubits, const std::string& bitstring) {
  if (static_cast<int>(bitstring.size()) != nqubits)
    throw std::invalid_argument("bitstring length mismatch");
  StateVector sv;
  sv.nqubits = nqubits;
  sv.amps.assign(std::size_t{1} << nqubits, cd{0.0, 0.0});
  std::size_t index = 0;
  for (int q = 0; q < nqubits; ++q) {
    char b = bitstring[q];
    if (b != '0' && b != '1') throw std::invalid_argument("bitstring must be 0/1");
    if (b == '1') index |= std::size_t{1} << q;
  }
  sv.amps[index] = cd{1.0, 0.0};
  return sv;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// v0' = a v0 + b v1 ; v1' = c v0 + d v1 over every pair split by qubit q.
void apply_2x2(StateVector& sv, int q, cd a, cd b, cd c, cd d) {
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t dim = sv.amps.size();
  cd* v = sv.amps.data();
  for (std::size_t base = 0; base < dim; base += bit << 1) {
    for (std::size_t j = base; j < base + bit; ++j) {
      cd v0 = v[j], v1 = v[j | bit];
      v[j] = a * v0 + b * v1;
      v[j | bit] = c * v0 + d * v1;
    }
  }
}

}  // namespace

void apply_gate(StateVector& sv, const Gate& g, const std::vector<double>& parameters) {
  if (g.q0 < 0 || g.q0 >= sv.nqubits || (g.q1 >= 0 && g.q1 >= sv.nqubits))
    throw std::out_of_range("gate qubit out of range");
  const cd i(0.0, 1.0);
  switch (g.kind) {
    case GateKind::X: {
      const std::size_t bit = std::size_t{1} << g.q0;
      cd* v = sv.amps.data();
      for (std::size_t base = 0; base < sv.amps.size(); base += bit << 1)
        for (std::size_t j = base; j < base + bit; ++j) std::swap(v[j], v[j | bit]);
      break;
    }
    case GateKind::RXplus:
      apply_2x2(sv, g.q0, kInvSqrt2, -i * kInvSqrt2, -i * kInvSqrt2, kInvSqrt2);
      break;
    case GateKind::RXminus:
      apply_2x2(sv, g.q0, kInvSqrt2, i * kInvSqrt2, i * kInvSqrt2, kInvSqrt2);
      break;
    case GateKind::RYplus:
      apply_2x2(sv, g.q0, kInvSqrt2, -kInvSqrt2, kInvSqrt2, kInvSqrt2);
      break;
    case GateKind::RYminus:
      apply_2x2(sv, g.q0, kInvSqrt2, kInvSqrt2, -kInvSqrt2, kInvSqrt2);
      break;
    case GateKind::RZ: {
      double angle = g.angle;
      if (g.slot >= 0) {
        if (g.slot >= static_cast<int>(parameters.size()))
          throw std::invalid_argument("unbound parameter slot");
        angle = g.multiplier * parameters[g.slot];
      }
      const cd p0 = std::exp(-i * (angle / 2.0)), p1 = std::exp(i * (angle / 2.0));
      const std::size_t bit = std::size_t{1} << g.q0;
      cd* v = sv.amps.data();
      for (std::size_t j = 0; j < sv.amps.size(); ++j) v[j] *= (j & bit) ? p1 : p0;
      break;
    }
    case GateKind::CNOT: {
      const std::size_t cbit = std::size_t{1} << g.q0;
      const std::size_t tbit = std::size_t{1} << g.q1;
      cd* v = sv.amps.data();
      for (std::size_t j = 0; j < sv.amps.size(); ++j)
        if ((j & cbit) && !(j & tbit)) std::swap(v[j], v[j | tbit]);
      break;
    }
  }
}

void apply_circuit(StateVector& sv, const Circuit& c, const std::vector<double>& parameters) {
  if (c.nqubits != sv.nqubits) throw std::invalid_argument("qubit count mismatch");
  for (const auto& g : c.gates) apply_gate(sv, g, parameters);
}

namespace {

struct PauliMasks {
  std::size_t flip = 0;
  std::size_t phase = 0;  // y and z sites
  int ycount = 0;
};

PauliMasks masks_of(const PauliTerm& term, int nqubits) {
  PauliMasks m;
  for (std::size_t i = 0; i < term.sites.size(); ++i) {
    if (term.sites[i] < 0 || term.sites[i] >= nqubits)
      throw std::out_of_range("Pauli term site out of range");
    std::size_t bit = std::size_t{1} << term.sites[i];
    char a = term.axes[i];
    if (a == 'x' || a == 'y') m.flip |= bit;
    if (a == 'y' || a == 'z') m.phase |= bit;
    if (a == 'y') ++m.ycount;
  }
  return m;
}

inline cd pauli_coeff(const PauliMasks& m, std::size_t k) {
  static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double sign = (std::popcount(k & m.phase) & 1) ? -1.0 : 1.0;
  return ipow[m.ycount & 3] * sign;
}

}  // namespace

void apply_pauli_rotation(StateVector& sv, const PauliTerm& term, double theta) {
  const PauliMasks m = masks_of(term, sv.nqubits);
  const double c = std::cos(theta), s = std::sin(theta);
  const cd mis(0.0, -s);  // -i sin(theta)
  cd* v = sv.amps.data();
  const std::size_t dim = sv.amps.size();
  if (m.flip == 0) {
    // Diagonal string: amplitude-wise phase.
    const cd e0 = c + mis, e1 = c - mis;  // eigenvalues +1 / -1
    for (std::size_t j = 0; j < dim; ++j)
      v[j] *= (std::popcount(j & m.phase) & 1) ? e1 : e0;
    return;
  }
  // (exp v)_j = cos t * v_j - i sin t * c_{j2} v_{j2}. The source coefficient
  // is i^ycount times a parity sign, so hoist w = -i sin(t) * i^ycount and
  // apply only the per-index sign inside the loop. Iterating blocks below the
  // highest flipped bit visits each pair at its lower member branch-free.
  const std::size_t hi = std::size_t{1} << (63 - std::countl_zero(m.flip));
  static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cd w = mis * ipow[m.ycount & 3];
  const bool flip_par = std::popcount(m.flip & m.phase) & 1;
  if (m.ycount & 1) {
    // w is real: the pair update stays in real arithmetic.
    const double r = w.real();
    for (std::size_t base = 0; base < dim; base += hi << 1) {
      for (std::size_t j = base; j < base + hi; ++j) {
        const std::size_t j2 = j ^ m.flip;
        const bool par = std::popcount(j & m.phase) & 1;
        const double ra = par ? -r : r;                // source j
        const double rb = (par != flip_par) ? -r : r;  // source j2
        const cd a = v[j], b = v[j2];
        v[j] = {c * a.real() + rb * b.real(), c * a.imag() + rb * b.imag()};
        v[j2] = {c * b.real() + ra * a.real(), c * b.imag() + ra * a.imag()};
      }
    }
  } else {
    // w is purely imaginary: multiply by i and a real scale.
    const double q = w.imag();
    for (std::size_t base = 0; base < dim; base += hi << 1) {
      for (std::size_t j = base; j < base + hi; ++j) {
        const std::size_t j2 = j ^ m.flip;
        const bool par = std::popcount(j & m.phase) & 1;
        const double qa = par ? -q : q;
        const double qb = (par != flip_par) ? -q : q;
        const cd a = v[j], b = v[j2];
        v[j] = {c * a.real() - qb * b.imag(), c * a.imag() + qb * b.real()};
        v[j2] = {c * b.real() - qa * a.imag(), c * b.imag() + qa * a.real()};
      }
    }
  }
}

void apply_ansatz(StateVector& sv, const AnsatzSpec& spec, const std::vector<double>& parameters) {
  if (spec.nqubits != sv.nqubits) throw std::invalid_argument("qubit count mismatch");
  if (parameters.size() != spec.generators.size())
    throw std::invalid_argument("parameter vector length mismatch");
  for (std::size_t i = 0; i < spec.generators.size(); ++i)
    apply_pauli_rotation(sv, spec.generators[i].term, parameters[i]);
}

void accumulate_pauli_apply(const PauliTerm& term, const std::vector<cd>& x,
                            std::vector<cd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch");
  int nq = std::countr_zero(std::bit_ceil(x.size()));
  const PauliMasks m = masks_of(term, nq);
  const double coeff = term.coeff;
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::size_t src = j ^ m.flip;
    y[j] += coeff * pauli_coeff(m, src) * x[src];
  }
}

double expectation(const StateVector& sv, const Hamiltonian& h) {
  if (h.nqubits != sv.nqubits) throw std::invalid_argument("dimension mismatch");
  cd total{0.0, 0.0};
  const cd* v = sv.amps.data();
  for (const auto& t : h.terms) {
    const PauliMasks m = masks_of(t, sv.nqubits);
    cd acc{0.0, 0.0};
    for (std::size_t j = 0; j < sv.amps.size(); ++j) {
      std::size_t src = j ^ m.flip;
      acc += std::conj(v[j]) * (pauli_coeff(m, src) * v[src]);
    }
    total += t.coeff * acc;
  }
  if (std::abs(total.imag()) > 1e-10)
    throw std::runtime_error("expectation has a non-vanishing imaginary part");
  return total.real();
}

double magnetization_z(const StateVector& sv) {
  double m = 0.0;
  for (std::size_t j = 0; j < sv.amps.size(); ++j) {
    double p = std::norm(sv.amps[j]);
    if (p == 0.0) continue;
    m += p * (sv.nqubits - 2 * std::popcount(j));
  }
  return m;
}

double overlap_sq(const StateVector& a, const StateVector& b) {
  if (a.nqubits != b.nqubits) throw std::invalid_argument("dimension mismatch");
  cd ip{0.0, 0.0};
  for (std::size_t j = 0; j < a.amps.size(); ++j) ip += std::conj(a.amps[j]) * b.amps[j];
  return std::norm(ip);
}

SampledEnergy estimate_energy_sampled(const StateVector& sv, const Hamiltonian& h,
                                      long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  for (const auto& t : h.terms)
    if (t.axes != "xx" && t.axes != "yy" && t.axes != "zz")
      throw std::invalid_argument("sampled estimator requires axis-uniform terms");

  const long per = shots / 3;
  const long counts[3] = {per, per, shots - 2 * per};  // x, y, z; remainder to z
  SplitMix64 rng(seed);

  double estimate = 0.0, variance = 0.0;
  const char axis_of[3] = {'x', 'y', 'z'};
  for (int setting = 0; setting < 3; ++setting) {
    std::vector<const PauliTerm*> terms;
    for (const auto& t : h.terms)
      if (t.axes[0] == axis_of[setting]) terms.push_back(&t);
    if (terms.empty() || counts[setting] == 0) continue;

    // Rotate into the measurement basis: X via Ry(-pi/2), Y via Rx(+pi/2).
    StateVector rotated = sv;
    if (setting != 2) {
      GateKind k = (setting == 0) ? GateKind::RYminus : GateKind::RXplus;
      for (int q = 0; q < sv.nqubits; ++q) apply_gate(rotated, Gate{k, q}, {});
    }
    std::vector<double> cdf(rotated.amps.size());
    double run = 0.0;
    for (std::size_t j = 0; j < rotated.amps.size(); ++j) {
      run += std::norm(rotated.amps[j]);
      cdf[j] = run;
    }

    double sum = 0.0, sumsq = 0.0;
    for (long shot = 0; shot < counts[setting]; ++shot) {
      double u = rng.uniform01() * run;
      std::size_t j = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (j >= cdf.size()) j = cdf.size() - 1;
      double e = 0.0;
      for (const auto* t : terms) {
        std::size_t mask =
            (std::size_t{1} << t->sites[0]) | (std::size_t{1} << t->sites[1]);
        e += t->coeff * ((std::popcount(j & mask) & 1) ? -1.0 : 1.0);
      }
      sum += e;
      sumsq += e * e;
    }
    const double n = static_cast<double>(counts[setting]);
    double mean = sum / n;
    estimate += mean;
    if (counts[setting] > 1) {
      double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
      variance += var / n;
    }
  }
  return {estimate, std::sqrt(variance)};
}

void dump_state(const StateVector& sv, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path);
  for (const auto& a : sv.amps) {
    double re = a.real(), im = a.imag();
    std::fwrite(&re, sizeof re, 1, f);
    std::fwrite(&im, sizeof im, 1, f);
  }
  std::fclose(f);
}

}  // namespace hvqe
