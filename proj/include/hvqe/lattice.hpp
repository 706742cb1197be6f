#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvqe/pauli.hpp"

namespace hvqe {

enum class LatticeKind { Chain, Ring, Ladder, Square, Triangular };
enum class Boundary { Open, Periodic };

std::string to_string(LatticeKind k);
std::string to_string(Boundary b);
LatticeKind lattice_kind_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);

struct Lattice {
  LatticeKind kind;
  std::vector<int> dims;
  Boundary boundary;
  int sites = 0;
  std::vector<std::pair<int, int>> bonds;  // i < j, unique, sorted
  // Proper two-coloring (0/1 per site), present iff the bond graph is bipartite.
  std::optional<std::vector<int>> bipartition;
};

enum class CouplingMode { Isotropic, Random };

struct CouplingModel {
  CouplingMode mode = CouplingMode::Isotropic;
  std::optional<std::uint64_t> seed;  // required for random
};

struct Hamiltonian {
  int nqubits = 0;
  std::vector<PauliTerm> terms;  // axis-uniform two-body terms, 3 per bond
  Lattice lattice;
};

Lattice build_lattice(LatticeKind kind, const std::vector<int>& dims, Boundary boundary);

Hamiltonian build_hamiltonian(const Lattice& lattice, const CouplingModel& coupling);

/// Néel (bipartite) or half-split (frustrated) initial bitstring; bitstring[i]
/// is the state of site i, the sublattice holding site 0 gets bit 1.
std::string neel_bitstring(const Lattice& lattice);

/// <b|H|b> for a computational-basis state b; only zz terms contribute.
double product_state_energy(const Hamiltonian& h, const std::string& bitstring);

/// Fixed-field-order JSON document, coefficients at 17 significant digits.
std::string hamiltonian_to_json(const Hamiltonian& h);

}  // namespace hvqe
