#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvqe/circuit.hpp"
#include "hvqe/pauli.hpp"

namespace hvqe {

enum class AnsatzFamily { XY, TwoBody, HamiltonianVariational };

std::string to_string(AnsatzFamily f);
AnsatzFamily ansatz_family_from_string(const std::string& s);

struct Generator {
  PauliTerm term;  // coefficient 1; the slot angle is the whole parameter
  std::string slot;
};

/// Ordered generator list; order is part of the ansatz identity.
struct AnsatzSpec {
  AnsatzFamily family;
  int nqubits = 0;
  int layers = 0;  // HamiltonianVariational only
  std::vector<Generator> generators;

  int parameter_count() const { return static_cast<int>(generators.size()); }
  std::vector<std::string> slot_names() const;
  std::string to_json() const;
};

/// XY ansatz: U_{kl} block then U_{lk} block, l descending N-1..1, k
/// descending N..l+1 within each; sigma_N^z appended unless k or l is N.
/// P = N(N-1).
AnsatzSpec xy_ansatz(int nqubits);

/// All two-body excitations: same pair order as the XY ansatz, nine axis
/// combinations per pair in xx..zz order. P = 9 N(N-1)/2.
AnsatzSpec two_body_ansatz(int nqubits);

/// Layered ring ansatz: p layers of the 3N ring-bond exponentials.
/// Defined for rings only. P = 3 p N.
AnsatzSpec hamiltonian_variational_ansatz(int nqubits, int layers);

enum class ParamInit { Zeros, Random };

std::vector<double> init_parameters(int count, ParamInit mode,
                                    std::optional<std::uint64_t> seed = std::nullopt);

/// Compiles every generator, in order, into one circuit.
Circuit compile_ansatz(const AnsatzSpec& spec);

}  // namespace hvqe
