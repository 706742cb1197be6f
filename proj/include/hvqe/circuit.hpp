#pragma once

#include <string>
#include <vector>

#include "hvqe/pauli.hpp"

namespace hvqe {

enum class GateKind { X, RXplus, RXminus, RYplus, RYminus, RZ, CNOT };

std::string to_string(GateKind k);

/// RZ carries either a literal radian angle (slot < 0) or a parameter-slot
/// reference whose bound angle is multiplier * theta[slot].
struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;         // CNOT target
  double angle = 0.0;  // literal RZ only
  int slot = -1;
  double multiplier = 2.0;

  bool touches(int q) const { return q0 == q || q1 == q; }
  bool shares_qubit(const Gate& o) const {
    return touches(o.q0) || (o.q1 >= 0 && touches(o.q1));
  }
};

struct Circuit {
  int nqubits = 0;
  std::vector<Gate> gates;
  std::vector<std::string> slots;

  void check() const;  // index/slot validity
};

/// Appends gates realizing exp(-i theta P) for the coefficient-stripped Pauli
/// product P: basis changes, CNOT ladder into the highest site, RZ(2 theta),
/// mirrored ladder, inverse basis changes.
void append_pauli_rotation(Circuit& c, const PauliTerm& term, int slot);

/// Single-fragment convenience wrapper used by tests and the compiler.
Circuit compile_pauli_rotation(int nqubits, const PauliTerm& term, const std::string& slot_name);

/// Unitary-preserving cleanup: adjacent-inverse cancellation, literal RZ
/// merging, zero-RZ deletion, commutation across disjoint-qubit gates;
/// iterated to a fixed point.
Circuit optimize_circuit(const Circuit& c);

/// Greedy left-to-right layering; gates sharing no qubit share a layer.
int circuit_depth(const Circuit& c);

/// Line-oriented text format: QUBITS / SLOTS header then one gate per line.
std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

int cnot_count(const Circuit& c);

}  // namespace hvqe
