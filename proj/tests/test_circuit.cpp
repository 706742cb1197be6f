#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hvqe/circuit.hpp"
#include "hvqe/rng.hpp"
#include "hvqe/unitary.hpp"

using namespace hvqe;

namespace {

PauliTerm random_term(SplitMix64& rng, int nqubits) {
  int size = 1 + static_cast<int>(rng.next_u64() % std::min(3, nqubits));
  std::vector<int> all(nqubits);
  for (int i = 0; i < nqubits; ++i) all[i] = i;
  for (int i = nqubits - 1; i > 0; --i)
    std::swap(all[i], all[rng.next_u64() % (i + 1)]);
  std::vector<std::pair<int, char>> factors;
  static const char axes[3] = {'x', 'y', 'z'};
  for (int i = 0; i < size; ++i) factors.push_back({all[i], axes[rng.next_u64() % 3]});
  return make_pauli_term(std::move(factors));
}

Circuit random_circuit(SplitMix64& rng, int nqubits, int gates) {
  Circuit c;
  c.nqubits = nqubits;
  for (int i = 0; i < gates; ++i) {
    switch (rng.next_u64() % 6) {
      case 0: c.gates.push_back({GateKind::X, static_cast<int>(rng.next_u64() % nqubits)}); break;
      case 1: c.gates.push_back({GateKind::RXplus, static_cast<int>(rng.next_u64() % nqubits)}); break;
      case 2: c.gates.push_back({GateKind::RXminus, static_cast<int>(rng.next_u64() % nqubits)}); break;
      case 3: c.gates.push_back({GateKind::RYplus, static_cast<int>(rng.next_u64() % nqubits)}); break;
      case 4: {
        Gate g{GateKind::RZ, static_cast<int>(rng.next_u64() % nqubits)};
        g.angle = rng.uniform01() * 6.0 - 3.0;
        c.gates.push_back(g);
        break;
      }
      default: {
        int a = rng.next_u64() % nqubits;
        int b = rng.next_u64() % nqubits;
        if (a == b) b = (b + 1) % nqubits;
        c.gates.push_back({GateKind::CNOT, a, b});
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("zz rotation compiles to CNOT ladder pattern") {
  auto c = compile_pauli_rotation(4, PauliTerm({2, 3}, "zz"), "t");
  REQUIRE(c.gates.size() == 3);
  CHECK(c.gates[0].kind == GateKind::CNOT);
  CHECK(c.gates[0].q0 == 2);
  CHECK(c.gates[0].q1 == 3);
  CHECK(c.gates[1].kind == GateKind::RZ);
  CHECK(c.gates[1].q0 == 3);
  CHECK(c.gates[1].slot == 0);
  CHECK(c.gates[1].multiplier == 2.0);
  CHECK(c.gates[2].kind == GateKind::CNOT);
}

TEST_CASE("single z rotation is a lone RZ") {
  auto c = compile_pauli_rotation(1, PauliTerm({0}, "z"), "t");
  REQUIRE(c.gates.size() == 1);
  CHECK(c.gates[0].kind == GateKind::RZ);
  CHECK(c.gates[0].q0 == 0);
}

TEST_CASE("gate count formula: 2(k-1) CNOTs + 1 RZ + basis changes") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto term = random_term(rng, 4);
    auto c = compile_pauli_rotation(4, term, "t");
    const int k = static_cast<int>(term.sites.size());
    int basis = 0;
    for (char a : term.axes)
      if (a != 'z') basis += 2;
    CHECK(cnot_count(c) == 2 * (k - 1));
    CHECK(static_cast<int>(c.gates.size()) == 2 * (k - 1) + 1 + basis);
  }
}

TEST_CASE("compiled yxz fragment equals the dense exponential") {
  PauliTerm term({0, 1, 2}, "yxz");
  auto c = compile_pauli_rotation(3, term, "t");
  for (double theta : {0.3, 1.1, 2.9}) {
    auto u = circuit_unitary(c, {theta});
    auto ref = pauli_exponential_dense(3, term, theta);
    CHECK(phase_aligned_distance(ref, u) <= 1e-10);
  }
  // theta = 0 gives the identity up to global phase
  auto u0 = circuit_unitary(c, {0.0});
  CHECK(phase_aligned_distance(Eigen::MatrixXcd::Identity(8, 8), u0) <= 1e-12);
}

TEST_CASE("compilation soundness on random terms") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto term = random_term(rng, 4);
    double theta = rng.uniform01() * 2.0 * M_PI;
    auto c = compile_pauli_rotation(4, term, "t");
    CHECK(phase_aligned_distance(pauli_exponential_dense(4, term, theta),
                                 circuit_unitary(c, {theta})) <= 1e-10);
  }
}

TEST_CASE("optimizer cancels inverse pairs") {
  Circuit c;
  c.nqubits = 2;
  c.gates = {{GateKind::RXplus, 1}, {GateKind::RXminus, 1}};
  CHECK(optimize_circuit(c).gates.empty());

  c.gates = {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 0, 1}};
  CHECK(optimize_circuit(c).gates.empty());

  c.gates = {{GateKind::X, 0}, {GateKind::X, 0}};
  CHECK(optimize_circuit(c).gates.empty());
}

TEST_CASE("optimizer merges literal RZ and reorders across disjoint gates") {
  Circuit c;
  c.nqubits = 3;
  Gate rz1{GateKind::RZ, 0};
  rz1.angle = 0.4;
  Gate rz2{GateKind::RZ, 0};
  rz2.angle = -0.4;
  c.gates = {rz1, {GateKind::X, 2}, rz2};  // X on a disjoint qubit between them
  auto o = optimize_circuit(c);
  REQUIRE(o.gates.size() == 1);
  CHECK(o.gates[0].kind == GateKind::X);
}

TEST_CASE("optimization preserves the unitary on random circuits") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_circuit(rng, 4, 40);
    auto o = optimize_circuit(c);
    CHECK(phase_aligned_distance(circuit_unitary(c, {}), circuit_unitary(o, {})) <= 1e-10);
    CHECK(circuit_depth(o) <= circuit_depth(c));
  }
}

TEST_CASE("depth metric") {
  Circuit c;
  c.nqubits = 2;
  CHECK(circuit_depth(c) == 0);
  c.gates = {{GateKind::X, 0}, {GateKind::X, 1}};
  CHECK(circuit_depth(c) == 1);
  Gate rz{GateKind::RZ, 1};
  rz.angle = 0.1;
  c.gates = {{GateKind::CNOT, 0, 1}, rz};
  CHECK(circuit_depth(c) == 2);
}

TEST_CASE("text serialization round-trips") {
  PauliTerm term({0, 2, 3}, "xyz");
  auto c = compile_pauli_rotation(4, term, "th_3_1");
  auto text = circuit_to_text(c);
  auto back = circuit_from_text(text);
  CHECK(back.nqubits == c.nqubits);
  CHECK(back.slots == c.slots);
  REQUIRE(back.gates.size() == c.gates.size());
  CHECK(phase_aligned_distance(circuit_unitary(c, {0.77}), circuit_unitary(back, {0.77})) <=
        1e-12);
  CHECK(text.rfind("QUBITS 4\nSLOTS th_3_1\n", 0) == 0);
}

TEST_CASE("error paths") {
  CHECK_THROWS(compile_pauli_rotation(2, PauliTerm{}, "t"));
  Circuit big;
  big.nqubits = 11;
  CHECK_THROWS(circuit_unitary(big, {}));
  Circuit unbound;
  unbound.nqubits = 1;
  Gate rz{GateKind::RZ, 0};
  rz.slot = 0;
  unbound.slots = {"a"};
  unbound.gates = {rz};
  CHECK_THROWS(circuit_unitary(unbound, {}));
}
