#include "hvqe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hvqe/io.hpp"

namespace hvqe {

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::RXplus: return "RX+";
    case GateKind::RXminus: return "RX-";
    case GateKind::RYplus: return "RY+";
    case GateKind::RYminus: return "RY-";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

void Circuit::check() const {
  for (const auto& g : gates) {
    if (g.q0 < 0 || g.q0 >= nqubits || (g.q1 >= 0 && g.q1 >= nqubits))
      throw std::out_of_range("gate qubit out of range");
    if (g.kind == GateKind::CNOT && (g.q1 < 0 || g.q1 == g.q0))
      throw std::invalid_argument("CNOT needs two distinct qubits");
    if (g.kind == GateKind::RZ && g.slot >= static_cast<int>(slots.size()))
      throw std::out_of_range("RZ references a missing slot");
  }
}

void append_pauli_rotation(Circuit& c, const PauliTerm& term, int slot) {
  if (term.sites.empty()) throw std::invalid_argument("empty Pauli term");
  const int target = term.sites.back();  // highest site index carries the RZ

  // Basis changes into the Z eigenbasis, verified against the dense
  // exponential oracle: x -> Ry(-pi/2) before / Ry(+pi/2) after,
  // y -> Rx(+pi/2) before / Rx(-pi/2) after.
  for (std::size_t i = 0; i < term.sites.size(); ++i) {
    if (term.axes[i] == 'x') c.gates.push_back({GateKind::RYminus, term.sites[i]});
    if (term.axes[i] == 'y') c.gates.push_back({GateKind::RXplus, term.sites[i]});
  }
  for (std::size_t i = 0; i + 1 < term.sites.size(); ++i)
    c.gates.push_back({GateKind::CNOT, term.sites[i], target});
  Gate rz{GateKind::RZ, target};
  rz.slot = slot;
  rz.multiplier = 2.0;
  c.gates.push_back(rz);
  for (std::size_t i = term.sites.size() - 1; i-- > 0;)
    c.gates.push_back({GateKind::CNOT, term.sites[i], target});
  for (std::size_t i = term.sites.size(); i-- > 0;) {
    if (term.axes[i] == 'x') c.gates.push_back({GateKind::RYplus, term.sites[i]});
    if (term.axes[i] == 'y') c.gates.push_back({GateKind::RXminus, term.sites[i]});
  }
}

Circuit compile_pauli_rotation(int nqubits, const PauliTerm& term, const std::string& slot_name) {
  Circuit c;
  c.nqubits = nqubits;
  c.slots.push_back(slot_name);
  append_pauli_rotation(c, term, 0);
  c.check();
  return c;
}

namespace {

bool is_inverse_pair(const Gate& a, const Gate& b) {
  if (a.q0 != b.q0 || a.q1 != b.q1) return false;
  switch (a.kind) {
    case GateKind::X: return b.kind == GateKind::X;
    case GateKind::CNOT: return b.kind == GateKind::CNOT;
    case GateKind::RXplus: return b.kind == GateKind::RXminus;
    case GateKind::RXminus: return b.kind == GateKind::RXplus;
    case GateKind::RYplus: return b.kind == GateKind::RYminus;
    case GateKind::RYminus: return b.kind == GateKind::RYplus;
    default: return false;
  }
}

constexpr double kZeroAngle = 1e-15;

}  // namespace

Circuit optimize_circuit(const Circuit& circuit) {
  Circuit out = circuit;
  auto& g = out.gates;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> dead(g.size(), false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (dead[i]) continue;
      if (g[i].kind == GateKind::RZ && g[i].slot < 0 && std::abs(g[i].angle) < kZeroAngle) {
        dead[i] = true;
        changed = true;
        continue;
      }
      // Scan forward past gates on disjoint qubits for a partner.
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (dead[j]) continue;
        if (!g[i].shares_qubit(g[j])) continue;
        if (is_inverse_pair(g[i], g[j])) {
          dead[i] = dead[j] = true;
          changed = true;
        } else if (g[i].kind == GateKind::RZ && g[j].kind == GateKind::RZ &&
                   g[i].q0 == g[j].q0 && g[i].slot < 0 && g[j].slot < 0) {
          g[i].angle += g[j].angle;
          dead[j] = true;
          changed = true;
        }
        break;  // blocked by the first gate sharing a qubit
      }
    }
    if (changed) {
      std::vector<Gate> kept;
      kept.reserve(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        if (!dead[i]) kept.push_back(g[i]);
      g = std::move(kept);
    }
  }
  return out;
}

int circuit_depth(const Circuit& c) {
  std::vector<int> layer(c.nqubits, 0);
  int depth = 0;
  for (const auto& g : c.gates) {
    int l = layer[g.q0];
    if (g.q1 >= 0) l = std::max(l, layer[g.q1]);
    ++l;
    layer[g.q0] = l;
    if (g.q1 >= 0) layer[g.q1] = l;
    depth = std::max(depth, l);
  }
  return depth;
}

int cnot_count(const Circuit& c) {
  int n = 0;
  for (const auto& g : c.gates)
    if (g.kind == GateKind::CNOT) ++n;
  return n;
}

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os << "QUBITS " << c.nqubits << "\n";
  os << "SLOTS";
  for (const auto& s : c.slots) os << " " << s;
  os << "\n";
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::CNOT) {
      os << "CNOT " << g.q0 << " " << g.q1 << "\n";
    } else if (g.kind == GateKind::RZ) {
      os << "RZ " << g.q0 << " ";
      if (g.slot >= 0)
        os << fmt17(g.multiplier) << "*" << c.slots[g.slot];
      else
        os << fmt17(g.angle);
      os << "\n";
    } else {
      os << to_string(g.kind) << " " << g.q0 << "\n";
    }
  }
  return os.str();
}

Circuit circuit_from_text(const std::string& text) {
  Circuit c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    if (op == "QUBITS") {
      ls >> c.nqubits;
    } else if (op == "SLOTS") {
      std::string s;
      while (ls >> s) c.slots.push_back(s);
    } else if (op == "CNOT") {
      Gate g{GateKind::CNOT};
      ls >> g.q0 >> g.q1;
      c.gates.push_back(g);
    } else if (op == "RZ") {
      Gate g{GateKind::RZ};
      std::string arg;
      ls >> g.q0 >> arg;
      auto star = arg.find('*');
      if (star != std::string::npos) {
        g.multiplier = std::stod(arg.substr(0, star));
        std::string name = arg.substr(star + 1);
        auto it = std::find(c.slots.begin(), c.slots.end(), name);
        if (it == c.slots.end()) throw std::invalid_argument("unknown slot: " + name);
        g.slot = static_cast<int>(it - c.slots.begin());
      } else {
        g.angle = std::stod(arg);
      }
      c.gates.push_back(g);
    } else {
      Gate g{};
      if (op == "X") g.kind = GateKind::X;
      else if (op == "RX+") g.kind = GateKind::RXplus;
      else if (op == "RX-") g.kind = GateKind::RXminus;
      else if (op == "RY+") g.kind = GateKind::RYplus;
      else if (op == "RY-") g.kind = GateKind::RYminus;
      else throw std::invalid_argument("unknown gate: " + op);
      ls >> g.q0;
      c.gates.push_back(g);
    }
  }
  c.check();
  return c;
}

}  // namespace hvqe
