#include "hvqe/ansatz.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hvqe/rng.hpp"

namespace hvqe {

std::string to_string(AnsatzFamily f) {
  switch (f) {
    case AnsatzFamily::XY: return "xy";
    case AnsatzFamily::TwoBody: return "two_body";
    case AnsatzFamily::HamiltonianVariational: return "hamiltonian_variational";
  }
  return "?";
}

AnsatzFamily ansatz_family_from_string(const std::string& s) {
  if (s == "xy") return AnsatzFamily::XY;
  if (s == "two_body" || s == "two-body") return AnsatzFamily::TwoBody;
  if (s == "hamiltonian_variational" || s == "hva")
    return AnsatzFamily::HamiltonianVariational;
  throw std::invalid_argument("unknown ansatz family: " + s);
}

namespace {

// Generators below use the paper-facing 1-based site labels in slot names and
// 0-based indices in terms. sigma_N^z rides along unless the pair touches N.
PauliTerm pair_term(int n, int k1, char ak, int l1, char al) {
  std::vector<std::pair<int, char>> factors{{k1 - 1, ak}, {l1 - 1, al}};
  if (k1 != n && l1 != n) factors.push_back({n - 1, 'z'});
  return make_pauli_term(std::move(factors));
}

}  // namespace

AnsatzSpec xy_ansatz(int nqubits) {
  if (nqubits < 2) throw std::invalid_argument("xy ansatz needs N >= 2");
  AnsatzSpec spec;
  spec.family = AnsatzFamily::XY;
  spec.nqubits = nqubits;
  // U_kl block first (applied first), then the U_lk block with the Pauli
  // roles swapped; l descending, k descending within each l.
  for (int block = 0; block < 2; ++block) {
    for (int l = nqubits - 1; l >= 1; --l) {
      for (int k = nqubits; k >= l + 1; --k) {
        Generator gen;
        std::ostringstream name;
        if (block == 0) {
          gen.term = pair_term(nqubits, k, 'y', l, 'x');
          name << "th_" << k << "_" << l;
        } else {
          gen.term = pair_term(nqubits, l, 'y', k, 'x');
          name << "th_" << l << "_" << k;
        }
        gen.slot = name.str();
        spec.generators.push_back(std::move(gen));
      }
    }
  }
  return spec;
}

AnsatzSpec two_body_ansatz(int nqubits) {
  if (nqubits < 2) throw std::invalid_argument("two-body ansatz needs N >= 2");
  AnsatzSpec spec;
  spec.family = AnsatzFamily::TwoBody;
  spec.nqubits = nqubits;
  static const char axes[3] = {'x', 'y', 'z'};
  for (int l = nqubits - 1; l >= 1; --l) {
    for (int k = nqubits; k >= l + 1; --k) {
      for (char beta : axes) {    // on k
        for (char alpha : axes) {  // on l
          Generator gen;
          gen.term = pair_term(nqubits, k, beta, l, alpha);
          std::ostringstream name;
          name << "tb_" << k << "_" << l << "_" << beta << alpha;
          gen.slot = name.str();
          spec.generators.push_back(std::move(gen));
        }
      }
    }
  }
  return spec;
}

AnsatzSpec hamiltonian_variational_ansatz(int nqubits, int layers) {
  // N=2 keeps both wrap-around bonds of the ring: the pair repeats with its
  // own slot in each layer, preserving the 3pN parameter count.
  if (nqubits < 2) throw std::invalid_argument("hamiltonian-variational ansatz needs N >= 2");
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  AnsatzSpec spec;
  spec.family = AnsatzFamily::HamiltonianVariational;
  spec.nqubits = nqubits;
  spec.layers = layers;
  static const char axes[3] = {'x', 'y', 'z'};
  for (int layer = 1; layer <= layers; ++layer) {
    for (int k = 1; k <= nqubits; ++k) {
      int k2 = (k % nqubits) + 1;  // ring bond (k, k+1), wrapping to 1
      for (char a : axes) {
        Generator gen;
        gen.term = pair_term(nqubits, k, a, k2, a);
        std::ostringstream name;
        name << "hva_" << layer << "_" << k << "_" << a;
        gen.slot = name.str();
        spec.generators.push_back(std::move(gen));
      }
    }
  }
  return spec;
}

std::vector<std::string> AnsatzSpec::slot_names() const {
  std::vector<std::string> names;
  names.reserve(generators.size());
  for (const auto& g : generators) names.push_back(g.slot);
  return names;
}

std::string AnsatzSpec::to_json() const {
  std::ostringstream os;
  os << "{\"family\": \"" << to_string(family) << "\", \"nqubits\": " << nqubits;
  if (family == AnsatzFamily::HamiltonianVariational) os << ", \"p\": " << layers;
  os << ", \"generators\": [";
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    os << (i ? ", " : "") << "{\"axes\": \"" << g.term.axes << "\", \"sites\": [";
    for (std::size_t j = 0; j < g.term.sites.size(); ++j)
      os << (j ? ", " : "") << g.term.sites[j];
    os << "], \"slot\": \"" << g.slot << "\"}";
  }
  os << "]}";
  return os.str();
}

std::vector<double> init_parameters(int count, ParamInit mode,
                                    std::optional<std::uint64_t> seed) {
  if (count < 1) throw std::invalid_argument("parameter count must be >= 1");
  if (mode == ParamInit::Zeros) return std::vector<double>(count, 0.0);
  if (!seed) throw std::invalid_argument("random parameter init requires a seed");
  SplitMix64 rng(*seed);
  std::vector<double> params(count);
  for (auto& p : params) p = 2.0 * M_PI * rng.uniform_open0_closed1();
  return params;
}

Circuit compile_ansatz(const AnsatzSpec& spec) {
  Circuit c;
  c.nqubits = spec.nqubits;
  c.slots = spec.slot_names();
  for (std::size_t i = 0; i < spec.generators.size(); ++i)
    append_pauli_rotation(c, spec.generators[i].term, static_cast<int>(i));
  c.check();
  return c;
}

}  // namespace hvqe
