#include "hvqe/lattice.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hvqe/io.hpp"
#include "hvqe/rng.hpp"

namespace hvqe {

std::string to_string(LatticeKind k) {
  switch (k) {
    case LatticeKind::Chain: return "chain";
    case LatticeKind::Ring: return "ring";
    case LatticeKind::Ladder: return "ladder";
    case LatticeKind::Square: return "square";
    case LatticeKind::Triangular: return "triangular";
  }
  return "?";
}

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "chain") return LatticeKind::Chain;
  if (s == "ring") return LatticeKind::Ring;
  if (s == "ladder") return LatticeKind::Ladder;
  if (s == "square") return LatticeKind::Square;
  if (s == "triangular") return LatticeKind::Triangular;
  throw std::invalid_argument("unknown lattice kind: " + s);
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary: " + s);
}

namespace {

void add_bond(std::set<std::pair<int, int>>& bonds, int i, int j) {
  if (i == j) throw std::invalid_argument("self-bond");
  if (i > j) std::swap(i, j);
  bonds.insert({i, j});
}

std::optional<std::vector<int>> two_color(int n, const std::vector<std::pair<int, int>>& bonds) {
  std::vector<std::vector<int>> adj(n);
  for (auto& [i, j] : bonds) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> color(n, -1);
  for (int start = 0; start < n; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::deque<int> q{start};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          q.push_back(v);
        } else if (color[v] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

}  // namespace

Lattice build_lattice(LatticeKind kind, const std::vector<int>& dims, Boundary boundary) {
  for (int d : dims)
    if (d <= 0) throw std::invalid_argument("lattice dims must be positive");

  Lattice lat;
  lat.kind = kind;
  lat.dims = dims;
  lat.boundary = boundary;
  std::set<std::pair<int, int>> bonds;

  auto require_dims = [&](std::size_t n) {
    if (dims.size() != n) throw std::invalid_argument("wrong dimensionality for lattice kind");
  };

  switch (kind) {
    case LatticeKind::Chain: {
      require_dims(1);
      int n = dims[0];
      if (n < 2) throw std::invalid_argument("chain needs at least 2 sites");
      lat.sites = n;
      for (int i = 0; i + 1 < n; ++i) add_bond(bonds, i, i + 1);
      break;
    }
    case LatticeKind::Ring: {
      require_dims(1);
      int n = dims[0];
      if (n < 2) throw std::invalid_argument("ring needs at least 2 sites");
      lat.sites = n;
      for (int i = 0; i < n; ++i) add_bond(bonds, i, (i + 1) % n);
      lat.boundary = Boundary::Periodic;
      break;
    }
    case LatticeKind::Ladder:
      require_dims(2);
      if (dims[1] != 2) throw std::invalid_argument("ladder requires second dimension = 2");
      [[fallthrough]];
    case LatticeKind::Square:
    case LatticeKind::Triangular: {
      require_dims(2);
      int rows = dims[0], cols = dims[1];
      if (kind == LatticeKind::Triangular && boundary == Boundary::Periodic)
        throw std::invalid_argument("triangular lattice supports open boundary only");
      if (boundary == Boundary::Periodic && (rows < 2 || cols < 2))
        throw std::invalid_argument("periodic boundary on a 1-site dimension");
      lat.sites = rows * cols;
      auto site = [cols](int r, int c) { return r * cols + c; };
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          if (c + 1 < cols) add_bond(bonds, site(r, c), site(r, c + 1));
          if (r + 1 < rows) add_bond(bonds, site(r, c), site(r + 1, c));
          if (boundary == Boundary::Periodic) {
            if (c + 1 == cols && cols > 2) add_bond(bonds, site(r, c), site(r, 0));
            if (r + 1 == rows && rows > 2) add_bond(bonds, site(r, c), site(0, c));
          }
          // one diagonal per unit cell, lower-left to upper-right
          if (kind == LatticeKind::Triangular && r + 1 < rows && c + 1 < cols)
            add_bond(bonds, site(r, c), site(r + 1, c + 1));
        }
      // A 2-wide periodic dimension would wrap onto the existing open bond;
      // the `> 2` guards above leave it as a single bond.
      break;
    }
  }

  if (kind == LatticeKind::Ring && boundary == Boundary::Open)
    throw std::invalid_argument("ring is periodic by definition; use chain for open boundary");

  lat.bonds.assign(bonds.begin(), bonds.end());
  lat.bipartition = two_color(lat.sites, lat.bonds);
  return lat;
}

Hamiltonian build_hamiltonian(const Lattice& lattice, const CouplingModel& coupling) {
  if (coupling.mode == CouplingMode::Random && !coupling.seed)
    throw std::invalid_argument("random coupling model requires a seed");

  Hamiltonian h;
  h.nqubits = lattice.sites;
  h.lattice = lattice;
  SplitMix64 rng(coupling.seed.value_or(0));
  static const char axes[3] = {'x', 'y', 'z'};
  for (auto& [i, j] : lattice.bonds) {
    for (char a : axes) {
      double coeff = 1.0;
      if (coupling.mode == CouplingMode::Random) coeff = rng.uniform_open0_closed1();
      h.terms.push_back(PauliTerm({i, j}, std::string(2, a), coeff));
    }
  }
  return h;
}

std::string neel_bitstring(const Lattice& lattice) {
  std::string bits(lattice.sites, '0');
  if (lattice.bipartition) {
    const auto& color = *lattice.bipartition;
    for (int i = 0; i < lattice.sites; ++i)
      if (color[i] == color[0]) bits[i] = '1';
  } else {
    // Frustrated lattice: half the spins anti-parallel, by index.
    int ones = (lattice.sites + 1) / 2;
    for (int i = 0; i < ones; ++i) bits[i] = '1';
  }
  return bits;
}

double product_state_energy(const Hamiltonian& h, const std::string& bitstring) {
  if (static_cast<int>(bitstring.size()) != h.nqubits)
    throw std::invalid_argument("bitstring length mismatch");
  double e = 0.0;
  for (const auto& t : h.terms) {
    if (t.axes != "zz") continue;
    bool equal = bitstring[t.sites[0]] == bitstring[t.sites[1]];
    e += t.coeff * (equal ? 1.0 : -1.0);
  }
  return e;
}

std::string hamiltonian_to_json(const Hamiltonian& h) {
  std::ostringstream os;
  os << "{\"nqubits\": " << h.nqubits;
  os << ", \"kind\": \"" << to_string(h.lattice.kind) << "\"";
  os << ", \"dims\": [";
  for (std::size_t i = 0; i < h.lattice.dims.size(); ++i)
    os << (i ? ", " : "") << h.lattice.dims[i];
  os << "], \"boundary\": \"" << to_string(h.lattice.boundary) << "\"";
  os << ", \"bonds\": [";
  for (std::size_t i = 0; i < h.lattice.bonds.size(); ++i)
    os << (i ? ", " : "") << "[" << h.lattice.bonds[i].first << ", "
       << h.lattice.bonds[i].second << "]";
  os << "], \"terms\": [";
  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    const auto& t = h.terms[i];
    os << (i ? ", " : "") << "{\"axes\": \"" << t.axes << "\", \"sites\": [" << t.sites[0]
       << ", " << t.sites[1] << "], \"coeff\": " << fmt17(t.coeff) << "}";
  }
  os << "]}";
  return os.str();
}

PauliTerm make_pauli_term(std::vector<std::pair<int, char>> factors, double coeff) {
  std::sort(factors.begin(), factors.end());
  std::vector<int> sites;
  std::string axes;
  for (auto& [s, a] : factors) {
    sites.push_back(s);
    axes.push_back(a);
  }
  return PauliTerm(std::move(sites), std::move(axes), coeff);
}

}  // namespace hvqe
