#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hvqe {

/// A weighted tensor product of single-qubit Pauli operators.
/// Sites are strictly increasing and axes[i] ('x'|'y'|'z') acts on sites[i];
/// identity factors are omitted.
struct PauliTerm {
  std::vector<int> sites;
  std::string axes;
  double coeff = 1.0;

  PauliTerm() = default;
  PauliTerm(std::vector<int> s, std::string a, double c = 1.0)
      : sites(std::move(s)), axes(std::move(a)), coeff(c) {
    validate();
  }

  void validate() const {
    if (sites.size() != axes.size())
      throw std::invalid_argument("PauliTerm: sites/axes length mismatch");
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (i > 0 && sites[i] <= sites[i - 1])
        throw std::invalid_argument("PauliTerm: sites must be strictly increasing");
      char a = axes[i];
      if (a != 'x' && a != 'y' && a != 'z')
        throw std::invalid_argument("PauliTerm: bad axis");
    }
  }

  bool operator==(const PauliTerm& o) const {
    return sites == o.sites && axes == o.axes && coeff == o.coeff;
  }
};

/// Builds a term from unsorted (site, axis) pairs.
PauliTerm make_pauli_term(std::vector<std::pair<int, char>> factors, double coeff = 1.0);

}  // namespace hvqe
