#include "qgl/quantum/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qgl/core/errors.hpp"

namespace qgl::quantum {

Hamiltonian::Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits == 0 || n_qubits > 30) {
    throw std::invalid_argument("Hamiltonian: qubit count must be in [1, 30]");
  }
  const std::uint64_t allowed = (std::uint64_t{1} << n_qubits) - 1;
  for (const auto& t : terms_) {
    if ((t.z_mask & ~allowed) != 0) {
      throw std::invalid_argument("Hamiltonian: term references a qubit >= n_qubits");
    }
    if (!std::isfinite(t.coefficient)) {
      throw std::invalid_argument("Hamiltonian: non-finite coefficient");
    }
  }
  if (n_qubits <= kMaxOracleQubits) {
    diagonal_.resize(std::size_t{1} << n_qubits);
    for (std::size_t b = 0; b < diagonal_.size(); ++b) diagonal_[b] = basis_energy(b);
  }
}

double Hamiltonian::basis_energy(std::size_t basis_index) const {
  double e = 0.0;
  for (const auto& t : terms_) {
    const bool odd = std::popcount(static_cast<std::uint64_t>(basis_index) & t.z_mask) & 1;
    e += odd ? -t.coefficient : t.coefficient;
  }
  return e;
}

double expectation(const Statevector& state, const Hamiltonian& h) {
  if (state.n_qubits() != h.n_qubits()) {
    throw std::invalid_argument("expectation: qubit-count mismatch between state and Hamiltonian");
  }
  const auto& diag = h.diagonal();
  if (diag.empty()) throw CapacityError("expectation: Hamiltonian too large for the diagonal path");
  double e = 0.0;
  for (std::size_t b = 0; b < diag.size(); ++b) e += state.probability(b) * diag[b];
  return e;
}

GroundState ground_state_energy(const Hamiltonian& h) {
  if (h.n_qubits() > kMaxOracleQubits) {
    throw CapacityError("ground_state_energy: at most 20 qubits supported by enumeration");
  }
  GroundState best{std::numeric_limits<double>::infinity(), 0};
  const auto& diag = h.diagonal();
  for (std::size_t b = 0; b < diag.size(); ++b) {
    if (diag[b] < best.energy) best = {diag[b], b};
  }
  return best;
}

double max_basis_energy(const Hamiltonian& h) {
  if (h.n_qubits() > kMaxOracleQubits) {
    throw CapacityError("max_basis_energy: at most 20 qubits supported by enumeration");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double e : h.diagonal()) top = std::max(top, e);
  return top;
}

}  // namespace qgl::quantum
