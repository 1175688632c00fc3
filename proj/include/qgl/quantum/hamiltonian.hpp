#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qgl/quantum/statevector.hpp"

namespace qgl::quantum {

/// coefficient * prod_{i in z_mask} Z_i. Identity on qubits outside the mask.
struct PauliTerm {
  double coefficient = 0.0;
  std::uint32_t z_mask = 0;
};

/// A Z-only (computational-basis diagonal) Hamiltonian.
class Hamiltonian {
 public:
  Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  /// E(b) = sum_t coeff_t * prod_{i in mask_t} s_i, with s_i = +1 for bit 0, -1 for bit 1.
  double basis_energy(std::size_t basis_index) const;
  /// All 2^n diagonal entries, indexed by basis state.
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

 private:
  std::size_t n_qubits_;
  std::vector<PauliTerm> terms_;
  std::vector<double> diagonal_;
};

/// <psi|H|psi> = sum_b |psi_b|^2 E(b).
double expectation(const Statevector& state, const Hamiltonian& h);

struct GroundState {
  double energy;
  std::size_t index;  // lowest basis index attaining the minimum
};

inline constexpr std::size_t kMaxOracleQubits = 20;

/// Exhaustive minimum over the 2^n basis energies.
GroundState ground_state_energy(const Hamiltonian& h);

/// Largest basis energy (top of the spectrum for a diagonal H).
double max_basis_energy(const Hamiltonian& h);

}  // namespace qgl::quantum
