#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qgl/quantum/hamiltonian.hpp"
#include "qgl/quantum/statevector.hpp"

namespace qgl::quantum {

enum class Entanglement { kLinear, kCircular };

Entanglement parse_entanglement(std::string_view name);
std::string_view to_string(Entanglement e);

struct Gate {
  enum class Kind { kRY, kRZ, kCX };
  Kind kind;
  std::size_t qubit;       // target for rotations, control for CX
  std::size_t target = 0;  // CX only
  std::size_t param = 0;   // rotations only
};

/// Hardware-efficient RY/RZ + CX circuit.
///
/// (repetitions + 1) rotation layers. Each places RY then RZ on every qubit;
/// parameter index = layer * 2n + 2 * qubit + {0: RY, 1: RZ}. Consecutive
/// rotation layers are separated by one CX entangling layer: linear is
/// 0->1, 1->2, ..., circular appends (n-1)->0.
class AnsatzCircuit {
 public:
  AnsatzCircuit(std::size_t n_qubits, std::size_t repetitions, Entanglement entanglement);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t repetitions() const noexcept { return repetitions_; }
  Entanglement entanglement() const noexcept { return entanglement_; }
  std::size_t parameter_count() const noexcept { return 2 * n_qubits_ * (repetitions_ + 1); }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  std::size_t entangling_gate_count() const;

 private:
  std::size_t n_qubits_;
  std::size_t repetitions_;
  Entanglement entanglement_;
  std::vector<Gate> gates_;
};

AnsatzCircuit build_ansatz(std::size_t n_qubits, std::size_t repetitions, Entanglement entanglement);

/// Applies the circuit to |0...0>.
Statevector prepare_state(const AnsatzCircuit& circuit, std::span<const double> params);

/// Energy of the prepared state.
double circuit_energy(const AnsatzCircuit& circuit, std::span<const double> params,
                      const Hamiltonian& h);

/// Exact gradient by the two-term parameter-shift rule:
/// dE/dtheta_k = (E(theta_k + pi/2) - E(theta_k - pi/2)) / 2.
std::vector<double> energy_gradient(const AnsatzCircuit& circuit, std::span<const double> params,
                                    const Hamiltonian& h);

}  // namespace qgl::quantum
