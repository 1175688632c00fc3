#include "qgl/quantum/ansatz.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace qgl::quantum {

Entanglement parse_entanglement(std::string_view name) {
  if (name == "circular") return Entanglement::kCircular;
  if (name == "linear") return Entanglement::kLinear;
  throw std::invalid_argument("unknown entanglement pattern: " + std::string(name));
}

std::string_view to_string(Entanglement e) {
  return e == Entanglement::kCircular ? "circular" : "linear";
}

AnsatzCircuit::AnsatzCircuit(std::size_t n_qubits, std::size_t repetitions,
                             Entanglement entanglement)
    : n_qubits_(n_qubits), repetitions_(repetitions), entanglement_(entanglement) {
  if (n_qubits < 2 || n_qubits > 20) {
    throw std::invalid_argument("build_ansatz: n_qubits must be in [2, 20]");
  }
  for (std::size_t layer = 0; layer <= repetitions; ++layer) {
    if (layer > 0) {
      for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
        gates_.push_back({Gate::Kind::kCX, q, q + 1});
      }
      if (entanglement == Entanglement::kCircular) {
        gates_.push_back({Gate::Kind::kCX, n_qubits - 1, 0});
      }
    }
    const std::size_t base = layer * 2 * n_qubits;
    for (std::size_t q = 0; q < n_qubits; ++q) {
      gates_.push_back({Gate::Kind::kRY, q, 0, base + 2 * q});
      gates_.push_back({Gate::Kind::kRZ, q, 0, base + 2 * q + 1});
    }
  }
}

std::size_t AnsatzCircuit::entangling_gate_count() const {
  std::size_t n = 0;
  for (const auto& g : gates_) n += g.kind == Gate::Kind::kCX;
  return n;
}

AnsatzCircuit build_ansatz(std::size_t n_qubits, std::size_t repetitions,
                           Entanglement entanglement) {
  return AnsatzCircuit(n_qubits, repetitions, entanglement);
}

Statevector prepare_state(const AnsatzCircuit& circuit, std::span<const double> params) {
  if (params.size() != circuit.parameter_count()) {
    throw std::invalid_argument("prepare_state: expected " +
                                std::to_string(circuit.parameter_count()) + " parameters, got " +
                                std::to_string(params.size()));
  }
  Statevector state(circuit.n_qubits());
  for (const auto& g : circuit.gates()) {
    switch (g.kind) {
      case Gate::Kind::kRY: state.ry(g.qubit, params[g.param]); break;
      case Gate::Kind::kRZ: state.rz(g.qubit, params[g.param]); break;
      case Gate::Kind::kCX: state.cx(g.qubit, g.target); break;
    }
  }
  return state;
}

double circuit_energy(const AnsatzCircuit& circuit, std::span<const double> params,
                      const Hamiltonian& h) {
  return expectation(prepare_state(circuit, params), h);
}

std::vector<double> energy_gradient(const AnsatzCircuit& circuit, std::span<const double> params,
                                    const Hamiltonian& h) {
  if (params.size() != circuit.parameter_count()) {
    throw std::invalid_argument("energy_gradient: parameter length mismatch");
  }
  constexpr double kShift = std::numbers::pi / 2.0;
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kShift;
    const double plus = circuit_energy(circuit, shifted, h);
    shifted[k] = params[k] - kShift;
    const double minus = circuit_energy(circuit, shifted, h);
    shifted[k] = params[k];
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

}  // namespace qgl::quantum
