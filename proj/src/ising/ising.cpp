#include "qgl/ising/ising.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgl::ising {

void IsingSpec::validate() const {
  if (n_qubits < 2 || n_qubits > 20) throw std::invalid_argument("IsingSpec: n_qubits in [2, 20]");
  if (n_classes == 0) throw std::invalid_argument("IsingSpec: n_classes must be positive");
  if (!std::isfinite(coupling_j) || !std::isfinite(h_global) || !std::isfinite(delta_h)) {
    throw std::invalid_argument("IsingSpec: non-finite coefficient");
  }
}

quantum::Hamiltonian build_class_hamiltonian(const IsingSpec& spec, std::size_t class_label) {
  spec.validate();
  if (class_label >= spec.n_classes) {
    throw std::invalid_argument("build_class_hamiltonian: class " + std::to_string(class_label) +
                                " outside [0, " + std::to_string(spec.n_classes) + ")");
  }
  std::vector<quantum::PauliTerm> terms;
  terms.reserve(2 * spec.n_qubits - 1);
  for (std::size_t i = 0; i + 1 < spec.n_qubits; ++i) {
    terms.push_back({-spec.coupling_j, (1u << i) | (1u << (i + 1))});
  }
  const double h = spec.field(class_label);
  for (std::size_t i = 0; i < spec.n_qubits; ++i) terms.push_back({-h, 1u << i});
  return quantum::Hamiltonian(spec.n_qubits, std::move(terms));
}

std::vector<quantum::Hamiltonian> build_all_class_hamiltonians(const IsingSpec& spec) {
  std::vector<quantum::Hamiltonian> out;
  out.reserve(spec.n_classes);
  for (std::size_t c = 0; c < spec.n_classes; ++c) out.push_back(build_class_hamiltonian(spec, c));
  return out;
}

double closed_form_ground_energy(const IsingSpec& spec, std::size_t class_label) {
  const double n = static_cast<double>(spec.n_qubits);
  return -spec.coupling_j * (n - 1.0) - n * spec.field(class_label);
}

}  // namespace qgl::ising
