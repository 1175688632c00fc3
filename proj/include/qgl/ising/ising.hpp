#pragma once

#include <cstddef>
#include <vector>

#include "qgl/quantum/hamiltonian.hpp"

namespace qgl::ising {

enum class Topology { kLinearChain };

/// Parameters of the class-conditioned ferromagnetic Ising family
///   H_c = -J sum_<i,j> Z_i Z_j - h_c sum_i Z_i,   h_c = h_global + c * delta_h.
struct IsingSpec {
  std::size_t n_qubits = 4;
  double coupling_j = 1.0;
  Topology topology = Topology::kLinearChain;
  double h_global = 0.1;
  double delta_h = 0.01;
  std::size_t n_classes = 10;

  double field(std::size_t class_label) const {
    return h_global + static_cast<double>(class_label) * delta_h;
  }
  void validate() const;
};

quantum::Hamiltonian build_class_hamiltonian(const IsingSpec& spec, std::size_t class_label);

/// One Hamiltonian per class, index = label.
std::vector<quantum::Hamiltonian> build_all_class_hamiltonians(const IsingSpec& spec);

/// Closed form of the all-up ground energy for J >= 0 and non-negative fields:
/// -J (n - 1) - n h_c.
double closed_form_ground_energy(const IsingSpec& spec, std::size_t class_label);

}  // namespace qgl::ising
