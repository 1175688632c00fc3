#include "qgl/quantum/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qgl::quantum {

Statevector::Statevector(std::size_t n_qubits)
    : n_qubits_(n_qubits), amplitudes_(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0}) {
  if (n_qubits == 0 || n_qubits > 30) {
    throw std::invalid_argument("Statevector: qubit count must be in [1, 30]");
  }
  amplitudes_[0] = 1.0;
}

Statevector::Statevector(std::vector<Amplitude> amplitudes) : amplitudes_(std::move(amplitudes)) {
  const std::size_t dim = amplitudes_.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("Statevector: amplitude count must be a power of two >= 2");
  }
  n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
}

Statevector Statevector::basis(std::size_t n_qubits, std::size_t index) {
  Statevector s(n_qubits);
  if (index >= s.dimension()) throw std::out_of_range("Statevector::basis: index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

double Statevector::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

void Statevector::check_qubit(std::size_t qubit) const {
  if (qubit >= n_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(n_qubits_) + " qubits");
  }
}

void Statevector::ry(std::size_t qubit, double angle) {
  check_qubit(qubit);
  if (!std::isfinite(angle)) throw std::invalid_argument("ry: non-finite angle");
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amplitudes_[i];
    const Amplitude a1 = amplitudes_[i | bit];
    amplitudes_[i] = c * a0 - s * a1;
    amplitudes_[i | bit] = s * a0 + c * a1;
  }
}

void Statevector::rz(std::size_t qubit, double angle) {
  check_qubit(qubit);
  if (!std::isfinite(angle)) throw std::invalid_argument("rz: non-finite angle");
  const Amplitude phase0 = std::polar(1.0, -0.5 * angle);
  const Amplitude phase1 = std::polar(1.0, 0.5 * angle);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    amplitudes_[i] *= (i & bit) ? phase1 : phase0;
  }
}

void Statevector::cx(std::size_t control, std::size_t target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("cx: control and target must differ");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amplitudes_[i], amplitudes_[i | tbit]);
  }
}

Statevector apply_ry(Statevector state, std::size_t qubit, double angle) {
  state.ry(qubit, angle);
  return state;
}

Statevector apply_rz(Statevector state, std::size_t qubit, double angle) {
  state.rz(qubit, angle);
  return state;
}

Statevector apply_cx(Statevector state, std::size_t control, std::size_t target) {
  state.cx(control, target);
  return state;
}

double fidelity_overlap(const Statevector& a, const Statevector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("fidelity_overlap: size mismatch");
  Amplitude inner{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) inner += std::conj(a[i]) * b[i];
  return std::abs(inner);
}

}  // namespace qgl::quantum
