#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qgl::quantum {

using Amplitude = std::complex<double>;

/// Dense amplitude vector over 2^n computational basis states.
///
/// Basis index bit i holds qubit i (qubit 0 is the least significant bit).
/// Every gate is unitary, so the norm stays 1 up to rounding.
class Statevector {
 public:
  /// |0...0> on n qubits.
  explicit Statevector(std::size_t n_qubits);
  /// Takes ownership of explicit amplitudes; the length must be a power of two.
  explicit Statevector(std::vector<Amplitude> amplitudes);

  static Statevector basis(std::size_t n_qubits, std::size_t index);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const noexcept;
  double probability(std::size_t index) const { return std::norm(amplitudes_[index]); }

  // In-place gate kernels. The free functions below wrap these for value use.
  void ry(std::size_t qubit, double angle);
  void rz(std::size_t qubit, double angle);
  void cx(std::size_t control, std::size_t target);

 private:
  void check_qubit(std::size_t qubit) const;

  std::size_t n_qubits_;
  std::vector<Amplitude> amplitudes_;
};

Statevector apply_ry(Statevector state, std::size_t qubit, double angle);
Statevector apply_rz(Statevector state, std::size_t qubit, double angle);
Statevector apply_cx(Statevector state, std::size_t control, std::size_t target);

/// |<a|b>|, which is 1 exactly when the states agree up to global phase.
double fidelity_overlap(const Statevector& a, const Statevector& b);

}  // namespace qgl::quantum
