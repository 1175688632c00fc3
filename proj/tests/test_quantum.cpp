#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qgl/core/errors.hpp"
#include "qgl/core/rng.hpp"
#include "qgl/quantum/ansatz.hpp"
#include "qgl/quantum/hamiltonian.hpp"
#include "qgl/quantum/statevector.hpp"

using namespace qgl;
using namespace qgl::quantum;
using CMatrix = Eigen::MatrixXcd;
using cd = std::complex<double>;

namespace {

// Dense oracle: full 2^n operators built from Kronecker products, with qubit 0
// as the rightmost factor so that basis index bit i is qubit i.
CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix embed(const CMatrix& op, std::size_t qubit, std::size_t n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t q = n; q-- > 0;) out = kron(out, q == qubit ? op : CMatrix::Identity(2, 2));
  return out;
}

CMatrix ry_matrix(double t) {
  CMatrix m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

CMatrix rz_matrix(double t) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(cd(0, -t / 2));
  m(1, 1) = std::exp(cd(0, t / 2));
  return m;
}

CMatrix cx_matrix(std::size_t control, std::size_t target, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const std::size_t out = ((b >> control) & 1U) ? b ^ (std::size_t{1} << target) : b;
    m(out, b) = 1.0;
  }
  return m;
}

CMatrix z_matrix() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = -1;
  return m;
}

Eigen::VectorXcd to_eigen(const Statevector& s) {
  Eigen::VectorXcd v(s.dimension());
  for (std::size_t i = 0; i < s.dimension(); ++i) v(i) = s[i];
  return v;
}

Eigen::VectorXcd oracle_state(const AnsatzCircuit& c, std::span<const double> p) {
  const std::size_t n = c.n_qubits();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::size_t{1} << n);
  v(0) = 1.0;
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case Gate::Kind::kRY: v = embed(ry_matrix(p[g.param]), g.qubit, n) * v; break;
      case Gate::Kind::kRZ: v = embed(rz_matrix(p[g.param]), g.qubit, n) * v; break;
      case Gate::Kind::kCX: v = cx_matrix(g.qubit, g.target, n) * v; break;
    }
  }
  return v;
}

CMatrix dense_hamiltonian(const Hamiltonian& h) {
  const std::size_t n = h.n_qubits();
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    CMatrix term = CMatrix::Identity(dim, dim);
    for (std::size_t q = 0; q < n; ++q)
      if ((t.z_mask >> q) & 1U) term = embed(z_matrix(), q, n) * term;
    m += t.coefficient * term;
  }
  return m;
}

std::vector<double> random_params(std::size_t k, Rng& rng) {
  std::vector<double> p(k);
  for (auto& x : p) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return p;
}

Hamiltonian random_hamiltonian(std::size_t n, Rng& rng) {
  std::vector<PauliTerm> terms;
  for (int i = 0; i < 6; ++i)
    terms.push_back({rng.uniform(-1, 1), static_cast<std::uint32_t>(rng.index(std::size_t{1} << n))});
  return Hamiltonian(n, terms);
}

}  // namespace

TEST_CASE("single-qubit gates match their matrices") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3;
    std::vector<Amplitude> amps(8);
    for (auto& a : amps) a = {rng.normal(), rng.normal()};
    Statevector s(amps);
    Eigen::VectorXcd v(8);
    for (int i = 0; i < 8; ++i) v(i) = amps[i];
    const double t = rng.uniform(-4, 4);
    const std::size_t q = rng.index(n);
    CHECK((to_eigen(apply_ry(s, q, t)) - embed(ry_matrix(t), q, n) * v).norm() < 1e-12);
    CHECK((to_eigen(apply_rz(s, q, t)) - embed(rz_matrix(t), q, n) * v).norm() < 1e-12);
    const std::size_t target = (q + 1) % n;
    CHECK((to_eigen(apply_cx(s, q, target)) - cx_matrix(q, target, n) * v).norm() < 1e-12);
  }
}

TEST_CASE("gate identities") {
  const auto one = apply_ry(Statevector(1), 0, std::numbers::pi);
  CHECK(one.probability(1) == doctest::Approx(1.0).epsilon(1e-15));
  // RZ on |0> is a pure phase.
  CHECK(fidelity_overlap(apply_rz(Statevector(2), 1, 0.7), Statevector(2)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // CX truth table on basis states 0..3 with control qubit 0.
  const std::size_t expected[4] = {0, 3, 2, 1};
  for (std::size_t b = 0; b < 4; ++b) {
    const auto out = apply_cx(Statevector::basis(2, b), 0, 1);
    CHECK(out.probability(expected[b]) == 1.0);
  }
  CHECK_THROWS_AS(apply_cx(Statevector(2), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_ry(Statevector(2), 2, 0.1), std::out_of_range);
}

TEST_CASE("norm is preserved by random circuits") {
  Rng rng(11);
  Statevector s(5);
  for (int i = 0; i < 400; ++i) {
    const std::size_t q = rng.index(5);
    switch (rng.index(3)) {
      case 0: s.ry(q, rng.uniform(-7, 7)); break;
      case 1: s.rz(q, rng.uniform(-7, 7)); break;
      default: s.cx(q, (q + 1 + rng.index(4)) % 5); break;
    }
  }
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("ansatz structure") {
  const auto circ = build_ansatz(4, 1, Entanglement::kCircular);
  CHECK(circ.parameter_count() == 16);
  CHECK(circ.entangling_gate_count() == 4);
  CHECK(build_ansatz(4, 1, Entanglement::kLinear).entangling_gate_count() == 3);
  CHECK(build_ansatz(3, 2, Entanglement::kLinear).parameter_count() == 18);
  // Every parameter is used exactly once.
  std::vector<int> uses(circ.parameter_count(), 0);
  for (const auto& g : circ.gates())
    if (g.kind != Gate::Kind::kCX) ++uses[g.param];
  for (int u : uses) CHECK(u == 1);
  CHECK(parse_entanglement("linear") == Entanglement::kLinear);
  CHECK(to_string(Entanglement::kCircular) == "circular");
  CHECK_THROWS_AS(parse_entanglement("full"), std::invalid_argument);
  CHECK_THROWS_AS(build_ansatz(1, 1, Entanglement::kLinear), std::invalid_argument);
  std::vector<double> short_params(15, 0.0);
  CHECK_THROWS_AS(prepare_state(circ, short_params), std::invalid_argument);
}

TEST_CASE("prepared states and energies match the dense oracle") {
  Rng rng(5);
  for (auto ent : {Entanglement::kLinear, Entanglement::kCircular}) {
    for (std::size_t n : {2, 3, 4}) {
      const auto circ = build_ansatz(n, 2, ent);
      for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_params(circ.parameter_count(), rng);
        const Eigen::VectorXcd ref = oracle_state(circ, p);
        CHECK((to_eigen(prepare_state(circ, p)) - ref).norm() < 1e-12);
        const Hamiltonian h = random_hamiltonian(n, rng);
        const double dense = (ref.adjoint() * dense_hamiltonian(h) * ref)(0, 0).real();
        CHECK(std::abs(circuit_energy(circ, p, h) - dense) < 1e-12);
      }
    }
  }
}

TEST_CASE("hamiltonian diagonal matches the dense Pauli construction") {
  Rng rng(8);
  const Hamiltonian h = random_hamiltonian(4, rng);
  const CMatrix dense = dense_hamiltonian(h);
  CHECK((dense - CMatrix(dense.diagonal().asDiagonal())).norm() < 1e-14);
  for (std::size_t b = 0; b < 16; ++b) {
    CHECK(std::abs(h.basis_energy(b) - dense(b, b).real()) < 1e-14);
    CHECK(h.diagonal()[b] == h.basis_energy(b));
  }
  // Basis expectation equals the basis energy.
  CHECK(std::abs(expectation(Statevector::basis(4, 6), h) - h.basis_energy(6)) < 1e-15);
}

TEST_CASE("ground state search, ties and capacity") {
  const Hamiltonian flat(2, {{0.0, 0b01}});
  const auto g = ground_state_energy(flat);
  CHECK(g.energy == 0.0);
  CHECK(g.index == 0);
  const Hamiltonian z1(2, {{1.0, 0b10}});
  CHECK(ground_state_energy(z1).index == 2);
  CHECK(max_basis_energy(z1) == 1.0);
  const Hamiltonian big(21, {{1.0, 1}});
  CHECK_THROWS_AS(ground_state_energy(big), CapacityError);
  CHECK_THROWS_AS(max_basis_energy(big), CapacityError);
  CHECK_THROWS_AS(Hamiltonian(3, {{1.0, 0b1000}}), std::invalid_argument);
}

TEST_CASE("parameter shift agrees with central differences") {
  Rng rng(17);
  const auto circ = build_ansatz(3, 2, Entanglement::kCircular);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_params(circ.parameter_count(), rng);
    const Hamiltonian h = random_hamiltonian(3, rng);
    const auto g = energy_gradient(circ, p, h);
    REQUIRE(g.size() == p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto up = p, down = p;
      up[k] += 1e-5;
      down[k] -= 1e-5;
      const double fd = (circuit_energy(circ, up, h) - circuit_energy(circ, down, h)) / 2e-5;
      CHECK(std::abs(g[k] - fd) < 1e-8);
    }
  }
}
