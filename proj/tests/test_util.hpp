#pragma once

// Shared helpers for the test binaries: random circuits and brute-force
// oracles kept independent of the library's fast paths.

#include "qas/circuit.hpp"
#include "qas/rand.hpp"
#include "qas/sim.hpp"

#include <vector>

namespace qas::test {

inline Gate random_gate(Rng& rng, int n_qubits) {
  const int kind = int(bounded_int(rng, n_qubits >= 2 ? 5 : 4));
  const int q = int(bounded_int(rng, n_qubits));
  switch (kind) {
    case 0: return Gate::rx(q, uniform_angle(rng));
    case 1: return Gate::ry(q, uniform_angle(rng));
    case 2: return Gate::rz(q, uniform_angle(rng));
    case 3: return Gate::t(q);
    default: {
      int t = int(bounded_int(rng, n_qubits - 1));
      if (t >= q) ++t;
      return Gate::cnot(q, t);
    }
  }
}

inline std::vector<Gate> random_circuit(Rng& rng, int n_qubits, int n_gates) {
  std::vector<Gate> gates;
  gates.reserve(n_gates);
  for (int i = 0; i < n_gates; ++i) gates.push_back(random_gate(rng, n_qubits));
  return gates;
}

inline PureState random_state(Rng& rng, int n_qubits) {
  PureState s = PureState::zero(n_qubits);
  for (auto& a : s.amplitudes) {
    a = cplx{uniform_double(rng) - 0.5, uniform_double(rng) - 0.5};
  }
  double norm = std::sqrt(s.norm_sq());
  for (auto& a : s.amplitudes) a /= norm;
  return s;
}

// Brute-force expectation via explicit dense matrix-vector products.
inline double dense_expectation(const MixedState& rho, const Hamiltonian& h) {
  const std::size_t dim = rho.dim();
  const std::vector<cplx> hm = dense_matrix(h);
  cplx tr{0, 0};
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = 0; k < dim; ++k) {
      tr += hm[r * dim + k] * rho.matrix[k * dim + r];
    }
  }
  return tr.real();
}

}  // namespace qas::test
