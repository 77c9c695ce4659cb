#pragma once

// Dense pure-state / density-matrix simulation of small (<= 6 qubit)
// circuits with per-gate depolarizing noise and Pauli-observable
// expectation values.
//
// Index convention: qubit 0 is the MOST significant bit of the basis
// index, i.e. basis state |q0 q1 ... q_{n-1}> lives at index
// (q0 << (n-1)) | ... | q_{n-1}.  Rotation gates follow the convention
// R_P(theta) = exp(-i * theta * P / 2).

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qas {

using cplx = std::complex<double>;

enum class GateKind { RX, RY, RZ, T, CNOT, Identity };

bool gate_is_rotation(GateKind k);
const char* gate_name(GateKind k);

/// One gate instance in a circuit. `param_index` >= 0 marks a trainable
/// rotation and gives its slot in the flat parameter vector.
struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // 1 or 2 entries
  double angle = 0.0;       // rotations only
  int param_index = -1;

  static Gate rx(int q, double a, int p = -1) { return {GateKind::RX, {q}, a, p}; }
  static Gate ry(int q, double a, int p = -1) { return {GateKind::RY, {q}, a, p}; }
  static Gate rz(int q, double a, int p = -1) { return {GateKind::RZ, {q}, a, p}; }
  static Gate t(int q) { return {GateKind::T, {q}, 0.0, -1}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, {c, t}, 0.0, -1}; }
  static Gate identity(int q) { return {GateKind::Identity, {q}, 0.0, -1}; }
};

struct PureState {
  int n_qubits = 0;
  std::vector<cplx> amplitudes;

  static PureState zero(int n_qubits);
  double norm_sq() const;
};

struct MixedState {
  int n_qubits = 0;
  std::vector<cplx> matrix;  // row-major, dim x dim with dim = 2^n

  static MixedState zero(int n_qubits);
  static MixedState from_pure(const PureState& psi);
  std::size_t dim() const { return std::size_t(1) << n_qubits; }
  cplx& at(std::size_t r, std::size_t c) { return matrix[r * dim() + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return matrix[r * dim() + c]; }
  double trace_real() const;
};

struct NoiseModel {
  double p1 = 0.0;       // single-qubit depolarizing probability
  double p2 = 0.0;       // two-qubit depolarizing probability
  bool enabled = false;
  bool noise_on_encoding = true;  // whether encoding gates also incur noise

  static NoiseModel off() { return {0.0, 0.0, false, true}; }
  static NoiseModel depolarizing(double p1, double p2) { return {p1, p2, true, true}; }
};

/// Real-weighted Pauli word, one letter from {I,X,Y,Z} per qubit.
struct PauliString {
  double coefficient = 0.0;
  std::string letters;  // e.g. "IZZI"
};

struct Hamiltonian {
  int n_qubits = 0;
  std::vector<PauliString> terms;

  void add(double coeff, const std::string& letters);
};

void apply_gate(PureState& state, const Gate& g);
void apply_gate(MixedState& state, const Gate& g);

/// rho <- (1-p) rho + p * (I/2^k tensor Tr_q rho) on the targeted qubits.
void apply_depolarizing(MixedState& state, const std::vector<int>& qubits, double p);

/// Applies a full gate list; on MixedState, inserts the model's
/// depolarizing channel after every non-identity gate.
void run_circuit(PureState& state, const std::vector<Gate>& gates);
void run_circuit(MixedState& state, const std::vector<Gate>& gates, const NoiseModel& noise);

double expectation(const PureState& state, const Hamiltonian& obs);
double expectation(const MixedState& state, const Hamiltonian& obs);
double expectation(const PureState& state, const PauliString& term);
double expectation(const MixedState& state, const PauliString& term);

/// Dense 2^n x 2^n matrix of the Hamiltonian (for test oracles and the
/// exact eigensolver).
std::vector<cplx> dense_matrix(const Hamiltonian& h);

/// Minimum eigenvalue via dense Hermitian diagonalization; n_qubits <= 6.
double exact_ground_energy(const Hamiltonian& h);

}  // namespace qas
