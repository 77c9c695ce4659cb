#include "qas/sim.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qas {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_qubits(int n_qubits, const std::vector<int>& qs) {
  for (int q : qs) {
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range("qubit index " + std::to_string(q) +
                              " out of range for " + std::to_string(n_qubits) + " qubits");
    }
  }
  if (qs.size() == 2 && qs[0] == qs[1]) {
    throw std::out_of_range("two-qubit gate requires distinct qubits");
  }
}

// 2x2 unitary for a single-qubit gate, row-major.
std::array<cplx, 4> single_qubit_matrix(const Gate& g) {
  const double h = g.angle / 2.0;
  switch (g.kind) {
    case GateKind::RX:
      return {cplx{std::cos(h), 0}, -kI * std::sin(h), -kI * std::sin(h), cplx{std::cos(h), 0}};
    case GateKind::RY:
      return {cplx{std::cos(h), 0}, cplx{-std::sin(h), 0}, cplx{std::sin(h), 0},
              cplx{std::cos(h), 0}};
    case GateKind::RZ:
      return {std::exp(-kI * h), cplx{0, 0}, cplx{0, 0}, std::exp(kI * h)};
    case GateKind::T:
      return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, std::exp(kI * (M_PI / 4.0))};
    default:
      throw std::invalid_argument("not a single-qubit gate");
  }
}

void validate_gate(int n_qubits, const Gate& g) {
  check_qubits(n_qubits, g.qubits);
  const bool rot = gate_is_rotation(g.kind);
  if (g.kind == GateKind::CNOT) {
    if (g.qubits.size() != 2) throw std::invalid_argument("CNOT takes two qubits");
  } else {
    if (g.qubits.size() != 1) throw std::invalid_argument("single-qubit gate takes one qubit");
  }
  if (!rot && g.angle != 0.0) {
    throw std::invalid_argument("angle supplied for non-rotation gate");
  }
}

// Applies a 2x2 matrix on qubit q to every column of a dense array of
// `n_cols` stacked state vectors (n_cols = 1 for pure states, dim for
// density matrices acting from the left).
void apply_1q_left(std::vector<cplx>& data, int n_qubits, int q,
                   const std::array<cplx, 4>& u, std::size_t n_cols) {
  const std::size_t dim = std::size_t(1) << n_qubits;
  const std::size_t stride = std::size_t(1) << (n_qubits - 1 - q);  // qubit 0 most significant
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & stride) continue;
    const std::size_t i0 = base * n_cols;
    const std::size_t i1 = (base | stride) * n_cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
      const cplx a0 = data[i0 + c];
      const cplx a1 = data[i1 + c];
      data[i0 + c] = u[0] * a0 + u[1] * a1;
      data[i1 + c] = u[2] * a0 + u[3] * a1;
    }
  }
}

void apply_cnot_left(std::vector<cplx>& data, int n_qubits, int control, int target,
                     std::size_t n_cols) {
  const std::size_t dim = std::size_t(1) << n_qubits;
  const std::size_t cbit = std::size_t(1) << (n_qubits - 1 - control);
  const std::size_t tbit = std::size_t(1) << (n_qubits - 1 - target);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    if ((idx & cbit) && !(idx & tbit)) {
      const std::size_t partner = idx | tbit;
      for (std::size_t c = 0; c < n_cols; ++c) {
        std::swap(data[idx * n_cols + c], data[partner * n_cols + c]);
      }
    }
  }
}

// Right-multiplication rho <- rho * U^dagger for a 1q unitary.
void apply_1q_right_dagger(MixedState& rho, int q, const std::array<cplx, 4>& u) {
  const std::size_t dim = rho.dim();
  const std::size_t stride = std::size_t(1) << (rho.n_qubits - 1 - q);
  // (rho U^dag)[r][c] pairs columns c0, c1 = c0|stride.
  const cplx u00 = std::conj(u[0]), u01 = std::conj(u[1]);
  const cplx u10 = std::conj(u[2]), u11 = std::conj(u[3]);
  for (std::size_t r = 0; r < dim; ++r) {
    cplx* row = &rho.matrix[r * dim];
    for (std::size_t c = 0; c < dim; ++c) {
      if (c & stride) continue;
      const cplx a0 = row[c];
      const cplx a1 = row[c | stride];
      // column j of U^dag is (conj(u[j]), conj(u[j+2]))
      row[c] = a0 * u00 + a1 * u01;
      row[c | stride] = a0 * u10 + a1 * u11;
    }
  }
}

void apply_cnot_right(MixedState& rho, int control, int target) {
  const std::size_t dim = rho.dim();
  const std::size_t cbit = std::size_t(1) << (rho.n_qubits - 1 - control);
  const std::size_t tbit = std::size_t(1) << (rho.n_qubits - 1 - target);
  for (std::size_t r = 0; r < dim; ++r) {
    cplx* row = &rho.matrix[r * dim];
    for (std::size_t c = 0; c < dim; ++c) {
      if ((c & cbit) && !(c & tbit)) {
        std::swap(row[c], row[c | tbit]);
      }
    }
  }
}

// Index mask and phase of P|b> = phase * |b ^ flip>, for one Pauli word.
struct PauliAction {
  std::size_t flip = 0;
  std::vector<int> x_bits;  // bit positions carrying X
  std::vector<int> y_bits;  // bit positions carrying Y
  std::vector<int> z_bits;  // bit positions carrying Z
};

PauliAction pauli_action(const PauliString& term, int n_qubits) {
  if (int(term.letters.size()) != n_qubits) {
    throw std::invalid_argument("Pauli string length does not match qubit count");
  }
  PauliAction act;
  for (int q = 0; q < n_qubits; ++q) {
    const int bit = n_qubits - 1 - q;
    switch (term.letters[q]) {
      case 'I': break;
      case 'X':
        act.flip |= std::size_t(1) << bit;
        act.x_bits.push_back(bit);
        break;
      case 'Y':
        act.flip |= std::size_t(1) << bit;
        act.y_bits.push_back(bit);
        break;
      case 'Z':
        act.z_bits.push_back(bit);
        break;
      default:
        throw std::invalid_argument("invalid Pauli letter");
    }
  }
  return act;
}

// Amplitude factor of P acting on basis state |b>: P|b> = phase(b) |b ^ flip>.
cplx pauli_phase(const PauliAction& act, std::size_t b) {
  cplx phase{1.0, 0.0};
  for (int bit : act.z_bits) {
    if (b & (std::size_t(1) << bit)) phase = -phase;
  }
  for (int bit : act.y_bits) {
    // Y|0> = i|1>, Y|1> = -i|0>
    phase *= (b & (std::size_t(1) << bit)) ? -kI : kI;
  }
  (void)act.x_bits;  // X contributes phase +1
  return phase;
}

}  // namespace

bool gate_is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Identity: return "I";
  }
  return "?";
}

PureState PureState::zero(int n_qubits) {
  PureState s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t(1) << n_qubits, cplx{0, 0});
  s.amplitudes[0] = cplx{1, 0};
  return s;
}

double PureState::norm_sq() const {
  double acc = 0.0;
  for (const cplx& a : amplitudes) acc += std::norm(a);
  return acc;
}

MixedState MixedState::zero(int n_qubits) {
  MixedState s;
  s.n_qubits = n_qubits;
  const std::size_t dim = std::size_t(1) << n_qubits;
  s.matrix.assign(dim * dim, cplx{0, 0});
  s.matrix[0] = cplx{1, 0};
  return s;
}

MixedState MixedState::from_pure(const PureState& psi) {
  MixedState s;
  s.n_qubits = psi.n_qubits;
  const std::size_t dim = psi.amplitudes.size();
  s.matrix.resize(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      s.matrix[r * dim + c] = psi.amplitudes[r] * std::conj(psi.amplitudes[c]);
    }
  }
  return s;
}

double MixedState::trace_real() const {
  const std::size_t d = dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) acc += matrix[i * d + i].real();
  return acc;
}

void Hamiltonian::add(double coeff, const std::string& letters) {
  if (n_qubits == 0) n_qubits = int(letters.size());
  if (int(letters.size()) != n_qubits) {
    throw std::invalid_argument("Pauli term length mismatch");
  }
  terms.push_back({coeff, letters});
}

void apply_gate(PureState& state, const Gate& g) {
  validate_gate(state.n_qubits, g);
  if (g.kind == GateKind::Identity) return;
  if (g.kind == GateKind::CNOT) {
    apply_cnot_left(state.amplitudes, state.n_qubits, g.qubits[0], g.qubits[1], 1);
  } else {
    apply_1q_left(state.amplitudes, state.n_qubits, g.qubits[0], single_qubit_matrix(g), 1);
  }
}

void apply_gate(MixedState& state, const Gate& g) {
  validate_gate(state.n_qubits, g);
  if (g.kind == GateKind::Identity) return;
  const std::size_t dim = state.dim();
  if (g.kind == GateKind::CNOT) {
    apply_cnot_left(state.matrix, state.n_qubits, g.qubits[0], g.qubits[1], dim);
    apply_cnot_right(state, g.qubits[0], g.qubits[1]);
  } else {
    const auto u = single_qubit_matrix(g);
    apply_1q_left(state.matrix, state.n_qubits, g.qubits[0], u, dim);
    apply_1q_right_dagger(state, g.qubits[0], u);
  }
}

void apply_depolarizing(MixedState& state, const std::vector<int>& qubits, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing probability must be in [0,1]");
  check_qubits(state.n_qubits, qubits);
  if (p == 0.0 || qubits.empty()) return;

  const std::size_t dim = state.dim();
  std::size_t qmask = 0;
  for (int q : qubits) qmask |= std::size_t(1) << (state.n_qubits - 1 - q);
  const std::size_t k = qubits.size();
  const double inv = 1.0 / double(std::size_t(1) << k);

  // mixed_part[r][c] = delta on targeted bits * (Tr_q rho)[r',c'] / 2^k,
  // accumulated by summing rho over the targeted-bit diagonal.
  std::vector<cplx> mixed(dim * dim, cplx{0, 0});
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & qmask) != (c & qmask)) continue;  // off-diagonal in traced subsystem
      // sum over the 2^k settings of the targeted bits
      const std::size_t r_rest = r & ~qmask;
      const std::size_t c_rest = c & ~qmask;
      cplx acc{0, 0};
      // enumerate targeted-bit assignments via subset iteration over qmask
      std::size_t sub = 0;
      do {
        acc += state.matrix[(r_rest | sub) * dim + (c_rest | sub)];
        sub = (sub - qmask) & qmask;
      } while (sub != 0);
      mixed[r * dim + c] = acc * inv;
    }
  }
  for (std::size_t i = 0; i < dim * dim; ++i) {
    state.matrix[i] = (1.0 - p) * state.matrix[i] + p * mixed[i];
  }
}

void run_circuit(PureState& state, const std::vector<Gate>& gates) {
  for (const Gate& g : gates) apply_gate(state, g);
}

void run_circuit(MixedState& state, const std::vector<Gate>& gates, const NoiseModel& noise) {
  for (const Gate& g : gates) {
    apply_gate(state, g);
    if (!noise.enabled || g.kind == GateKind::Identity) continue;
    const double p = (g.kind == GateKind::CNOT) ? noise.p2 : noise.p1;
    apply_depolarizing(state, g.qubits, p);
  }
}

double expectation(const PureState& state, const PauliString& term) {
  const PauliAction act = pauli_action(term, state.n_qubits);
  const std::size_t dim = state.amplitudes.size();
  cplx acc{0, 0};
  for (std::size_t b = 0; b < dim; ++b) {
    acc += std::conj(state.amplitudes[b ^ act.flip]) * pauli_phase(act, b) * state.amplitudes[b];
  }
  return term.coefficient * acc.real();
}

double expectation(const MixedState& state, const PauliString& term) {
  const PauliAction act = pauli_action(term, state.n_qubits);
  const std::size_t dim = state.dim();
  // Tr(P rho) = sum_b <b|P rho|b> = sum_b conj(phase(b)) rho[b^flip][b],
  // using P|b> = phase(b)|b^flip> and P Hermitian.
  cplx acc{0, 0};
  for (std::size_t b = 0; b < dim; ++b) {
    acc += std::conj(pauli_phase(act, b)) * state.matrix[(b ^ act.flip) * dim + b];
  }
  return term.coefficient * acc.real();
}

double expectation(const PureState& state, const Hamiltonian& obs) {
  if (obs.n_qubits != state.n_qubits) throw std::invalid_argument("observable qubit-count mismatch");
  double acc = 0.0;
  for (const auto& t : obs.terms) acc += expectation(state, t);
  return acc;
}

double expectation(const MixedState& state, const Hamiltonian& obs) {
  if (obs.n_qubits != state.n_qubits) throw std::invalid_argument("observable qubit-count mismatch");
  double acc = 0.0;
  for (const auto& t : obs.terms) acc += expectation(state, t);
  return acc;
}

std::vector<cplx> dense_matrix(const Hamiltonian& h) {
  const std::size_t dim = std::size_t(1) << h.n_qubits;
  std::vector<cplx> m(dim * dim, cplx{0, 0});
  for (const auto& term : h.terms) {
    const PauliAction act = pauli_action(term, h.n_qubits);
    for (std::size_t c = 0; c < dim; ++c) {
      m[(c ^ act.flip) * dim + c] += term.coefficient * pauli_phase(act, c);
    }
  }
  return m;
}

double exact_ground_energy(const Hamiltonian& h) {
  if (h.n_qubits > 6) throw std::invalid_argument("exact_ground_energy supports at most 6 qubits");
  const std::size_t dim = std::size_t(1) << h.n_qubits;
  const std::vector<cplx> m = dense_matrix(h);
  Eigen::MatrixXcd em(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) em(r, c) = m[r * dim + c];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace qas
