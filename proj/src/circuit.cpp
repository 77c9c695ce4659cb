#include "qas/circuit.hpp"

#include "qas/rand.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qas {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

GateKind kind_from_letter(char c) {
  switch (c) {
    case 'X': return GateKind::RX;
    case 'Y': return GateKind::RY;
    case 'Z': return GateKind::RZ;
    default: throw std::invalid_argument(std::string("unknown gate letter '") + c + "'");
  }
}

void check_shapes(const SearchSpace& space, const Architecture& arch) {
  if (int(arch.single_choice.size()) != space.n_layers ||
      int(arch.pair_active.size()) != space.n_layers) {
    throw std::invalid_argument("architecture layer count does not match space");
  }
  for (int l = 0; l < space.n_layers; ++l) {
    if (int(arch.single_choice[l].size()) != space.n_qubits ||
        int(arch.pair_active[l].size()) != space.candidate_pairs.size()) {
      throw std::invalid_argument("architecture shape does not match space");
    }
    for (int idx : arch.single_choice[l]) {
      if (idx < 0 || idx >= int(space.single_gate_pool.size())) {
        throw std::invalid_argument("single-gate choice out of pool bounds");
      }
    }
  }
}

void check_params(const SearchSpace& space, const ParamAssignment& params) {
  if (params.n_qubits != space.n_qubits || params.n_layers != space.n_layers ||
      int(params.angles.size()) != space.n_qubits * space.n_layers) {
    throw std::invalid_argument("parameter shape does not match space");
  }
}

// Pauli generator letter of a rotation gate.
char generator_letter(GateKind k) {
  switch (k) {
    case GateKind::RX: return 'X';
    case GateKind::RY: return 'Y';
    case GateKind::RZ: return 'Z';
    default: throw std::invalid_argument("gate has no rotation generator");
  }
}

}  // namespace

void SearchSpace::validate() const {
  if (n_qubits < 1 || n_layers < 1) throw std::invalid_argument("space needs n_qubits, n_layers >= 1");
  if (single_gate_pool.empty()) throw std::invalid_argument("single-gate pool must be non-empty");
  for (GateKind k : single_gate_pool) {
    if (!gate_is_rotation(k)) throw std::invalid_argument("pool gates must be rotations");
  }
  for (const QubitPair& p : candidate_pairs) {
    if (p.control < 0 || p.control >= n_qubits || p.target < 0 || p.target >= n_qubits ||
        p.control == p.target) {
      throw std::invalid_argument("candidate pair references invalid qubits");
    }
  }
}

std::string SearchSpace::size_string() const {
  namespace mp = boost::multiprecision;
  mp::cpp_int per_layer = mp::pow(mp::cpp_int(single_gate_pool.size()), unsigned(n_qubits)) *
                          mp::pow(mp::cpp_int(2), unsigned(candidate_pairs.size()));
  return mp::cpp_int(mp::pow(per_layer, unsigned(n_layers))).str();
}

double SearchSpace::size_approx() const {
  const double per_layer = std::pow(double(single_gate_pool.size()), n_qubits) *
                           std::pow(2.0, double(candidate_pairs.size()));
  return std::pow(per_layer, double(n_layers));
}

std::uint64_t SearchSpace::fingerprint() const {
  std::uint64_t h = mix_seed(0x5ace5ace);
  auto fold = [&h](std::uint64_t v) { h = mix_seed(h ^ v); };
  fold(n_qubits);
  fold(n_layers);
  for (GateKind k : single_gate_pool) fold(std::uint64_t(k) + 17);
  for (const QubitPair& p : candidate_pairs) fold((std::uint64_t(p.control) << 32) | unsigned(p.target));
  for (const Gate& g : fixed_prefix_gates) {
    fold(std::uint64_t(g.kind));
    for (int q : g.qubits) fold(q + 101);
  }
  return h;
}

char gate_letter(GateKind k) {
  switch (k) {
    case GateKind::RX: return 'X';
    case GateKind::RY: return 'Y';
    case GateKind::RZ: return 'Z';
    default: throw std::invalid_argument("no letter for non-rotation gate");
  }
}

std::string Architecture::to_text(const SearchSpace& space) const {
  check_shapes(space, *this);
  std::string out;
  for (int l = 0; l < space.n_layers; ++l) {
    if (l) out += ';';
    for (int q = 0; q < space.n_qubits; ++q) {
      out += gate_letter(space.single_gate_pool[single_choice[l][q]]);
    }
    out += '/';
    for (std::size_t p = 0; p < space.candidate_pairs.size(); ++p) {
      out += pair_active[l][p] ? '1' : '0';
    }
  }
  return out;
}

Architecture Architecture::from_text(const SearchSpace& space, const std::string& text) {
  Architecture arch;
  std::istringstream in(text);
  std::string layer;
  while (std::getline(in, layer, ';')) {
    const auto slash = layer.find('/');
    if (slash == std::string::npos || int(slash) != space.n_qubits ||
        layer.size() - slash - 1 != space.candidate_pairs.size()) {
      throw std::invalid_argument("malformed architecture text: " + text);
    }
    std::vector<int> choice(space.n_qubits);
    for (int q = 0; q < space.n_qubits; ++q) {
      const GateKind k = kind_from_letter(layer[q]);
      auto it = std::find(space.single_gate_pool.begin(), space.single_gate_pool.end(), k);
      if (it == space.single_gate_pool.end()) {
        throw std::invalid_argument("gate letter not in pool: " + layer.substr(q, 1));
      }
      choice[q] = int(it - space.single_gate_pool.begin());
    }
    std::vector<bool> active(space.candidate_pairs.size());
    for (std::size_t p = 0; p < space.candidate_pairs.size(); ++p) {
      active[p] = layer[slash + 1 + p] == '1';
    }
    arch.single_choice.push_back(std::move(choice));
    arch.pair_active.push_back(std::move(active));
  }
  check_shapes(space, arch);
  return arch;
}

int Architecture::active_cnot_count() const {
  int n = 0;
  for (const auto& layer : pair_active) {
    for (bool b : layer) n += b ? 1 : 0;
  }
  return n;
}

LayoutKey layout_key(const SearchSpace& space, const Architecture& arch, int layer) {
  LayoutKey key;
  key.layer = layer;
  key.letters.reserve(space.n_qubits);
  for (int q = 0; q < space.n_qubits; ++q) {
    key.letters += gate_letter(space.single_gate_pool[arch.single_choice[layer][q]]);
  }
  return key;
}

ParamAssignment ParamAssignment::zeros(int n_qubits, int n_layers) {
  return {n_qubits, n_layers, std::vector<double>(std::size_t(n_qubits) * n_layers, 0.0)};
}

std::string space_size(const SearchSpace& space) { return space.size_string(); }

Architecture sample_uniform(const SearchSpace& space, Rng& rng) {
  Architecture arch;
  arch.single_choice.resize(space.n_layers);
  arch.pair_active.resize(space.n_layers);
  for (int l = 0; l < space.n_layers; ++l) {
    arch.single_choice[l].resize(space.n_qubits);
    for (int q = 0; q < space.n_qubits; ++q) {
      arch.single_choice[l][q] = int(bounded_int(rng, space.single_gate_pool.size()));
    }
    arch.pair_active[l].resize(space.candidate_pairs.size());
    for (std::size_t p = 0; p < space.candidate_pairs.size(); ++p) {
      arch.pair_active[l][p] = bounded_int(rng, 2) == 1;
    }
  }
  return arch;
}

std::vector<Gate> build_circuit(const SearchSpace& space, const Architecture& arch,
                                const ParamAssignment& params, const std::vector<Gate>& encoding) {
  check_shapes(space, arch);
  check_params(space, params);
  std::vector<Gate> gates = encoding;
  for (int l = 0; l < space.n_layers; ++l) {
    for (const Gate& g : space.fixed_prefix_gates) gates.push_back(g);
    for (int q = 0; q < space.n_qubits; ++q) {
      Gate g;
      g.kind = space.single_gate_pool[arch.single_choice[l][q]];
      g.qubits = {q};
      g.angle = params.at(l, q);
      g.param_index = l * space.n_qubits + q;
      gates.push_back(g);
    }
    for (std::size_t p = 0; p < space.candidate_pairs.size(); ++p) {
      if (arch.pair_active[l][p]) {
        gates.push_back(Gate::cnot(space.candidate_pairs[p].control, space.candidate_pairs[p].target));
      }
    }
  }
  return gates;
}

double problem_expectation(int n_qubits, const ExpectationProblem& problem,
                           const std::vector<Gate>& circuit, const NoiseModel& noise) {
  if (noise.enabled) {
    MixedState rho = MixedState::zero(n_qubits);
    NoiseModel enc_noise = noise;
    enc_noise.enabled = noise.noise_on_encoding;
    run_circuit(rho, problem.encoding, enc_noise);
    run_circuit(rho, circuit, noise);
    return expectation(rho, problem.observable);
  }
  PureState psi = PureState::zero(n_qubits);
  run_circuit(psi, problem.encoding);
  run_circuit(psi, circuit);
  return expectation(psi, problem.observable);
}

namespace {

std::vector<double> all_expectations(const Task& task, const std::vector<Gate>& circuit,
                                     const NoiseModel& noise) {
  const auto& probs = task.problems();
  std::vector<double> e(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    e[i] = problem_expectation(task.n_qubits(), probs[i], circuit, noise);
  }
  return e;
}

}  // namespace

double Task::ranking_objective(const SearchSpace& space, const Architecture& arch,
                               const ParamAssignment& params, const NoiseModel& noise) const {
  return evaluate(space, arch, params, *this, noise);
}

double evaluate(const SearchSpace& space, const Architecture& arch, const ParamAssignment& params,
                const Task& task, const NoiseModel& noise) {
  if (task.n_qubits() != space.n_qubits) throw std::invalid_argument("task/space qubit mismatch");
  const std::vector<Gate> circuit = build_circuit(space, arch, params);
  return task.combine(all_expectations(task, circuit, noise));
}

std::vector<double> gradient_param_shift(const SearchSpace& space, const Architecture& arch,
                                         const ParamAssignment& params, const Task& task,
                                         const NoiseModel& noise) {
  if (task.n_qubits() != space.n_qubits) throw std::invalid_argument("task/space qubit mismatch");
  std::vector<Gate> circuit = build_circuit(space, arch, params);
  for (const Gate& g : circuit) {
    if (g.param_index >= 0 && !gate_is_rotation(g.kind)) {
      throw std::invalid_argument("parameter-shift requires Pauli-rotation trainable gates");
    }
  }
  const std::vector<double> e0 = all_expectations(task, circuit, noise);
  const std::vector<double> dl_de = task.combine_grad(e0);

  const int d = space.n_qubits * space.n_layers;
  std::vector<double> grad(d, 0.0);
  for (int j = 0; j < d; ++j) {
    // each param index appears on exactly one gate per circuit
    auto shift_eval = [&](double delta) {
      for (Gate& g : circuit) {
        if (g.param_index == j) g.angle += delta;
      }
      std::vector<double> e = all_expectations(task, circuit, noise);
      for (Gate& g : circuit) {
        if (g.param_index == j) g.angle -= delta;
      }
      return e;
    };
    const std::vector<double> ep = shift_eval(kHalfPi);
    const std::vector<double> em = shift_eval(-kHalfPi);
    double acc = 0.0;
    for (std::size_t i = 0; i < ep.size(); ++i) {
      acc += dl_de[i] * 0.5 * (ep[i] - em[i]);
    }
    grad[j] = acc;
  }
  return grad;
}

std::vector<double> diag_fubini_study(const SearchSpace& space, const Architecture& arch,
                                      const ParamAssignment& params, const Task& task,
                                      const NoiseModel& noise) {
  const std::vector<Gate> circuit = build_circuit(space, arch, params);
  const auto& probs = task.problems();
  const int d = space.n_qubits * space.n_layers;
  std::vector<double> f(d, 0.0);
  for (const ExpectationProblem& problem : probs) {
    if (noise.enabled) {
      MixedState rho = MixedState::zero(task.n_qubits());
      NoiseModel enc_noise = noise;
      enc_noise.enabled = noise.noise_on_encoding;
      run_circuit(rho, problem.encoding, enc_noise);
      for (const Gate& g : circuit) {
        if (g.param_index >= 0) {
          Hamiltonian gen;
          std::string letters(task.n_qubits(), 'I');
          letters[g.qubits[0]] = generator_letter(g.kind);
          gen.add(1.0, letters);
          const double p = expectation(rho, gen);
          f[g.param_index] += 0.25 * (1.0 - p * p);
        }
        apply_gate(rho, g);
        if (noise.enabled && g.kind != GateKind::Identity) {
          apply_depolarizing(rho, g.qubits, g.kind == GateKind::CNOT ? noise.p2 : noise.p1);
        }
      }
    } else {
      PureState psi = PureState::zero(task.n_qubits());
      run_circuit(psi, problem.encoding);
      for (const Gate& g : circuit) {
        if (g.param_index >= 0) {
          Hamiltonian gen;
          std::string letters(task.n_qubits(), 'I');
          letters[g.qubits[0]] = generator_letter(g.kind);
          gen.add(1.0, letters);
          const double p = expectation(psi, gen);
          f[g.param_index] += 0.25 * (1.0 - p * p);
        }
        apply_gate(psi, g);
      }
    }
  }
  for (double& v : f) v /= double(probs.size());
  return f;
}

}  // namespace qas
