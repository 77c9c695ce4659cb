#pragma once

// Search-space definition, subnet (architecture) encoding, circuit
// construction, and parameter-shift gradients.

#include "qas/sim.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qas {

using Rng = std::mt19937_64;

struct QubitPair {
  int control = 0;
  int target = 0;
  bool operator==(const QubitPair&) const = default;
};

struct SearchSpace {
  int n_qubits = 0;
  int n_layers = 0;
  std::vector<GateKind> single_gate_pool;  // rotation kinds, one choice per qubit per layer
  std::vector<QubitPair> candidate_pairs;  // directed CNOT pairs, declaration order
  std::vector<Gate> fixed_prefix_gates;    // non-trainable gates prepended to every layer

  void validate() const;
  /// (|pool|^N * 2^|pairs|)^L; exact big-integer as decimal string, plus a
  /// double view for quick comparisons.
  std::string size_string() const;
  double size_approx() const;
  /// Stable content fingerprint used to match stores to spaces.
  std::uint64_t fingerprint() const;
};

/// One subnet: per layer, a pool index per qubit and an activation bit per
/// candidate pair.
struct Architecture {
  std::vector<std::vector<int>> single_choice;   // [layer][qubit] -> pool index
  std::vector<std::vector<bool>> pair_active;    // [layer][pair]

  bool operator==(const Architecture&) const = default;
  /// Compact text form, e.g. "YZY/101;YYY/000" (gate letters per qubit,
  /// then one activation bit per candidate pair, layers ';'-separated).
  std::string to_text(const SearchSpace& space) const;
  static Architecture from_text(const SearchSpace& space, const std::string& text);
  int active_cnot_count() const;
};

/// Weight-sharing key: a layer index plus that layer's single-qubit gate
/// tuple. Equal layouts share parameters regardless of CNOT placement.
struct LayoutKey {
  int layer = 0;
  std::string letters;  // one gate letter per qubit, e.g. "YZY"

  bool operator==(const LayoutKey&) const = default;
  bool operator<(const LayoutKey& o) const {
    return layer != o.layer ? layer < o.layer : letters < o.letters;
  }
};

LayoutKey layout_key(const SearchSpace& space, const Architecture& arch, int layer);
char gate_letter(GateKind k);

/// Per-layer rotation angles, one per qubit (flat vector of length N*L,
/// layer-major).
struct ParamAssignment {
  int n_qubits = 0;
  int n_layers = 0;
  std::vector<double> angles;  // angles[layer * n_qubits + qubit]

  double& at(int layer, int qubit) { return angles[layer * n_qubits + qubit]; }
  double at(int layer, int qubit) const { return angles[layer * n_qubits + qubit]; }
  static ParamAssignment zeros(int n_qubits, int n_layers);
};

std::string space_size(const SearchSpace& space);
Architecture sample_uniform(const SearchSpace& space, Rng& rng);

/// Gate list for (arch, params): per layer, fixed prefix gates, one
/// rotation per qubit, then CNOTs for active pairs in declaration order.
/// Trainable rotations carry param_index = layer*N + qubit. Encoding gates
/// are prepended unmodified.
std::vector<Gate> build_circuit(const SearchSpace& space, const Architecture& arch,
                                const ParamAssignment& params,
                                const std::vector<Gate>& encoding = {});

/// A task scores circuits. Its loss is combine(e) over the expectation
/// values e_i of a fixed set of expectation problems (encoding + observable
/// pairs), which is what makes parameter-shift gradients exact.
struct ExpectationProblem {
  std::vector<Gate> encoding;  // applied before the trainable circuit
  Hamiltonian observable;
};

class Task {
 public:
  virtual ~Task() = default;
  virtual int n_qubits() const = 0;
  virtual const std::vector<ExpectationProblem>& problems() const = 0;
  /// Loss from the per-problem expectation values.
  virtual double combine(const std::vector<double>& e) const = 0;
  /// dLoss/de_i.
  virtual std::vector<double> combine_grad(const std::vector<double>& e) const = 0;
  /// Score used in the ranking stage (defaults to the training loss).
  virtual double ranking_objective(const SearchSpace& space, const Architecture& arch,
                                   const ParamAssignment& params, const NoiseModel& noise) const;
  /// True when smaller ranking objectives are better.
  virtual bool ranking_lower_is_better() const { return true; }
};

/// Expectation of one problem's observable after encoding + circuit. Uses
/// the pure-state path when noise is disabled.
double problem_expectation(int n_qubits, const ExpectationProblem& problem,
                           const std::vector<Gate>& circuit, const NoiseModel& noise);

double evaluate(const SearchSpace& space, const Architecture& arch, const ParamAssignment& params,
                const Task& task, const NoiseModel& noise);

/// Exact gradient of evaluate() w.r.t. all N*L angles via the shift rule
/// f'(t) = (f(t + pi/2) - f(t - pi/2)) / 2 per circuit expectation, chained
/// through Task::combine_grad.
std::vector<double> gradient_param_shift(const SearchSpace& space, const Architecture& arch,
                                         const ParamAssignment& params, const Task& task,
                                         const NoiseModel& noise);

/// Diagonal Fubini-Study metric elements F_jj = (1 - <P_j>^2) / 4 with P_j
/// the generator of rotation j, evaluated in the state just before gate j
/// (averaged over the task's problems).
std::vector<double> diag_fubini_study(const SearchSpace& space, const Architecture& arch,
                                      const ParamAssignment& params, const Task& task,
                                      const NoiseModel& noise);

}  // namespace qas
