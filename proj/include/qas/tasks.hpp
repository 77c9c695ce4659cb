#pragma once

// The two benchmark tasks: synthetic 3-qubit classification and 4-qubit
// molecular-hydrogen ground-state estimation, plus their dense baselines.

#include "qas/circuit.hpp"

#include <array>
#include <string>
#include <vector>

namespace qas {

struct Dataset {
  std::vector<std::array<double, 3>> features;
  std::vector<int> labels;                       // 0/1
  std::vector<int> train_idx, val_idx, test_idx;
  std::vector<double> teacher_params;            // the hidden labeling circuit's 9 angles
  double rejection_rate = 0.0;

  void save_csv(const std::string& path) const;
  static Dataset load_csv(const std::string& path);
};

/// Samples x uniform in [0, 2*pi)^3, labels with a hidden 3-layer teacher
/// circuit, rejects outputs inside the (0.25, 0.75) margin, and splits
/// n/3 : n/3 : n/3 into train/val/test.
Dataset generate_dataset(std::uint64_t seed, int n = 300);

/// <psi| Pi |psi> with Pi = I_4 (x) |0><0| on qubit 2, after encoding
/// RY(x_i) per qubit plus the trainable circuit. Always in [0,1].
double classifier_output(const std::vector<Gate>& circuit, const std::array<double, 3>& x,
                         const NoiseModel& noise);

/// Threshold rule: 0 if y_tilde < 0.5, else 1.
int predict(double y_tilde);

double mse_loss(const std::vector<double>& predictions, const std::vector<int>& labels);
double accuracy(const std::vector<double>& predictions, const std::vector<int>& labels);

/// The 15-term molecular hydrogen Hamiltonian (4 qubits, fixed bond length).
Hamiltonian h2_hamiltonian();

/// Encoding layer RY(x1) (x) RY(x2) (x) RY(x3).
std::vector<Gate> classification_encoding(const std::array<double, 3>& x);

/// Projector Pi = I_4 (x) |0><0| as a 2-term Pauli sum.
Hamiltonian classification_projector();

class ClassificationTask : public Task {
 public:
  explicit ClassificationTask(Dataset dataset);

  int n_qubits() const override { return 3; }
  const std::vector<ExpectationProblem>& problems() const override { return problems_; }
  double combine(const std::vector<double>& e) const override;
  std::vector<double> combine_grad(const std::vector<double>& e) const override;
  /// Validation accuracy (higher is better); see ranking_lower_is_better.
  double ranking_objective(const SearchSpace& space, const Architecture& arch,
                           const ParamAssignment& params, const NoiseModel& noise) const override;
  bool ranking_lower_is_better() const override { return false; }

  const Dataset& dataset() const { return data_; }
  double accuracy_on(const std::vector<int>& indices, const std::vector<Gate>& circuit,
                     const NoiseModel& noise) const;
  double train_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const;
  double val_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const;
  double test_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const;

 private:
  Dataset data_;
  std::vector<ExpectationProblem> problems_;  // one per training sample
  std::vector<int> train_labels_;
};

class VqeTask : public Task {
 public:
  VqeTask() : hamiltonian_(h2_hamiltonian()) { init(); }
  explicit VqeTask(Hamiltonian h) : hamiltonian_(std::move(h)) { init(); }

  int n_qubits() const override { return hamiltonian_.n_qubits; }
  const std::vector<ExpectationProblem>& problems() const override { return problems_; }
  double combine(const std::vector<double>& e) const override { return e.at(0); }
  std::vector<double> combine_grad(const std::vector<double>&) const override { return {1.0}; }

  const Hamiltonian& hamiltonian() const { return hamiltonian_; }

 private:
  void init() {
    problems_.resize(1);
    problems_[0].observable = hamiltonian_;
  }
  Hamiltonian hamiltonian_;
  std::vector<ExpectationProblem> problems_;
};

/// QAS search spaces from the benchmark setups.
SearchSpace classification_search_space();               // N=3, pool {RY}, 3 pairs, L=3
SearchSpace vqe_search_space();                          // N=4, pool {RY,RZ}, chain pairs, L=3
/// QAS-RC style space over a directed-pair connectivity list.
SearchSpace directed_pair_search_space(int n_qubits, int n_layers,
                                       const std::vector<QubitPair>& pairs,
                                       const std::vector<GateKind>& pool);

/// Dense fixed baselines. The classifier baseline lives inside the QAS
/// classification space (all pairs active). The VQE baseline uses its own
/// space of 2*depth alternating RY/RZ layers with the CNOT chain active
/// after each RZ layer (8*depth trainable angles at depth 3 -> 24).
std::pair<SearchSpace, Architecture> baseline_classifier_space();
std::pair<SearchSpace, Architecture> baseline_vqe_space(int depth = 3);

void save_hamiltonian(const Hamiltonian& h, const std::string& path);
Hamiltonian load_hamiltonian(const std::string& path);

}  // namespace qas
