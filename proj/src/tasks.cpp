#include "qas/tasks.hpp"

#include "qas/rand.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qas {

namespace {

// Hidden teacher: 3 layers, each RY on every qubit then CNOT(0,1), CNOT(1,2).
std::vector<Gate> teacher_circuit(const std::vector<double>& angles) {
  std::vector<Gate> gates;
  for (int l = 0; l < 3; ++l) {
    for (int q = 0; q < 3; ++q) gates.push_back(Gate::ry(q, angles[l * 3 + q]));
    gates.push_back(Gate::cnot(0, 1));
    gates.push_back(Gate::cnot(1, 2));
  }
  return gates;
}

}  // namespace

std::vector<Gate> classification_encoding(const std::array<double, 3>& x) {
  return {Gate::ry(0, x[0]), Gate::ry(1, x[1]), Gate::ry(2, x[2])};
}

Hamiltonian classification_projector() {
  Hamiltonian pi;
  pi.add(0.5, "III");
  pi.add(0.5, "IIZ");
  return pi;
}

double classifier_output(const std::vector<Gate>& circuit, const std::array<double, 3>& x,
                         const NoiseModel& noise) {
  ExpectationProblem problem{classification_encoding(x), classification_projector()};
  return problem_expectation(3, problem, circuit, noise);
}

int predict(double y_tilde) { return y_tilde < 0.5 ? 0 : 1; }

double mse_loss(const std::vector<double>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - labels[i];
    acc += d * d;
  }
  return acc / double(predictions.size());
}

double accuracy(const std::vector<double>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("length mismatch");
  int correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predict(predictions[i]) == labels[i]) ++correct;
  }
  return double(correct) / double(predictions.size());
}

Dataset generate_dataset(std::uint64_t seed, int n) {
  if (n < 1) throw std::invalid_argument("dataset needs n >= 1");
  Rng rng(split_seed(seed, 0xda7a));
  const NoiseModel no_noise = NoiseModel::off();

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> theta(9);
    for (double& a : theta) a = uniform_angle(rng);
    const std::vector<Gate> teacher = teacher_circuit(theta);

    Dataset data;
    data.teacher_params = theta;
    long accepted = 0, tried = 0;
    bool degenerate = false;
    while (accepted < n) {
      std::array<double, 3> x{uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
      ++tried;
      const double y = classifier_output(teacher, x, no_noise);
      if (y >= 0.75) {
        data.features.push_back(x);
        data.labels.push_back(1);
        ++accepted;
      } else if (y <= 0.25) {
        data.features.push_back(x);
        data.labels.push_back(0);
        ++accepted;
      }
      // degenerate teacher: almost everything lands in the rejection margin
      if (tried >= 2000 && double(accepted) / double(tried) < 0.001) {
        degenerate = true;
        break;
      }
    }
    if (degenerate) continue;
    data.rejection_rate = 1.0 - double(accepted) / double(tried);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[bounded_int(rng, std::uint64_t(i) + 1)]);
    }
    const int third = n / 3;
    data.train_idx.assign(order.begin(), order.begin() + third);
    data.val_idx.assign(order.begin() + third, order.begin() + 2 * third);
    data.test_idx.assign(order.begin() + 2 * third, order.end());
    return data;
  }
  throw std::runtime_error("dataset generation kept hitting degenerate teachers");
}

void Dataset::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x1,x2,x3,label,split\n";
  out.precision(17);
  auto split_of = [this](int i) -> const char* {
    if (std::find(train_idx.begin(), train_idx.end(), i) != train_idx.end()) return "train";
    if (std::find(val_idx.begin(), val_idx.end(), i) != val_idx.end()) return "val";
    return "test";
  };
  for (std::size_t i = 0; i < features.size(); ++i) {
    out << features[i][0] << ',' << features[i][1] << ',' << features[i][2] << ','
        << labels[i] << ',' << split_of(int(i)) << '\n';
  }
}

Dataset Dataset::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Dataset data;
  std::string line;
  std::getline(in, line);  // header
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::array<double, 3> x{};
    for (int c = 0; c < 3; ++c) {
      std::getline(row, cell, ',');
      x[c] = std::stod(cell);
    }
    std::getline(row, cell, ',');
    const int label = std::stoi(cell);
    std::getline(row, cell, ',');
    data.features.push_back(x);
    data.labels.push_back(label);
    if (cell == "train") data.train_idx.push_back(i);
    else if (cell == "val") data.val_idx.push_back(i);
    else if (cell == "test") data.test_idx.push_back(i);
    else throw std::runtime_error("unknown split label: " + cell);
    ++i;
  }
  return data;
}

ClassificationTask::ClassificationTask(Dataset dataset) : data_(std::move(dataset)) {
  const Hamiltonian pi = classification_projector();
  problems_.reserve(data_.train_idx.size());
  train_labels_.reserve(data_.train_idx.size());
  for (int i : data_.train_idx) {
    problems_.push_back({classification_encoding(data_.features[i]), pi});
    train_labels_.push_back(data_.labels[i]);
  }
}

double ClassificationTask::combine(const std::vector<double>& e) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double d = e[i] - train_labels_[i];
    acc += d * d;
  }
  return acc / double(e.size());
}

std::vector<double> ClassificationTask::combine_grad(const std::vector<double>& e) const {
  std::vector<double> g(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    g[i] = 2.0 * (e[i] - train_labels_[i]) / double(e.size());
  }
  return g;
}

double ClassificationTask::accuracy_on(const std::vector<int>& indices,
                                       const std::vector<Gate>& circuit,
                                       const NoiseModel& noise) const {
  int correct = 0;
  for (int i : indices) {
    if (predict(classifier_output(circuit, data_.features[i], noise)) == data_.labels[i]) ++correct;
  }
  return indices.empty() ? 0.0 : double(correct) / double(indices.size());
}

double ClassificationTask::train_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const {
  return accuracy_on(data_.train_idx, c, n);
}
double ClassificationTask::val_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const {
  return accuracy_on(data_.val_idx, c, n);
}
double ClassificationTask::test_accuracy(const std::vector<Gate>& c, const NoiseModel& n) const {
  return accuracy_on(data_.test_idx, c, n);
}

double ClassificationTask::ranking_objective(const SearchSpace& space, const Architecture& arch,
                                             const ParamAssignment& params,
                                             const NoiseModel& noise) const {
  return val_accuracy(build_circuit(space, arch, params), noise);
}

Hamiltonian h2_hamiltonian() {
  Hamiltonian h;
  h.add(-0.042, "IIII");
  h.add(0.178, "ZIII");
  h.add(0.178, "IZII");
  h.add(-0.243, "IIZI");
  h.add(-0.243, "IIIZ");
  h.add(0.171, "ZZII");
  h.add(0.123, "ZIZI");
  h.add(0.123, "IZIZ");
  h.add(0.168, "ZIIZ");
  h.add(0.168, "IZZI");
  h.add(0.176, "IIZZ");
  h.add(0.045, "YXXY");
  h.add(-0.045, "YYXX");
  h.add(-0.045, "XXYY");
  h.add(0.045, "XYYX");
  return h;
}

SearchSpace classification_search_space() {
  SearchSpace s;
  s.n_qubits = 3;
  s.n_layers = 3;
  s.single_gate_pool = {GateKind::RY};
  s.candidate_pairs = {{0, 1}, {0, 2}, {1, 2}};
  return s;
}

SearchSpace vqe_search_space() {
  SearchSpace s;
  s.n_qubits = 4;
  s.n_layers = 3;
  s.single_gate_pool = {GateKind::RY, GateKind::RZ};
  s.candidate_pairs = {{0, 1}, {1, 2}, {2, 3}};
  return s;
}

SearchSpace directed_pair_search_space(int n_qubits, int n_layers,
                                       const std::vector<QubitPair>& pairs,
                                       const std::vector<GateKind>& pool) {
  SearchSpace s;
  s.n_qubits = n_qubits;
  s.n_layers = n_layers;
  s.single_gate_pool = pool;
  s.candidate_pairs = pairs;
  s.validate();
  return s;
}

std::pair<SearchSpace, Architecture> baseline_classifier_space() {
  SearchSpace space = classification_search_space();
  Architecture arch;
  arch.single_choice.assign(space.n_layers, std::vector<int>(space.n_qubits, 0));
  arch.pair_active.assign(space.n_layers, std::vector<bool>(space.candidate_pairs.size(), true));
  return {space, arch};
}

std::pair<SearchSpace, Architecture> baseline_vqe_space(int depth) {
  SearchSpace space;
  space.n_qubits = 4;
  space.n_layers = 2 * depth;
  space.single_gate_pool = {GateKind::RY, GateKind::RZ};
  space.candidate_pairs = {{0, 1}, {1, 2}, {2, 3}};
  Architecture arch;
  for (int l = 0; l < space.n_layers; ++l) {
    const bool rz_layer = (l % 2) == 1;
    arch.single_choice.push_back(std::vector<int>(4, rz_layer ? 1 : 0));
    arch.pair_active.push_back(std::vector<bool>(3, rz_layer));
  }
  return {space, arch};
}

void save_hamiltonian(const Hamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (const auto& t : h.terms) out << t.coefficient << ' ' << t.letters << '\n';
}

Hamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Hamiltonian h;
  double coeff;
  std::string letters;
  while (in >> coeff >> letters) h.add(coeff, letters);
  return h;
}

}  // namespace qas
