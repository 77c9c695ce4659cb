#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qas/tasks.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

using namespace qas;

TEST_CASE("generated dataset matches the documented construction") {
  const Dataset d = generate_dataset(1234, 300);
  CHECK(d.features.size() == 300);
  CHECK(d.labels.size() == 300);
  CHECK(d.train_idx.size() == 100);
  CHECK(d.val_idx.size() == 100);
  CHECK(d.test_idx.size() == 100);
  CHECK(d.teacher_params.size() == 9);

  std::set<int> all;
  for (int i : d.train_idx) all.insert(i);
  for (int i : d.val_idx) all.insert(i);
  for (int i : d.test_idx) all.insert(i);
  CHECK(all.size() == 300);  // disjoint cover

  for (double x : d.teacher_params) {
    CHECK(x >= 0.0);
    CHECK(x < 2 * M_PI);
  }
  for (const auto& f : d.features) {
    for (double x : f) {
      CHECK(x >= 0.0);
      CHECK(x < 2 * M_PI);
    }
  }
}

TEST_CASE("labels re-measure outside the rejection margin under the teacher") {
  const Dataset d = generate_dataset(77, 120);
  // rebuild the teacher: 3 layers of RY on each qubit then CNOT(0,1), CNOT(1,2)
  std::vector<Gate> teacher;
  for (int l = 0; l < 3; ++l) {
    for (int q = 0; q < 3; ++q) teacher.push_back(Gate::ry(q, d.teacher_params[l * 3 + q]));
    teacher.push_back(Gate::cnot(0, 1));
    teacher.push_back(Gate::cnot(1, 2));
  }
  for (std::size_t i = 0; i < d.features.size(); ++i) {
    const double y = classifier_output(teacher, d.features[i], NoiseModel::off());
    if (d.labels[i] == 1) {
      CHECK(y >= 0.75);
    } else {
      CHECK(y <= 0.25);
    }
  }
  CHECK(d.rejection_rate > 0.0);
  CHECK(d.rejection_rate < 1.0);
}

TEST_CASE("dataset generation is deterministic and validates n") {
  const Dataset a = generate_dataset(5, 60);
  const Dataset b = generate_dataset(5, 60);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.train_idx == b.train_idx);
  CHECK(a.teacher_params == b.teacher_params);
  CHECK_THROWS_AS(generate_dataset(5, 0), std::invalid_argument);
}

TEST_CASE("dataset CSV round trip") {
  const Dataset d = generate_dataset(9, 90);
  const std::string path = "dataset_roundtrip_test.csv";
  d.save_csv(path);
  const Dataset back = Dataset::load_csv(path);
  std::remove(path.c_str());
  CHECK(back.labels == d.labels);
  // split membership survives the round trip (index order within a split is
  // not part of the format)
  const auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(back.train_idx) == sorted(d.train_idx));
  CHECK(sorted(back.val_idx) == sorted(d.val_idx));
  CHECK(sorted(back.test_idx) == sorted(d.test_idx));
  REQUIRE(back.features.size() == d.features.size());
  for (std::size_t i = 0; i < d.features.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(back.features[i][k] == doctest::Approx(d.features[i][k]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(Dataset::load_csv("no_such_file_here.csv"), std::runtime_error);
}

TEST_CASE("classifier_output closed-form points") {
  const std::vector<Gate> empty;
  CHECK(classifier_output(empty, {0, 0, 0}, NoiseModel::off()) == doctest::Approx(1.0));
  CHECK(classifier_output(empty, {0, 0, M_PI}, NoiseModel::off()) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(classifier_output(empty, {0, 0, M_PI / 2}, NoiseModel::off()) == doctest::Approx(0.5));
}

TEST_CASE("classifier_output stays in [0,1] for random circuits and noise") {
  Rng rng(13);
  for (int i = 0; i < 40; ++i) {
    const auto circuit = test::random_circuit(rng, 3, 12);
    const std::array<double, 3> x{uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
    const NoiseModel noise = i % 2 == 0 ? NoiseModel::off() : NoiseModel::depolarizing(0.05, 0.2);
    const double y = classifier_output(circuit, x, noise);
    CHECK(y >= -1e-12);
    CHECK(y <= 1 + 1e-12);
  }
}

TEST_CASE("predict thresholds at 0.5 with the upper branch inclusive") {
  CHECK(predict(0.49) == 0);
  CHECK(predict(0.5) == 1);
  CHECK(predict(1.0) == 1);
  CHECK(predict(0.0) == 0);
}

TEST_CASE("mse_loss arithmetic") {
  CHECK(mse_loss({1.0, 0.0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(mse_loss({0.5, 0.5}, {0, 1}) == doctest::Approx(0.25));
  CHECK(mse_loss({0.8}, {1}) == doctest::Approx(0.04));
  CHECK_THROWS_AS(mse_loss({0.5}, {0, 1}), std::invalid_argument);
}

TEST_CASE("accuracy counts threshold-correct predictions") {
  CHECK(accuracy({0.9, 0.1}, {1, 0}) == doctest::Approx(1.0));
  CHECK(accuracy({0.1, 0.9}, {1, 0}) == doctest::Approx(0.0));
  CHECK(accuracy({0.9, 0.9}, {1, 0}) == doctest::Approx(0.5));
}

TEST_CASE("hydrogen Hamiltonian content") {
  const Hamiltonian h = h2_hamiltonian();
  CHECK(h.terms.size() == 15);
  CHECK(h.n_qubits == 4);
  double zz01 = 0;
  for (const auto& t : h.terms)
    if (t.letters == "ZZII") zz01 = t.coefficient;
  CHECK(zz01 == doctest::Approx(0.171));
  CHECK(exact_ground_energy(h) == doctest::Approx(-1.136).epsilon(0.009));
}

TEST_CASE("hamiltonian text round trip") {
  const std::string path = "hamiltonian_roundtrip_test.txt";
  save_hamiltonian(h2_hamiltonian(), path);
  const Hamiltonian back = load_hamiltonian(path);
  std::remove(path.c_str());
  CHECK(back.terms.size() == 15);
  CHECK(std::abs(exact_ground_energy(back) - exact_ground_energy(h2_hamiltonian())) < 1e-12);
}

TEST_CASE("VQE objective respects the variational bound") {
  const SearchSpace space = vqe_search_space();
  VqeTask task;
  const double e0 = exact_ground_energy(task.hamiltonian());
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const Architecture a = sample_uniform(space, rng);
    ParamAssignment p = ParamAssignment::zeros(4, 3);
    for (auto& ang : p.angles) ang = uniform_angle(rng);
    CHECK(evaluate(space, a, p, task, NoiseModel::off()) >= e0 - 1e-9);
  }
}

TEST_CASE("classification task wiring") {
  const Dataset d = generate_dataset(21, 45);
  const ClassificationTask task(d);
  CHECK(task.problems().size() == d.train_idx.size());

  // combine is the MSE over training expectations
  std::vector<double> e(task.problems().size(), 0.5);
  std::vector<int> train_labels;
  for (int i : d.train_idx) train_labels.push_back(d.labels[i]);
  double want = 0;
  for (int y : train_labels) want += (0.5 - y) * (0.5 - y);
  want /= double(train_labels.size());
  CHECK(task.combine(e) == doctest::Approx(want));

  const auto g = task.combine_grad(e);
  REQUIRE(g.size() == e.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i] == doctest::Approx(2.0 * (e[i] - train_labels[i]) / double(e.size())));
  }
  CHECK_FALSE(task.ranking_lower_is_better());
}

TEST_CASE("baseline architectures") {
  SUBCASE("classifier baseline: 3 RY + 3 CNOT per layer, inside the QAS space") {
    const auto [space, arch] = baseline_classifier_space();
    const auto gates = build_circuit(space, arch, ParamAssignment::zeros(3, 3));
    int ry = 0, cnot = 0;
    for (const Gate& g : gates) {
      if (g.kind == GateKind::RY) ++ry;
      if (g.kind == GateKind::CNOT) ++cnot;
    }
    CHECK(ry == 9);
    CHECK(cnot == 9);
    // membership: the arch indexes valid pool entries / pairs of its space
    CHECK(arch.single_choice.size() == std::size_t(space.n_layers));
    CHECK(Architecture::from_text(space, arch.to_text(space)) == arch);
    // same space shape as the searched classification space
    const SearchSpace qas_space = classification_search_space();
    CHECK(space.n_qubits == qas_space.n_qubits);
    CHECK(space.candidate_pairs.size() == qas_space.candidate_pairs.size());
  }
  SUBCASE("VQE baseline carries 24 trainable angles at depth 3") {
    const auto [space, arch] = baseline_vqe_space();
    const auto gates =
        build_circuit(space, arch, ParamAssignment::zeros(space.n_qubits, space.n_layers));
    int trainable = 0;
    for (const Gate& g : gates) trainable += g.param_index >= 0 ? 1 : 0;
    CHECK(trainable == 24);
    CHECK(Architecture::from_text(space, arch.to_text(space)) == arch);
  }
}
