#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qas/rand.hpp"
#include "qas/supernet.hpp"
#include "qas/tasks.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

using namespace qas;

namespace {

Architecture blank_arch(const SearchSpace& space) {
  Architecture a;
  a.single_choice.assign(space.n_layers, std::vector<int>(space.n_qubits, 0));
  a.pair_active.assign(space.n_layers,
                       std::vector<bool>(space.candidate_pairs.size(), false));
  return a;
}

// Fixed-target toy task on 1 qubit: loss = <Z> shifted into [0, 1].
struct ZLossTask : Task {
  std::vector<ExpectationProblem> probs;
  ZLossTask() {
    probs.resize(1);
    probs[0].observable.add(1.0, "Z");
  }
  int n_qubits() const override { return 1; }
  const std::vector<ExpectationProblem>& problems() const override { return probs; }
  double combine(const std::vector<double>& e) const override { return (e[0] + 1) / 2; }
  std::vector<double> combine_grad(const std::vector<double>&) const override { return {0.5}; }
};

SearchSpace one_qubit_space() {
  SearchSpace s;
  s.n_qubits = 1;
  s.n_layers = 1;
  s.single_gate_pool = {GateKind::RY};
  return s;
}

}  // namespace

TEST_CASE("store parameter counts follow the layout bound") {
  SUBCASE("classification space materializes at most 9 parameters") {
    SupernetStore store(classification_search_space(), 1);
    const SearchSpace space = classification_search_space();
    Rng rng(2);
    for (int i = 0; i < 50; ++i) store.get_params(sample_uniform(space, rng));
    CHECK(store.materialized_rows() <= 3);  // pool size 1: one layout per layer
    CHECK(store.parameter_count() <= 9);
  }
  SUBCASE("VQE space stays under 48 rows / 192 parameters") {
    SupernetStore store(vqe_search_space(), 1);
    const SearchSpace space = vqe_search_space();
    Rng rng(3);
    for (int i = 0; i < 500; ++i) store.get_params(sample_uniform(space, rng));
    CHECK(store.materialized_rows() <= 48);
    CHECK(store.parameter_count() <= 192);
  }
}

TEST_CASE("same seed gives bit-identical stores regardless of access order") {
  const SearchSpace space = vqe_search_space();
  SupernetStore a(space, 77), b(space, 77);
  Rng ra(5), rb(6);
  // touch rows in different orders
  std::vector<Architecture> archs;
  for (int i = 0; i < 30; ++i) archs.push_back(sample_uniform(space, ra));
  for (const auto& x : archs) a.get_params(x);
  for (auto it = archs.rbegin(); it != archs.rend(); ++it) b.get_params(*it);
  CHECK(a == b);
  for (const auto& x : archs) {
    CHECK(a.get_params(x).angles == b.get_params(x).angles);
  }
}

TEST_CASE("initial angles are uniform in [0, 2*pi)") {
  SupernetStore store(vqe_search_space(), 11);
  const SearchSpace space = vqe_search_space();
  Rng rng(8);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 200; ++i) {
    for (double ang : store.get_params(sample_uniform(space, rng)).angles) {
      CHECK(ang >= 0.0);
      CHECK(ang < 2 * M_PI);
      lo = std::min(lo, ang);
      hi = std::max(hi, ang);
    }
  }
  CHECK(lo < 1.0);       // spread sanity
  CHECK(hi > 2 * M_PI - 1.0);
}

TEST_CASE("weight sharing keyed by single-qubit layout only") {
  const SearchSpace space = vqe_search_space();
  SupernetStore store(space, 42);
  Rng rng(9);
  const Architecture a = sample_uniform(space, rng);

  SUBCASE("CNOT masks never change the parameters") {
    Architecture b = a;
    for (auto& layer : b.pair_active) layer.flip();
    CHECK(store.get_params(a).angles == store.get_params(b).angles);
  }
  SUBCASE("a changed gate tuple gets an independent row") {
    Architecture c = a;
    c.single_choice[1][2] = 1 - c.single_choice[1][2];
    const auto pa = store.get_params(a);
    const auto pc = store.get_params(c);
    bool differs = false;
    for (int q = 0; q < 4; ++q) differs |= pa.at(1, q) != pc.at(1, q);
    CHECK(differs);
    for (int q = 0; q < 4; ++q) {
      CHECK(pa.at(0, q) == pc.at(0, q));  // unchanged layers still shared
      CHECK(pa.at(2, q) == pc.at(2, q));
    }
  }
  SUBCASE("updates through one arch are visible to layout-sharing archs") {
    Architecture b = a;
    for (auto& layer : b.pair_active) layer.assign(layer.size(), true);
    std::vector<double> delta(12, 0.25);
    store.add_to_params(a, delta);
    const auto pa = store.get_params(a);
    const auto pb = store.get_params(b);
    CHECK(pa.angles == pb.angles);
  }
}

TEST_CASE("store JSON round trip reproduces evaluations bit-for-bit") {
  const SearchSpace space = vqe_search_space();
  SupernetStore store(space, 13);
  Rng rng(10);
  std::vector<Architecture> archs;
  for (int i = 0; i < 20; ++i) {
    archs.push_back(sample_uniform(space, rng));
    store.get_params(archs.back());
  }
  std::vector<double> delta(12);
  for (auto& d : delta) d = uniform_double(rng) - 0.5;
  store.add_to_params(archs[0], delta);

  const SupernetStore restored = SupernetStore::from_json(space, store.to_json());
  CHECK(restored == store);
  VqeTask task;
  for (const auto& a : archs) {
    const double before = evaluate(space, a, store.get_params(a), task, NoiseModel::off());
    const double after = evaluate(space, a, restored.get_params(a), task, NoiseModel::off());
    CHECK(before == after);
  }
  // fingerprint mismatch rejected
  nlohmann::json j = store.to_json();
  j["space_fingerprint"] = 0;
  CHECK_THROWS_AS(SupernetStore::from_json(space, j), std::invalid_argument);
}

TEST_CASE("ensemble stores are seeded independently and update-isolated") {
  const SearchSpace space = vqe_search_space();
  SupernetEnsemble ens(space, 4, 21);
  Rng rng(14);
  const Architecture a = sample_uniform(space, rng);
  for (int w = 0; w < 4; ++w) {
    for (int v = w + 1; v < 4; ++v) {
      CHECK(ens.store(w).get_params(a).angles != ens.store(v).get_params(a).angles);
    }
  }
  const auto before1 = ens.store(1).get_params(a).angles;
  std::vector<double> delta(12, 0.5);
  ens.store(0).add_to_params(a, delta);
  CHECK(ens.store(1).get_params(a).angles == before1);
}

TEST_CASE("greedy assignment picks the argmin store") {
  const SearchSpace space = one_qubit_space();
  const Architecture a = blank_arch(space);
  ZLossTask task;

  SUBCASE("W=1 always picks index 0") {
    SupernetEnsemble ens(space, 1, 3);
    const auto rec = ens.assign_greedy(a, task, NoiseModel::off());
    CHECK(rec.chosen == 0);
    CHECK(rec.losses.size() == 1);
  }
  SUBCASE("ties break to the lowest index") {
    SupernetEnsemble ens(space, 3, 3);
    ParamAssignment same = ParamAssignment::zeros(1, 1);
    same.at(0, 0) = 1.0;
    for (int w = 0; w < 3; ++w) ens.store(w).set_params(a, same);
    const auto rec = ens.assign_greedy(a, task, NoiseModel::off());
    CHECK(rec.chosen == 0);
  }
  SUBCASE("the store holding the optimum wins") {
    SupernetEnsemble ens(space, 2, 3);
    ParamAssignment bad = ParamAssignment::zeros(1, 1);   // <Z>=1, loss 1
    ParamAssignment good = ParamAssignment::zeros(1, 1);  // <Z>=-1, loss 0
    good.at(0, 0) = M_PI;
    ens.store(0).set_params(a, bad);
    ens.store(1).set_params(a, good);
    const auto rec = ens.assign_greedy(a, task, NoiseModel::off());
    CHECK(rec.chosen == 1);
    CHECK(rec.chosen_loss == doctest::Approx(0.0));
    CHECK(rec.losses[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("eval_min equals the greedy argmin and lower-bounds the mean") {
  const SearchSpace space = vqe_search_space();
  SupernetEnsemble ens(space, 5, 33);
  VqeTask task;
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    const Architecture a = sample_uniform(space, rng);
    const auto rec = ens.assign_greedy(a, task, NoiseModel::off(), i);
    const auto [loss, idx] = ens.eval_min(a, task, NoiseModel::off());
    CHECK(loss == rec.chosen_loss);
    CHECK(idx == rec.chosen);
    double mean = 0;
    for (double l : rec.losses) mean += l;
    mean /= double(rec.losses.size());
    CHECK(loss <= mean + 1e-12);
  }
}

TEST_CASE("bandit assignment") {
  const SearchSpace space = one_qubit_space();
  const Architecture a = blank_arch(space);
  ZLossTask task;

  SUBCASE("W=1 degenerates to a single evaluation") {
    SupernetEnsemble ens(space, 1, 4);
    BanditState st = BanditState::init(1, 10, 5);
    const auto rec = ens.assign_bandit(a, task, NoiseModel::off(), st);
    CHECK(rec.chosen == 0);
    CHECK(std::isfinite(rec.chosen_loss));
  }
  SUBCASE("unplayed arms are recorded as NaN") {
    SupernetEnsemble ens(space, 3, 4);
    BanditState st = BanditState::init(3, 10, 5);
    const auto rec = ens.assign_bandit(a, task, NoiseModel::off(), st);
    int nan_count = 0;
    for (double l : rec.losses) nan_count += std::isnan(l) ? 1 : 0;
    CHECK(nan_count == 2);
    CHECK_FALSE(std::isnan(rec.losses[rec.chosen]));
  }
  SUBCASE("EXP3 concentrates on the better of two fixed arms") {
    SupernetEnsemble ens(space, 2, 4);
    ParamAssignment bad = ParamAssignment::zeros(1, 1);   // loss 1
    ParamAssignment good = ParamAssignment::zeros(1, 1);  // loss 0
    good.at(0, 0) = M_PI;
    ens.store(0).set_params(a, bad);
    ens.store(1).set_params(a, good);
    const int horizon = 600;
    BanditState st = BanditState::init(2, horizon, 7);
    int late_good = 0, late_total = 0;
    for (int t = 0; t < horizon; ++t) {
      const auto rec = ens.assign_bandit(a, task, NoiseModel::off(), st, t);
      if (t >= horizon / 2) {
        ++late_total;
        late_good += rec.chosen == 1 ? 1 : 0;
      }
    }
    CHECK(double(late_good) / late_total > 0.75);
  }
}

TEST_CASE("ensemble JSON round trip") {
  const SearchSpace space = classification_search_space();
  SupernetEnsemble ens(space, 3, 91);
  Rng rng(16);
  for (int i = 0; i < 10; ++i) {
    const Architecture a = sample_uniform(space, rng);
    for (int w = 0; w < 3; ++w) ens.store(w).get_params(a);
  }
  const SupernetEnsemble back = SupernetEnsemble::from_json(space, ens.to_json());
  REQUIRE(back.size() == 3);
  for (int w = 0; w < 3; ++w) CHECK(back.store(w) == ens.store(w));
}
