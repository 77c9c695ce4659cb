#include "qas/supernet.hpp"

#include "qas/rand.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qas {

namespace {

std::uint64_t layout_stream(const LayoutKey& key) {
  std::uint64_t h = mix_seed(std::uint64_t(key.layer) + 1);
  for (char c : key.letters) h = mix_seed(h ^ std::uint64_t(std::uint8_t(c)));
  return h;
}

}  // namespace

SupernetStore::SupernetStore(const SearchSpace& space, std::uint64_t seed)
    : space_(space), seed_(seed) {
  space_.validate();
}

std::vector<double> SupernetStore::initial_row(const LayoutKey& key) const {
  Rng rng(split_seed(seed_, layout_stream(key)));
  std::vector<double> angles(space_.n_qubits);
  for (double& a : angles) a = uniform_angle(rng);
  return angles;
}

std::vector<double>& SupernetStore::row(const LayoutKey& key) {
  auto it = rows_.find(key);
  if (it == rows_.end()) it = rows_.emplace(key, initial_row(key)).first;
  return it->second;
}

ParamAssignment SupernetStore::get_params(const Architecture& arch) {
  ParamAssignment p = ParamAssignment::zeros(space_.n_qubits, space_.n_layers);
  for (int l = 0; l < space_.n_layers; ++l) {
    const std::vector<double>& r = row(layout_key(space_, arch, l));
    for (int q = 0; q < space_.n_qubits; ++q) p.at(l, q) = r[q];
  }
  return p;
}

ParamAssignment SupernetStore::get_params(const Architecture& arch) const {
  ParamAssignment p = ParamAssignment::zeros(space_.n_qubits, space_.n_layers);
  for (int l = 0; l < space_.n_layers; ++l) {
    const LayoutKey key = layout_key(space_, arch, l);
    auto it = rows_.find(key);
    const std::vector<double> r = it != rows_.end() ? it->second : initial_row(key);
    for (int q = 0; q < space_.n_qubits; ++q) p.at(l, q) = r[q];
  }
  return p;
}

void SupernetStore::add_to_params(const Architecture& arch, const std::vector<double>& delta) {
  if (int(delta.size()) != space_.n_qubits * space_.n_layers) {
    throw std::invalid_argument("delta length mismatch");
  }
  for (int l = 0; l < space_.n_layers; ++l) {
    std::vector<double>& r = row(layout_key(space_, arch, l));
    for (int q = 0; q < space_.n_qubits; ++q) r[q] += delta[l * space_.n_qubits + q];
  }
}

void SupernetStore::set_params(const Architecture& arch, const ParamAssignment& params) {
  for (int l = 0; l < space_.n_layers; ++l) {
    std::vector<double>& r = row(layout_key(space_, arch, l));
    for (int q = 0; q < space_.n_qubits; ++q) r[q] = params.at(l, q);
  }
}

nlohmann::json SupernetStore::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, angles] : rows_) {
    entries.push_back({{"layer", key.layer}, {"layout", key.letters}, {"angles", angles}});
  }
  return {{"space_fingerprint", space_.fingerprint()}, {"seed", seed_}, {"entries", entries}};
}

SupernetStore SupernetStore::from_json(const SearchSpace& space, const nlohmann::json& j) {
  if (j.at("space_fingerprint").get<std::uint64_t>() != space.fingerprint()) {
    throw std::invalid_argument("store was serialized for a different search space");
  }
  SupernetStore store(space, j.at("seed").get<std::uint64_t>());
  for (const auto& e : j.at("entries")) {
    LayoutKey key{e.at("layer").get<int>(), e.at("layout").get<std::string>()};
    store.rows_[key] = e.at("angles").get<std::vector<double>>();
  }
  return store;
}

bool SupernetStore::operator==(const SupernetStore& o) const {
  return seed_ == o.seed_ && rows_ == o.rows_ && space_.fingerprint() == o.space_.fingerprint();
}

BanditState BanditState::init(int n_arms, int horizon, std::uint64_t seed) {
  BanditState s;
  s.weights.assign(n_arms, 1.0);
  s.learning_rate = std::sqrt(std::log(std::max(2, n_arms)) /
                              (double(n_arms) * std::max(1, horizon)));
  s.rng.seed(split_seed(seed, 0xba4d17));
  return s;
}

SupernetEnsemble::SupernetEnsemble(const SearchSpace& space, int w, std::uint64_t seed) {
  if (w < 1) throw std::invalid_argument("ensemble needs W >= 1");
  stores_.reserve(w);
  for (int i = 0; i < w; ++i) {
    stores_.emplace_back(space, split_seed(seed, std::uint64_t(i) + 1));
  }
}

AssignmentRecord SupernetEnsemble::assign_greedy(const Architecture& arch, const Task& task,
                                                 const NoiseModel& noise, int iteration) const {
  AssignmentRecord rec;
  rec.iteration = iteration;
  rec.arch = arch;
  rec.losses.resize(stores_.size());
  for (std::size_t w = 0; w < stores_.size(); ++w) {
    rec.losses[w] = evaluate(space(), arch, stores_[w].get_params(arch), task, noise);
  }
  rec.chosen = int(std::min_element(rec.losses.begin(), rec.losses.end()) - rec.losses.begin());
  rec.chosen_loss = rec.losses[rec.chosen];
  return rec;
}

AssignmentRecord SupernetEnsemble::assign_bandit(const Architecture& arch, const Task& task,
                                                 const NoiseModel& noise, BanditState& state,
                                                 int iteration) const {
  if (int(state.weights.size()) != size()) throw std::invalid_argument("bandit state arm mismatch");
  AssignmentRecord rec;
  rec.iteration = iteration;
  rec.arch = arch;
  rec.losses.assign(stores_.size(), std::numeric_limits<double>::quiet_NaN());

  double total = 0.0;
  for (double w : state.weights) total += w;
  const double u = uniform_double(state.rng) * total;
  int pick = 0;
  double cum = 0.0;
  for (std::size_t w = 0; w < state.weights.size(); ++w) {
    cum += state.weights[w];
    if (u < cum) {
      pick = int(w);
      break;
    }
  }

  const double loss = evaluate(space(), arch, stores_[pick].get_params(arch), task, noise);
  rec.losses[pick] = loss;
  rec.chosen = pick;
  rec.chosen_loss = loss;

  // EXP3 importance-weighted update; losses clamped to [0,1] for the weights.
  const double p_pick = state.weights[pick] / total;
  const double clamped = std::clamp(loss, 0.0, 1.0);
  state.weights[pick] *= std::exp(-state.learning_rate * clamped / p_pick);
  return rec;
}

std::pair<double, int> SupernetEnsemble::eval_min(const Architecture& arch, const Task& task,
                                                  const NoiseModel& noise) const {
  double best = std::numeric_limits<double>::infinity();
  int best_w = 0;
  for (std::size_t w = 0; w < stores_.size(); ++w) {
    const double loss = evaluate(space(), arch, stores_[w].get_params(arch), task, noise);
    if (loss < best) {
      best = loss;
      best_w = int(w);
    }
  }
  return {best, best_w};
}

nlohmann::json SupernetEnsemble::to_json() const {
  nlohmann::json stores = nlohmann::json::array();
  for (const auto& s : stores_) stores.push_back(s.to_json());
  return {{"W", size()}, {"stores", stores}};
}

SupernetEnsemble SupernetEnsemble::from_json(const SearchSpace& space, const nlohmann::json& j) {
  SupernetEnsemble e;
  for (const auto& sj : j.at("stores")) {
    e.stores_.push_back(SupernetStore::from_json(space, sj));
  }
  if (e.stores_.empty()) throw std::invalid_argument("ensemble JSON holds no stores");
  return e;
}

}  // namespace qas
