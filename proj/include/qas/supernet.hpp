#pragma once

// Weight-sharing parameter stores and the W-supernet ensemble with greedy
// and bandit-style subnet assignment.

#include "qas/circuit.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <optional>
#include <vector>

namespace qas {

/// Shared-parameter table keyed by (layer, single-qubit layout). Rows are
/// materialized lazily; a row's initial values depend only on
/// (seed, layer, layout), so materialization order never matters.
class SupernetStore {
 public:
  SupernetStore() = default;
  SupernetStore(const SearchSpace& space, std::uint64_t seed);

  /// Angles for an architecture, one row per layer. Rows created on first
  /// access, uniform in [0, 2*pi).
  ParamAssignment get_params(const Architecture& arch);
  /// Read-only variant; materializes rows like get_params (tables are
  /// logically complete, lazily stored).
  ParamAssignment get_params(const Architecture& arch) const;

  /// Adds delta (layer-major, length N*L) to the rows the architecture maps
  /// to. This is the single mutation path used by optimizers.
  void add_to_params(const Architecture& arch, const std::vector<double>& delta);
  void set_params(const Architecture& arch, const ParamAssignment& params);

  const SearchSpace& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t materialized_rows() const { return rows_.size(); }
  std::size_t parameter_count() const { return rows_.size() * space_.n_qubits; }

  nlohmann::json to_json() const;
  static SupernetStore from_json(const SearchSpace& space, const nlohmann::json& j);

  bool operator==(const SupernetStore& o) const;

 private:
  std::vector<double>& row(const LayoutKey& key);
  std::vector<double> initial_row(const LayoutKey& key) const;

  SearchSpace space_;
  std::uint64_t seed_ = 0;
  std::map<LayoutKey, std::vector<double>> rows_;

  friend class SupernetEnsemble;
};

struct AssignmentRecord {
  int iteration = 0;
  Architecture arch;
  std::vector<double> losses;  // per store; NaN where not evaluated (bandit)
  int chosen = 0;
  double chosen_loss = 0.0;
};

/// EXP3 exponential-weights state for the bandit assignment mode.
struct BanditState {
  std::vector<double> weights;
  double learning_rate = 0.0;
  Rng rng;

  static BanditState init(int n_arms, int horizon, std::uint64_t seed);
};

class SupernetEnsemble {
 public:
  SupernetEnsemble() = default;
  /// W stores over the same space, seeded with distinct derived seeds.
  SupernetEnsemble(const SearchSpace& space, int w, std::uint64_t seed);

  int size() const { return int(stores_.size()); }
  SupernetStore& store(int w) { return stores_.at(w); }
  const SupernetStore& store(int w) const { return stores_.at(w); }
  const SearchSpace& space() const { return stores_.at(0).space(); }

  /// Evaluates the subnet under all W stores; chosen = argmin loss, ties to
  /// the lowest index.
  AssignmentRecord assign_greedy(const Architecture& arch, const Task& task,
                                 const NoiseModel& noise, int iteration = 0) const;

  /// Samples one store from the EXP3 weights, evaluates only that store and
  /// applies the importance-weighted update. Losses for unplayed arms are NaN.
  AssignmentRecord assign_bandit(const Architecture& arch, const Task& task,
                                 const NoiseModel& noise, BanditState& state,
                                 int iteration = 0) const;

  /// Min-over-stores loss; the ranking-stage evaluation.
  std::pair<double, int> eval_min(const Architecture& arch, const Task& task,
                                  const NoiseModel& noise) const;

  nlohmann::json to_json() const;
  static SupernetEnsemble from_json(const SearchSpace& space, const nlohmann::json& j);

 private:
  std::vector<SupernetStore> stores_;
};

}  // namespace qas
