#pragma once

// The four-step QAS pipeline: supernet training, uniform and evolutionary
// ranking, retraining, plus optimizers and regret accounting.

#include "qas/supernet.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qas {

enum class OptimizerKind { Gd, Adam, DiagNaturalGd };
enum class AssignmentMode { Greedy, Bandit };
enum class RankingMode { Uniform, Evolutionary };

OptimizerKind optimizer_from_name(const std::string& name);
const char* optimizer_name(OptimizerKind k);

struct QasConfig {
  int iterations = 400;        // T; epochs for the classification task
  int supernets = 5;           // W
  int ranking_samples = 500;   // K
  double learning_rate = 0.05;
  OptimizerKind optimizer = OptimizerKind::Adam;
  NoiseModel noise = NoiseModel::off();
  std::uint64_t seed = 0;
  AssignmentMode assignment = AssignmentMode::Greedy;
  RankingMode ranking = RankingMode::Uniform;
  // ranking-stage knobs
  bool rank_min_over_stores = true;  // best-over-W vs last-assigned store
  int population = 50;               // evolutionary only
  int generations = 20;
  bool cnot_objective = true;        // NSGA-II second objective on/off
  // retraining
  int retrain_epochs = 50;
  double retrain_learning_rate = 0.05;
  OptimizerKind retrain_optimizer = OptimizerKind::Adam;

  void validate() const;
};

/// Bias-corrected Adam / plain gradient descent / diagonal natural-gradient
/// moments. One state per flat parameter vector it steps.
struct OptimizerState {
  std::vector<double> m, v;
  long step = 0;
};

/// In-place step; `metric_diag` supplies F_jj for DiagNaturalGd.
void optimizer_step(OptimizerKind kind, std::vector<double>& params,
                    const std::vector<double>& gradient, OptimizerState& state, double lr,
                    const std::vector<double>* metric_diag = nullptr);

struct TrainHistory {
  std::vector<AssignmentRecord> records;
  std::vector<double> loss_trajectory;  // chosen-store loss per iteration
  bool aborted = false;
  std::string abort_reason;
};

struct TrainResult {
  SupernetEnsemble ensemble;
  TrainHistory history;
};

/// Step 2: T iterations of sample -> assign -> gradient step on the winning
/// store only. Throws nothing on numeric blowup; records the abort instead.
TrainResult train(const QasConfig& config, const SearchSpace& space, const Task& task);

struct RankingEntry {
  Architecture arch;
  double objective = 0.0;  // loss, or validation accuracy for classification
  int store = 0;
};

struct RankingTable {
  std::vector<RankingEntry> entries;  // sorted best-first
  bool lower_is_better = true;
  const RankingEntry& best() const { return entries.at(0); }
};

/// Step 3 (uniform): K uniform samples scored by the best store, sorted
/// best-first with deterministic tie-breaking.
RankingTable rank_uniform(const SupernetEnsemble& ensemble, const SearchSpace& space,
                          const Task& task, int k, const NoiseModel& noise, std::uint64_t seed,
                          bool min_over_stores = true);

/// Step 3 (evolutionary): NSGA-II over architecture genomes with objectives
/// (task objective, active-CNOT count); returns every evaluated unique
/// subnet sorted by task objective. With cnot_objective = false the loop is
/// single-objective.
RankingTable rank_evolutionary(const SupernetEnsemble& ensemble, const SearchSpace& space,
                               const Task& task, int pop_size, int generations,
                               const NoiseModel& noise, std::uint64_t seed,
                               bool min_over_stores = true, bool cnot_objective = true);

/// Fixed-width histogram over ranking objectives, (bin_low, bin_high, count).
struct HistogramBin {
  double low = 0.0, high = 0.0;
  int count = 0;
};
std::vector<HistogramBin> ranking_histogram(const RankingTable& table, int bins);

struct RetrainResult {
  ParamAssignment params;                 // best-validation for classification, else final
  std::vector<double> loss_trajectory;    // [0] is the warm-start loss
  std::vector<double> val_acc_trajectory; // classification only
  int best_epoch = 0;
};

/// Step 4: descent on one fixed architecture from the warm-start
/// parameters. For classification the returned params are the epoch with
/// maximum validation accuracy.
RetrainResult retrain(const SearchSpace& space, const Architecture& arch,
                      const ParamAssignment& warm_start, const Task& task, int epochs,
                      OptimizerKind optimizer, double lr, const NoiseModel& noise);

/// Eq.-(5) regret of a greedy history: sum_t L(chosen) - min_w sum_t L(w).
/// Requires full per-store loss vectors; bandit histories are rejected.
double regret(const std::vector<AssignmentRecord>& history);

struct RunRecord {
  QasConfig config;
  std::string space_text;  // descriptor of the searched space
  TrainHistory history;
  RankingTable ranking;
  RetrainResult retrain_result;
  Architecture best_arch;
  double best_objective = 0.0;
  double wall_clock_seconds = 0.0;

  nlohmann::json to_json(const SearchSpace& space) const;
};

/// Full pipeline: train -> rank -> retrain. When `ensemble_out` is given it
/// receives the trained (frozen) ensemble.
RunRecord run_search(const QasConfig& config, const SearchSpace& space, const Task& task,
                     SupernetEnsemble* ensemble_out = nullptr);

nlohmann::json config_to_json(const QasConfig& c);
QasConfig config_from_json(const nlohmann::json& j);

}  // namespace qas
