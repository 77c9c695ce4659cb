#include "qas/search.hpp"

#include "qas/tasks.hpp"

#include "qas/parallel.hpp"
#include "qas/rand.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace qas {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kEps = 1e-8;

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Converts a raw ranking objective to minimize-form.
double minimize_form(const Task& task, double objective) {
  return task.ranking_lower_is_better() ? objective : -objective;
}

// Scores one architecture on the frozen ensemble: best store under the
// task's ranking objective, or the loss-argmin store when min_over_stores
// is off.
RankingEntry score_arch(const SupernetEnsemble& ensemble, const SearchSpace& space,
                        const Task& task, const Architecture& arch, const NoiseModel& noise,
                        bool min_over_stores) {
  RankingEntry entry;
  entry.arch = arch;
  if (min_over_stores) {
    double best = std::numeric_limits<double>::infinity();
    for (int w = 0; w < ensemble.size(); ++w) {
      const ParamAssignment p = std::as_const(ensemble.store(w)).get_params(arch);
      const double obj = task.ranking_objective(space, arch, p, noise);
      if (minimize_form(task, obj) < best) {
        best = minimize_form(task, obj);
        entry.objective = obj;
        entry.store = w;
      }
    }
  } else {
    const auto [loss, w] = ensemble.eval_min(arch, task, noise);
    (void)loss;
    entry.store = w;
    const ParamAssignment p = std::as_const(ensemble.store(w)).get_params(arch);
    entry.objective = task.ranking_objective(space, arch, p, noise);
  }
  return entry;
}

void sort_entries(std::vector<RankingEntry>& entries, const SearchSpace& space, const Task& task) {
  std::sort(entries.begin(), entries.end(), [&](const RankingEntry& a, const RankingEntry& b) {
    const double fa = minimize_form(task, a.objective);
    const double fb = minimize_form(task, b.objective);
    if (fa != fb) return fa < fb;
    return a.arch.to_text(space) < b.arch.to_text(space);
  });
}

}  // namespace

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "gd") return OptimizerKind::Gd;
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "diag-natural-gd") return OptimizerKind::DiagNaturalGd;
  throw std::invalid_argument("unknown optimizer: " + name);
}

const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Gd: return "gd";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::DiagNaturalGd: return "diag-natural-gd";
  }
  return "?";
}

void QasConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (supernets < 1 || ranking_samples < 1) throw std::invalid_argument("W and K must be >= 1");
  if (learning_rate <= 0.0 || retrain_learning_rate <= 0.0) {
    throw std::invalid_argument("learning rates must be positive");
  }
  if (ranking == RankingMode::Evolutionary && population < 2) {
    throw std::invalid_argument("evolutionary ranking needs population >= 2");
  }
}

void optimizer_step(OptimizerKind kind, std::vector<double>& params,
                    const std::vector<double>& gradient, OptimizerState& state, double lr,
                    const std::vector<double>* metric_diag) {
  if (params.size() != gradient.size()) throw std::invalid_argument("gradient shape mismatch");
  if (!all_finite(gradient)) throw std::invalid_argument("non-finite gradient");
  const std::size_t d = params.size();
  switch (kind) {
    case OptimizerKind::Gd:
      for (std::size_t j = 0; j < d; ++j) params[j] -= lr * gradient[j];
      break;
    case OptimizerKind::Adam: {
      if (state.m.size() != d) {
        state.m.assign(d, 0.0);
        state.v.assign(d, 0.0);
        state.step = 0;
      }
      ++state.step;
      const double c1 = 1.0 - std::pow(kAdamBeta1, double(state.step));
      const double c2 = 1.0 - std::pow(kAdamBeta2, double(state.step));
      for (std::size_t j = 0; j < d; ++j) {
        state.m[j] = kAdamBeta1 * state.m[j] + (1.0 - kAdamBeta1) * gradient[j];
        state.v[j] = kAdamBeta2 * state.v[j] + (1.0 - kAdamBeta2) * gradient[j] * gradient[j];
        params[j] -= lr * (state.m[j] / c1) / (std::sqrt(state.v[j] / c2) + kEps);
      }
      break;
    }
    case OptimizerKind::DiagNaturalGd: {
      if (metric_diag == nullptr || metric_diag->size() != d) {
        throw std::invalid_argument("diag-natural-gd needs the diagonal metric");
      }
      for (std::size_t j = 0; j < d; ++j) {
        params[j] -= lr * gradient[j] / ((*metric_diag)[j] + kEps);
      }
      break;
    }
  }
}

TrainResult train(const QasConfig& config, const SearchSpace& space, const Task& task) {
  config.validate();
  space.validate();

  TrainResult result{SupernetEnsemble(space, config.supernets, config.seed), {}};
  Rng sampler(split_seed(config.seed, 0x5a3591e));
  BanditState bandit = BanditState::init(config.supernets, config.iterations,
                                         split_seed(config.seed, 0xeb3));
  // per-store, per-layout optimizer state so shared rows keep their moments
  std::vector<std::map<LayoutKey, OptimizerState>> opt_state(config.supernets);

  const int d = space.n_qubits * space.n_layers;
  for (int t = 0; t < config.iterations; ++t) {
    const Architecture arch = sample_uniform(space, sampler);
    AssignmentRecord rec =
        config.assignment == AssignmentMode::Greedy
            ? result.ensemble.assign_greedy(arch, task, config.noise, t)
            : result.ensemble.assign_bandit(arch, task, config.noise, bandit, t);
    if (!std::isfinite(rec.chosen_loss)) {
      result.history.aborted = true;
      result.history.abort_reason = "non-finite loss at iteration " + std::to_string(t);
      return result;
    }

    SupernetStore& store = result.ensemble.store(rec.chosen);
    const ParamAssignment params = store.get_params(arch);
    const std::vector<double> grad =
        gradient_param_shift(space, arch, params, task, config.noise);
    if (!all_finite(grad)) {
      result.history.aborted = true;
      result.history.abort_reason = "non-finite gradient at iteration " + std::to_string(t);
      return result;
    }
    std::vector<double> metric;
    if (config.optimizer == OptimizerKind::DiagNaturalGd) {
      metric = diag_fubini_study(space, arch, params, task, config.noise);
    }

    // step each layer row with its own optimizer state, then write back
    std::vector<double> delta(d, 0.0);
    for (int l = 0; l < space.n_layers; ++l) {
      const LayoutKey key = layout_key(space, arch, l);
      OptimizerState& st = opt_state[rec.chosen][key];
      std::vector<double> row(space.n_qubits), g(space.n_qubits);
      std::vector<double> m(space.n_qubits);
      for (int q = 0; q < space.n_qubits; ++q) {
        row[q] = params.at(l, q);
        g[q] = grad[l * space.n_qubits + q];
        if (!metric.empty()) m[q] = metric[l * space.n_qubits + q];
      }
      std::vector<double> stepped = row;
      optimizer_step(config.optimizer, stepped, g, st, config.learning_rate,
                     metric.empty() ? nullptr : &m);
      for (int q = 0; q < space.n_qubits; ++q) {
        delta[l * space.n_qubits + q] = stepped[q] - row[q];
      }
    }
    store.add_to_params(arch, delta);

    result.history.records.push_back(std::move(rec));
    result.history.loss_trajectory.push_back(result.history.records.back().chosen_loss);
  }
  return result;
}

RankingTable rank_uniform(const SupernetEnsemble& ensemble, const SearchSpace& space,
                          const Task& task, int k, const NoiseModel& noise, std::uint64_t seed,
                          bool min_over_stores) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  Rng rng(split_seed(seed, 0x9a4c));
  std::vector<Architecture> archs(k);
  for (int i = 0; i < k; ++i) archs[i] = sample_uniform(space, rng);

  RankingTable table;
  table.lower_is_better = task.ranking_lower_is_better();
  table.entries.resize(k);
  parallel_for(std::size_t(k), [&](std::size_t i) {
    table.entries[i] = score_arch(ensemble, space, task, archs[i], noise, min_over_stores);
  });
  sort_entries(table.entries, space, task);
  return table;
}

namespace {

struct NsgaIndividual {
  Architecture arch;
  std::vector<double> objectives;  // minimize-form
  int rank = 0;
  double crowding = 0.0;
};

// Standard fast nondominated sort; returns fronts of indices.
std::vector<std::vector<int>> nondominated_sort(std::vector<NsgaIndividual>& pop) {
  const int n = int(pop.size());
  std::vector<std::vector<int>> dominates(n);
  std::vector<int> dominated_by(n, 0);
  auto dom = [](const NsgaIndividual& a, const NsgaIndividual& b) {
    bool strictly = false;
    for (std::size_t m = 0; m < a.objectives.size(); ++m) {
      if (a.objectives[m] > b.objectives[m]) return false;
      if (a.objectives[m] < b.objectives[m]) strictly = true;
    }
    return strictly;
  };
  std::vector<std::vector<int>> fronts(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dom(pop[i], pop[j])) dominates[i].push_back(j);
      else if (dom(pop[j], pop[i])) ++dominated_by[i];
    }
    if (dominated_by[i] == 0) {
      pop[i].rank = 0;
      fronts[0].push_back(i);
    }
  }
  int f = 0;
  while (!fronts[f].empty()) {
    std::vector<int> next;
    for (int i : fronts[f]) {
      for (int j : dominates[i]) {
        if (--dominated_by[j] == 0) {
          pop[j].rank = f + 1;
          next.push_back(j);
        }
      }
    }
    fronts.push_back(std::move(next));
    ++f;
  }
  fronts.pop_back();
  return fronts;
}

void assign_crowding(std::vector<NsgaIndividual>& pop, const std::vector<int>& front) {
  for (int i : front) pop[i].crowding = 0.0;
  if (front.size() < 3) {
    for (int i : front) pop[i].crowding = std::numeric_limits<double>::infinity();
    return;
  }
  const std::size_t n_obj = pop[front[0]].objectives.size();
  for (std::size_t m = 0; m < n_obj; ++m) {
    std::vector<int> order = front;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return pop[a].objectives[m] < pop[b].objectives[m];
    });
    const double span = pop[order.back()].objectives[m] - pop[order.front()].objectives[m];
    pop[order.front()].crowding = std::numeric_limits<double>::infinity();
    pop[order.back()].crowding = std::numeric_limits<double>::infinity();
    if (span <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < order.size(); ++i) {
      pop[order[i]].crowding +=
          (pop[order[i + 1]].objectives[m] - pop[order[i - 1]].objectives[m]) / span;
    }
  }
}

}  // namespace

RankingTable rank_evolutionary(const SupernetEnsemble& ensemble, const SearchSpace& space,
                               const Task& task, int pop_size, int generations,
                               const NoiseModel& noise, std::uint64_t seed, bool min_over_stores,
                               bool cnot_objective) {
  if (pop_size < 2) throw std::invalid_argument("population size must be >= 2");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  Rng rng(split_seed(seed, 0xe7011));

  // every unique subnet ever evaluated, by canonical text
  std::map<std::string, RankingEntry> cache;
  auto evaluate_batch = [&](const std::vector<Architecture>& batch) {
    std::vector<std::string> texts(batch.size());
    std::vector<int> fresh;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      texts[i] = batch[i].to_text(space);
      if (!cache.count(texts[i]) &&
          std::find(fresh.begin(), fresh.end(), int(i)) == fresh.end()) {
        bool dup = false;
        for (int j : fresh) {
          if (texts[j] == texts[i]) { dup = true; break; }
        }
        if (!dup) fresh.push_back(int(i));
      }
    }
    std::vector<RankingEntry> scored(fresh.size());
    parallel_for(fresh.size(), [&](std::size_t fi) {
      scored[fi] = score_arch(ensemble, space, task, batch[fresh[fi]], noise, min_over_stores);
    });
    for (std::size_t fi = 0; fi < fresh.size(); ++fi) cache[texts[fresh[fi]]] = scored[fi];
  };

  auto objectives_of = [&](const Architecture& arch) {
    const RankingEntry& e = cache.at(arch.to_text(space));
    std::vector<double> obj{minimize_form(task, e.objective)};
    if (cnot_objective) obj.push_back(double(arch.active_cnot_count()));
    return obj;
  };

  const std::size_t n_pair_genes = space.candidate_pairs.size();
  const std::size_t genes = std::size_t(space.n_layers) * (space.n_qubits + n_pair_genes);
  const double mutation_p = 1.0 / double(genes);

  std::vector<NsgaIndividual> pop(pop_size);
  {
    std::vector<Architecture> init(pop_size);
    for (int i = 0; i < pop_size; ++i) init[i] = sample_uniform(space, rng);
    evaluate_batch(init);
    for (int i = 0; i < pop_size; ++i) {
      pop[i].arch = init[i];
      pop[i].objectives = objectives_of(init[i]);
    }
    auto fronts = nondominated_sort(pop);
    for (const auto& front : fronts) assign_crowding(pop, front);
  }

  auto tournament = [&]() -> const NsgaIndividual& {
    const NsgaIndividual& a = pop[bounded_int(rng, pop.size())];
    const NsgaIndividual& b = pop[bounded_int(rng, pop.size())];
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    return a.crowding >= b.crowding ? a : b;
  };

  for (int g = 1; g < generations; ++g) {
    std::vector<Architecture> offspring;
    offspring.reserve(pop_size);
    while (int(offspring.size()) < pop_size) {
      const Architecture& p1 = tournament().arch;
      const Architecture& p2 = tournament().arch;
      Architecture child = p1;
      // uniform crossover per gene
      for (int l = 0; l < space.n_layers; ++l) {
        for (int q = 0; q < space.n_qubits; ++q) {
          if (bounded_int(rng, 2)) child.single_choice[l][q] = p2.single_choice[l][q];
        }
        for (std::size_t p = 0; p < n_pair_genes; ++p) {
          if (bounded_int(rng, 2)) child.pair_active[l][p] = p2.pair_active[l][p];
        }
      }
      // per-gene mutation
      for (int l = 0; l < space.n_layers; ++l) {
        for (int q = 0; q < space.n_qubits; ++q) {
          if (uniform_double(rng) < mutation_p) {
            child.single_choice[l][q] = int(bounded_int(rng, space.single_gate_pool.size()));
          }
        }
        for (std::size_t p = 0; p < n_pair_genes; ++p) {
          if (uniform_double(rng) < mutation_p) child.pair_active[l][p] = bounded_int(rng, 2);
        }
      }
      offspring.push_back(std::move(child));
    }
    evaluate_batch(offspring);

    std::vector<NsgaIndividual> merged = pop;
    for (const Architecture& a : offspring) {
      NsgaIndividual ind;
      ind.arch = a;
      ind.objectives = objectives_of(a);
      merged.push_back(std::move(ind));
    }
    auto fronts = nondominated_sort(merged);
    for (const auto& front : fronts) assign_crowding(merged, front);

    std::vector<NsgaIndividual> next;
    next.reserve(pop_size);
    for (const auto& front : fronts) {
      if (int(next.size() + front.size()) <= pop_size) {
        for (int i : front) next.push_back(merged[i]);
      } else {
        std::vector<int> order = front;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          if (merged[a].crowding != merged[b].crowding) {
            return merged[a].crowding > merged[b].crowding;
          }
          return merged[a].arch.to_text(space) < merged[b].arch.to_text(space);
        });
        for (int i : order) {
          if (int(next.size()) >= pop_size) break;
          next.push_back(merged[i]);
        }
      }
      if (int(next.size()) >= pop_size) break;
    }
    pop = std::move(next);
  }

  RankingTable table;
  table.lower_is_better = task.ranking_lower_is_better();
  table.entries.reserve(cache.size());
  for (auto& [text, entry] : cache) table.entries.push_back(entry);
  sort_entries(table.entries, space, task);
  return table;
}

std::vector<HistogramBin> ranking_histogram(const RankingTable& table, int bins) {
  if (bins < 1 || table.entries.empty()) return {};
  double lo = table.entries.front().objective, hi = lo;
  for (const auto& e : table.entries) {
    lo = std::min(lo, e.objective);
    hi = std::max(hi, e.objective);
  }
  if (hi <= lo) hi = lo + 1e-12;
  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].low = lo + b * width;
    out[b].high = lo + (b + 1) * width;
  }
  for (const auto& e : table.entries) {
    int b = int((e.objective - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++out[b].count;
  }
  return out;
}

RetrainResult retrain(const SearchSpace& space, const Architecture& arch,
                      const ParamAssignment& warm_start, const Task& task, int epochs,
                      OptimizerKind optimizer, double lr, const NoiseModel& noise) {
  RetrainResult result;
  result.params = warm_start;
  result.loss_trajectory.push_back(evaluate(space, arch, result.params, task, noise));

  // validation-based model selection for classification
  const auto* classification = dynamic_cast<const ClassificationTask*>(&task);
  ParamAssignment best_params = result.params;
  double best_val = -1.0;
  auto track_val = [&](int epoch) {
    if (!classification) return;
    const double v =
        classification->val_accuracy(build_circuit(space, arch, result.params), noise);
    result.val_acc_trajectory.push_back(v);
    if (v > best_val) {
      best_val = v;
      best_params = result.params;
      result.best_epoch = epoch;
    }
  };
  track_val(0);

  OptimizerState state;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    const std::vector<double> grad = gradient_param_shift(space, arch, result.params, task, noise);
    std::vector<double> metric;
    if (optimizer == OptimizerKind::DiagNaturalGd) {
      metric = diag_fubini_study(space, arch, result.params, task, noise);
    }
    optimizer_step(optimizer, result.params.angles, grad, state, lr,
                   metric.empty() ? nullptr : &metric);
    result.loss_trajectory.push_back(evaluate(space, arch, result.params, task, noise));
    track_val(epoch);
  }
  if (classification) result.params = best_params;
  return result;
}

double regret(const std::vector<AssignmentRecord>& history) {
  if (history.empty()) return 0.0;
  const std::size_t w_count = history.front().losses.size();
  double chosen_sum = 0.0;
  std::vector<double> store_sums(w_count, 0.0);
  for (const AssignmentRecord& rec : history) {
    if (rec.losses.size() != w_count) throw std::invalid_argument("ragged history");
    chosen_sum += rec.chosen_loss;
    for (std::size_t w = 0; w < w_count; ++w) {
      if (!std::isfinite(rec.losses[w])) {
        throw std::logic_error("regret needs full per-store loss vectors (greedy mode)");
      }
      store_sums[w] += rec.losses[w];
    }
  }
  return chosen_sum - *std::min_element(store_sums.begin(), store_sums.end());
}

RunRecord run_search(const QasConfig& config, const SearchSpace& space, const Task& task,
                     SupernetEnsemble* ensemble_out) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord record;
  record.config = config;
  record.space_text = space_size(space);

  TrainResult trained = train(config, space, task);
  record.history = trained.history;
  if (ensemble_out) *ensemble_out = trained.ensemble;
  if (trained.history.aborted) return record;

  record.ranking =
      config.ranking == RankingMode::Uniform
          ? rank_uniform(trained.ensemble, space, task, config.ranking_samples, config.noise,
                         config.seed, config.rank_min_over_stores)
          : rank_evolutionary(trained.ensemble, space, task, config.population,
                              config.generations, config.noise, config.seed,
                              config.rank_min_over_stores, config.cnot_objective);

  const RankingEntry& best = record.ranking.best();
  record.best_arch = best.arch;
  const ParamAssignment warm =
      std::as_const(trained.ensemble.store(best.store)).get_params(best.arch);
  record.retrain_result = retrain(space, best.arch, warm, task, config.retrain_epochs,
                                  config.retrain_optimizer, config.retrain_learning_rate,
                                  config.noise);
  record.best_objective = best.objective;
  record.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

nlohmann::json config_to_json(const QasConfig& c) {
  return {
      {"iterations", c.iterations},
      {"supernets", c.supernets},
      {"ranking_samples", c.ranking_samples},
      {"learning_rate", c.learning_rate},
      {"optimizer", optimizer_name(c.optimizer)},
      {"noise",
       {{"p1", c.noise.p1},
        {"p2", c.noise.p2},
        {"enabled", c.noise.enabled},
        {"noise_on_encoding", c.noise.noise_on_encoding}}},
      {"seed", c.seed},
      {"assignment", c.assignment == AssignmentMode::Greedy ? "greedy" : "bandit"},
      {"ranking", c.ranking == RankingMode::Uniform ? "uniform" : "evolutionary"},
      {"rank_min_over_stores", c.rank_min_over_stores},
      {"population", c.population},
      {"generations", c.generations},
      {"cnot_objective", c.cnot_objective},
      {"retrain_epochs", c.retrain_epochs},
      {"retrain_learning_rate", c.retrain_learning_rate},
      {"retrain_optimizer", optimizer_name(c.retrain_optimizer)},
  };
}

QasConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "iterations", "supernets", "ranking_samples", "learning_rate", "optimizer", "noise",
      "seed", "assignment", "ranking", "rank_min_over_stores", "population", "generations",
      "cnot_objective", "retrain_epochs", "retrain_learning_rate", "retrain_optimizer"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw std::invalid_argument("unknown config key: " + it.key());
    }
  }
  QasConfig c;
  c.iterations = j.value("iterations", c.iterations);
  c.supernets = j.value("supernets", c.supernets);
  c.ranking_samples = j.value("ranking_samples", c.ranking_samples);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  if (j.contains("optimizer")) c.optimizer = optimizer_from_name(j.at("optimizer"));
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    c.noise.p1 = n.value("p1", 0.0);
    c.noise.p2 = n.value("p2", 0.0);
    c.noise.enabled = n.value("enabled", false);
    c.noise.noise_on_encoding = n.value("noise_on_encoding", true);
  }
  c.seed = j.value("seed", std::uint64_t(0));
  if (j.contains("assignment")) {
    const std::string a = j.at("assignment");
    if (a == "greedy") c.assignment = AssignmentMode::Greedy;
    else if (a == "bandit") c.assignment = AssignmentMode::Bandit;
    else throw std::invalid_argument("unknown assignment mode: " + a);
  }
  if (j.contains("ranking")) {
    const std::string r = j.at("ranking");
    if (r == "uniform") c.ranking = RankingMode::Uniform;
    else if (r == "evolutionary") c.ranking = RankingMode::Evolutionary;
    else throw std::invalid_argument("unknown ranking mode: " + r);
  }
  c.rank_min_over_stores = j.value("rank_min_over_stores", c.rank_min_over_stores);
  c.population = j.value("population", c.population);
  c.generations = j.value("generations", c.generations);
  c.cnot_objective = j.value("cnot_objective", c.cnot_objective);
  c.retrain_epochs = j.value("retrain_epochs", c.retrain_epochs);
  c.retrain_learning_rate = j.value("retrain_learning_rate", c.retrain_learning_rate);
  if (j.contains("retrain_optimizer")) {
    c.retrain_optimizer = optimizer_from_name(j.at("retrain_optimizer"));
  }
  c.validate();
  return c;
}

nlohmann::json RunRecord::to_json(const SearchSpace& space) const {
  nlohmann::json records = nlohmann::json::array();
  for (const AssignmentRecord& r : history.records) {
    nlohmann::json losses = nlohmann::json::array();
    for (double l : r.losses) {
      if (std::isfinite(l)) losses.push_back(l);
      else losses.push_back(nullptr);
    }
    records.push_back({{"iteration", r.iteration},
                       {"arch", r.arch.to_text(space)},
                       {"losses", losses},
                       {"chosen", r.chosen},
                       {"chosen_loss", r.chosen_loss}});
  }
  nlohmann::json ranking_json = nlohmann::json::array();
  for (const RankingEntry& e : ranking.entries) {
    ranking_json.push_back(
        {{"arch", e.arch.to_text(space)}, {"objective", e.objective}, {"store", e.store}});
  }
  nlohmann::json out{
      {"config", config_to_json(config)},
      {"space_size", space_text},
      {"assignment_history", records},
      {"loss_trajectory", history.loss_trajectory},
      {"aborted", history.aborted},
      {"ranking", ranking_json},
      {"wall_clock_seconds", wall_clock_seconds},
  };
  if (!history.aborted) {
    out["best_arch"] = best_arch.to_text(space);
    out["best_objective"] = best_objective;
    out["retrain"] = {{"loss_trajectory", retrain_result.loss_trajectory},
                      {"val_acc_trajectory", retrain_result.val_acc_trajectory},
                      {"best_epoch", retrain_result.best_epoch},
                      {"final_angles", retrain_result.params.angles}};
  }
  if (!history.abort_reason.empty()) out["abort_reason"] = history.abort_reason;
  return out;
}

}  // namespace qas
