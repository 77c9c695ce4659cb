#pragma once

// Barren-plateau gradient-variance sweeps, rank-correlation study, and
// regret reporting helpers.

#include "qas/search.hpp"
#include "qas/tasks.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qas {

struct VarianceSweepPoint {
  int depth = 0;
  double variance = 0.0;
  double stderr_variance = 0.0;  // Monte-Carlo standard error of the variance
  int samples = 0;
  int param_count = 0;
};

struct VarianceSweep {
  std::vector<VarianceSweepPoint> points;
  void save_csv(const std::string& path) const;  // (L, variance, stderr)
};

/// Variance of ||grad <obs>||_2 / d over `samples` uniform-random parameter
/// vectors, per depth, on the circuit the factory returns for that depth.
/// Noiseless by construction.
using SpaceFactory = std::function<std::pair<SearchSpace, Architecture>(int depth)>;

VarianceSweep barren_sweep(const SpaceFactory& factory, const std::vector<int>& depths,
                           int samples, const Hamiltonian& observable, std::uint64_t seed);

/// Dense heuristic baseline family (alternating RY/RZ + CNOT chain).
SpaceFactory heuristic_vqe_family();
/// Fixed-subnet family: the same architecture layout replicated to depth.
SpaceFactory fixed_subnet_family(const SearchSpace& space, const Architecture& arch);

/// Spearman rank correlation: Pearson correlation of average-ranked data
/// (tie-safe; equals 1 - 6*sum d^2 / (n(n^2-1)) when rank vectors are
/// tie-free).
double spearman(const std::vector<double>& r, const std::vector<double>& s);

/// Kendall tau-a: (2 / (n(n-1))) * sum_{i<j} sign(r_i-r_j) sign(s_i-s_j).
double kendall(const std::vector<double>& r, const std::vector<double>& s);

struct CorrelationReport {
  int n_subnets = 0;
  std::vector<std::string> arch_texts;
  std::vector<double> independent_scores;
  std::vector<double> qas_scores;
  double rho_spearman = 0.0;
  double rho_kendall = 0.0;
  void save_csv(const std::string& path) const;  // (subnet, independent_score, qas_score)
};

/// Scores n uniform subnets two ways: frozen-ensemble ranking objective vs
/// independent training from fresh init, then correlates the two vectors.
/// Precomputed independent scores (keyed by arch text) can be reused across
/// ensembles.
CorrelationReport correlation_study(const SearchSpace& space, const Task& task,
                                    const SupernetEnsemble& ensemble, int n_subnets,
                                    int independent_epochs, std::uint64_t seed,
                                    const NoiseModel& noise = NoiseModel::off(),
                                    const std::vector<double>* precomputed_independent = nullptr);

/// Independent-training scores for the subnets correlation_study would draw
/// with the same (seed, n); reusable across ensembles.
std::vector<double> independent_scores(const SearchSpace& space, const Task& task, int n_subnets,
                                       int independent_epochs, std::uint64_t seed,
                                       const NoiseModel& noise = NoiseModel::off());

}  // namespace qas
