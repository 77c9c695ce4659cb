#include "qas/diag.hpp"

#include "qas/parallel.hpp"
#include "qas/rand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace qas {

namespace {

std::vector<Architecture> draw_subnets(const SearchSpace& space, int n, std::uint64_t seed) {
  Rng rng(split_seed(seed, 0xc0bbe));
  std::vector<Architecture> archs(n);
  for (int i = 0; i < n; ++i) archs[i] = sample_uniform(space, rng);
  return archs;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * double(i + j) + 1.0;  // ranks are 1-based
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = double(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace

void VarianceSweep::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "L,variance,stderr\n";
  out.precision(17);
  for (const auto& p : points) out << p.depth << ',' << p.variance << ',' << p.stderr_variance << '\n';
}

VarianceSweep barren_sweep(const SpaceFactory& factory, const std::vector<int>& depths,
                           int samples, const Hamiltonian& observable, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("variance needs samples >= 2");
  const NoiseModel no_noise = NoiseModel::off();
  VarianceSweep sweep;
  for (int depth : depths) {
    const auto [space, arch] = factory(depth);
    const VqeTask probe{observable};
    const int d = space.n_qubits * space.n_layers;

    Rng rng(split_seed(seed, 0xba44e0 + std::uint64_t(depth)));
    std::vector<ParamAssignment> draws(samples, ParamAssignment::zeros(space.n_qubits, space.n_layers));
    for (auto& p : draws) {
      for (double& a : p.angles) a = uniform_angle(rng);
    }

    std::vector<double> norms(samples);
    parallel_for(std::size_t(samples), [&, &space = space, &arch = arch](std::size_t s) {
      const std::vector<double> g = gradient_param_shift(space, arch, draws[s], probe, no_noise);
      double sq = 0.0;
      for (double x : g) sq += x * x;
      norms[s] = std::sqrt(sq) / double(d);
    });

    double mean = 0.0;
    for (double x : norms) mean += x;
    mean /= samples;
    double m2 = 0.0, m4 = 0.0;
    for (double x : norms) {
      const double c = x - mean;
      m2 += c * c;
      m4 += c * c * c * c;
    }
    const double var = m2 / double(samples - 1);
    m2 /= samples;
    m4 /= samples;
    const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / samples);
    sweep.points.push_back({depth, var, se, samples, d});
  }
  return sweep;
}

SpaceFactory heuristic_vqe_family() {
  return [](int depth) { return baseline_vqe_space(depth); };
}

SpaceFactory fixed_subnet_family(const SearchSpace& space, const Architecture& arch) {
  return [space, arch](int depth) {
    SearchSpace deep = space;
    deep.n_layers = depth;
    Architecture rep;
    for (int l = 0; l < depth; ++l) {
      const int src = l % space.n_layers;
      rep.single_choice.push_back(arch.single_choice[src]);
      rep.pair_active.push_back(arch.pair_active[src]);
    }
    return std::make_pair(deep, rep);
  };
}

double spearman(const std::vector<double>& r, const std::vector<double>& s) {
  if (r.size() != s.size()) throw std::invalid_argument("length mismatch");
  if (r.size() < 2) throw std::invalid_argument("need at least 2 observations");
  return pearson(average_ranks(r), average_ranks(s));
}

double kendall(const std::vector<double>& r, const std::vector<double>& s) {
  if (r.size() != s.size()) throw std::invalid_argument("length mismatch");
  if (r.size() < 2) throw std::invalid_argument("need at least 2 observations");
  const std::size_t n = r.size();
  long sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dr = r[i] - r[j];
      const double ds = s[i] - s[j];
      const int sr = (dr > 0) - (dr < 0);
      const int ss = (ds > 0) - (ds < 0);
      sum += sr * ss;
    }
  }
  return 2.0 * double(sum) / (double(n) * double(n - 1));
}

void CorrelationReport::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "subnet,independent_score,qas_score\n";
  out.precision(17);
  for (std::size_t i = 0; i < arch_texts.size(); ++i) {
    out << arch_texts[i] << ',' << independent_scores[i] << ',' << qas_scores[i] << '\n';
  }
}

std::vector<double> independent_scores(const SearchSpace& space, const Task& task, int n_subnets,
                                       int independent_epochs, std::uint64_t seed,
                                       const NoiseModel& noise) {
  const std::vector<Architecture> archs = draw_subnets(space, n_subnets, seed);
  std::vector<double> scores(n_subnets);
  parallel_for(std::size_t(n_subnets), [&](std::size_t i) {
    Rng init_rng(split_seed(seed, 0x1d011 + i));
    ParamAssignment init = ParamAssignment::zeros(space.n_qubits, space.n_layers);
    for (double& a : init.angles) a = uniform_angle(init_rng);
    const RetrainResult trained = retrain(space, archs[i], init, task, independent_epochs,
                                          OptimizerKind::Adam, 0.05, noise);
    scores[i] = task.ranking_objective(space, archs[i], trained.params, noise);
  });
  return scores;
}

CorrelationReport correlation_study(const SearchSpace& space, const Task& task,
                                    const SupernetEnsemble& ensemble, int n_subnets,
                                    int independent_epochs, std::uint64_t seed,
                                    const NoiseModel& noise,
                                    const std::vector<double>* precomputed_independent) {
  if (n_subnets < 2) throw std::invalid_argument("correlation needs n_subnets >= 2");
  const std::vector<Architecture> archs = draw_subnets(space, n_subnets, seed);

  CorrelationReport report;
  report.n_subnets = n_subnets;
  report.arch_texts.reserve(n_subnets);
  for (const auto& a : archs) report.arch_texts.push_back(a.to_text(space));

  report.qas_scores.resize(n_subnets);
  parallel_for(std::size_t(n_subnets), [&](std::size_t i) {
    double best = task.ranking_lower_is_better() ? 1e300 : -1e300;
    for (int w = 0; w < ensemble.size(); ++w) {
      const ParamAssignment p = std::as_const(ensemble.store(w)).get_params(archs[i]);
      const double obj = task.ranking_objective(space, archs[i], p, noise);
      const bool better = task.ranking_lower_is_better() ? obj < best : obj > best;
      if (better) best = obj;
    }
    report.qas_scores[i] = best;
  });

  report.independent_scores =
      precomputed_independent ? *precomputed_independent
                              : independent_scores(space, task, n_subnets, independent_epochs,
                                                   seed, noise);
  if (int(report.independent_scores.size()) != n_subnets) {
    throw std::invalid_argument("precomputed independent-score length mismatch");
  }
  report.rho_spearman = spearman(report.independent_scores, report.qas_scores);
  report.rho_kendall = kendall(report.independent_scores, report.qas_scores);
  return report;
}

}  // namespace qas
