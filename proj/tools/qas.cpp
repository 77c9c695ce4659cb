// qas: command-line front end for the quantum architecture search lab.
//
// Exit codes: 0 ok, 2 config/schema error, 3 numeric abort.

#include "qas/diag.hpp"
#include "qas/parallel.hpp"
#include "qas/search.hpp"
#include "qas/tasks.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw SchemaError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
}

qas::GateKind gate_from_name(const std::string& s) {
  if (s == "RX") return qas::GateKind::RX;
  if (s == "RY") return qas::GateKind::RY;
  if (s == "RZ") return qas::GateKind::RZ;
  throw SchemaError("unknown pool gate: " + s);
}

qas::SearchSpace space_from_json(const json& j) {
  reject_unknown_keys(j, {"n_qubits", "n_layers", "pool", "pairs"}, "space");
  qas::SearchSpace s;
  s.n_qubits = j.at("n_qubits").get<int>();
  s.n_layers = j.at("n_layers").get<int>();
  for (const auto& g : j.at("pool")) s.single_gate_pool.push_back(gate_from_name(g));
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw SchemaError("pairs entries must be [control,target]");
    s.candidate_pairs.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw SchemaError(std::string("invalid space: ") + e.what());
  }
  return s;
}

struct Experiment {
  std::string task_name;  // "classify" | "vqe"
  qas::SearchSpace space;
  std::unique_ptr<qas::Task> task;
  qas::QasConfig qas_config;
  std::string out_dir = "runs";
  json raw;  // full config document for hashing/manifest
};

Experiment load_experiment(const std::string& path) {
  const json doc = load_json(path);
  reject_unknown_keys(doc, {"task", "space", "dataset", "qas", "out_dir", "diagnostics"}, "config");
  Experiment exp;
  exp.raw = doc;
  exp.task_name = doc.at("task").get<std::string>();
  if (exp.task_name == "classify") {
    std::uint64_t data_seed = 7;
    int n = 300;
    std::string data_path;
    if (doc.contains("dataset")) {
      const json& d = doc.at("dataset");
      reject_unknown_keys(d, {"seed", "n", "path"}, "dataset");
      data_seed = d.value("seed", data_seed);
      n = d.value("n", n);
      data_path = d.value("path", data_path);
    }
    qas::Dataset data = data_path.empty() ? qas::generate_dataset(data_seed, n)
                                          : qas::Dataset::load_csv(data_path);
    exp.task = std::make_unique<qas::ClassificationTask>(std::move(data));
    exp.space = qas::classification_search_space();
  } else if (exp.task_name == "vqe") {
    exp.task = std::make_unique<qas::VqeTask>();
    exp.space = qas::vqe_search_space();
  } else {
    throw SchemaError("task must be 'classify' or 'vqe'");
  }
  if (doc.contains("space")) exp.space = space_from_json(doc.at("space"));
  if (exp.space.n_qubits != exp.task->n_qubits()) {
    throw SchemaError("space qubit count does not match the task");
  }
  if (doc.contains("qas")) {
    try {
      exp.qas_config = qas::config_from_json(doc.at("qas"));
    } catch (const std::exception& e) {
      throw SchemaError(std::string("invalid qas config: ") + e.what());
    }
  }
  exp.out_dir = doc.value("out_dir", exp.out_dir);
  return exp;
}

std::string config_hash(const json& doc) {
  const std::size_t h = std::hash<std::string>{}(doc.dump());
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016zx", h);
  return buf;
}

void write_manifest(const fs::path& dir, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& artifacts) {
  json manifest{{"config_hash", config_hash(config)},
                {"seed", seed},
                {"artifacts", artifacts},
                {"tool_version", kToolVersion}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void save_histogram_csv(const fs::path& path, const std::vector<qas::HistogramBin>& bins) {
  std::ofstream out(path);
  out << "bin_low,bin_high,count\n";
  out.precision(17);
  for (const auto& b : bins) out << b.low << ',' << b.high << ',' << b.count << '\n';
}

void save_trajectory_csv(const fs::path& path, const std::vector<double>& values,
                         const std::string& column) {
  std::ofstream out(path);
  out << "iteration," << column << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_override;
  int threads = 0;
  std::string noise_override;  // "", "on", "off"

  void attach(CLI::App* cmd, bool need_config = true) {
    auto* c = cmd->add_option("--config", config_path, "experiment config (JSON)");
    if (need_config) c->required();
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--out", out_override, "override the output directory");
    cmd->add_option("--threads", threads, "cap worker threads (0 = all cores)");
    cmd->add_option("--noise", noise_override, "force noise on|off")
        ->check(CLI::IsMember({"on", "off"}));
  }

  void apply(Experiment& exp) const {
    if (seed) exp.qas_config.seed = *seed;
    if (!out_override.empty()) exp.out_dir = out_override;
    if (threads > 0) qas::set_max_threads(threads);
    if (noise_override == "on") {
      exp.qas_config.noise.enabled = true;
      if (exp.qas_config.noise.p1 == 0.0 && exp.qas_config.noise.p2 == 0.0) {
        exp.qas_config.noise = qas::NoiseModel::depolarizing(0.05, 0.2);
      }
    } else if (noise_override == "off") {
      exp.qas_config.noise.enabled = false;
    }
  }
};

int cmd_gen_data(std::uint64_t seed, int n, const std::string& out_path) {
  const qas::Dataset data = qas::generate_dataset(seed, n);
  data.save_csv(out_path);
  std::cout << "wrote " << data.features.size() << " samples to " << out_path
            << " (rejection rate " << data.rejection_rate << ")\n";
  return 0;
}

int cmd_search(const CommonFlags& flags) {
  Experiment exp = load_experiment(flags.config_path);
  flags.apply(exp);

  const fs::path dir = fs::path(exp.out_dir);
  fs::create_directories(dir);

  qas::SupernetEnsemble ensemble;
  const qas::RunRecord record = qas::run_search(exp.qas_config, exp.space, *exp.task, &ensemble);
  std::vector<std::string> artifacts{"run_record.json"};
  std::ofstream(dir / "run_record.json") << record.to_json(exp.space).dump(2) << '\n';

  if (record.history.aborted) {
    write_manifest(dir, exp.raw, exp.qas_config.seed, artifacts);
    std::cerr << "numeric abort: " << record.history.abort_reason << '\n';
    return 3;
  }

  save_trajectory_csv(dir / "loss_trajectory.csv", record.history.loss_trajectory, "loss");
  save_histogram_csv(dir / "ranking_hist.csv", qas::ranking_histogram(record.ranking, 20));
  write_text(dir / "best_architecture.txt", record.best_arch.to_text(exp.space) + "\n");
  save_trajectory_csv(dir / "retrain_trajectory.csv", record.retrain_result.loss_trajectory,
                      "loss");
  // frozen ensemble for follow-up rank/retrain/correlate invocations
  std::ofstream(dir / "ensemble.json") << ensemble.to_json().dump() << '\n';
  artifacts.insert(artifacts.end(), {"loss_trajectory.csv", "ranking_hist.csv",
                                     "best_architecture.txt", "retrain_trajectory.csv",
                                     "ensemble.json"});

  write_manifest(dir, exp.raw, exp.qas_config.seed, artifacts);
  std::cout << "best architecture: " << record.best_arch.to_text(exp.space)
            << "\nbest ranking objective: " << record.best_objective
            << "\nfinal retrain loss: " << record.retrain_result.loss_trajectory.back() << '\n';
  return 0;
}

qas::SupernetEnsemble load_ensemble(const Experiment& exp, const std::string& path) {
  if (!fs::exists(path)) throw SchemaError("ensemble file not found: " + path);
  return qas::SupernetEnsemble::from_json(exp.space, load_json(path));
}

int cmd_rank(const CommonFlags& flags, const std::string& ensemble_path) {
  Experiment exp = load_experiment(flags.config_path);
  flags.apply(exp);
  const fs::path dir = fs::path(exp.out_dir);
  fs::create_directories(dir);

  qas::SupernetEnsemble ensemble = load_ensemble(exp, ensemble_path);
  const qas::RankingTable table =
      exp.qas_config.ranking == qas::RankingMode::Uniform
          ? qas::rank_uniform(ensemble, exp.space, *exp.task, exp.qas_config.ranking_samples,
                              exp.qas_config.noise, exp.qas_config.seed,
                              exp.qas_config.rank_min_over_stores)
          : qas::rank_evolutionary(ensemble, exp.space, *exp.task, exp.qas_config.population,
                                   exp.qas_config.generations, exp.qas_config.noise,
                                   exp.qas_config.seed, exp.qas_config.rank_min_over_stores,
                                   exp.qas_config.cnot_objective);
  save_histogram_csv(dir / "ranking_hist.csv", qas::ranking_histogram(table, 20));
  std::ofstream out(dir / "ranking.csv");
  out << "arch,objective,store\n";
  out.precision(17);
  for (const auto& e : table.entries) {
    out << e.arch.to_text(exp.space) << ',' << e.objective << ',' << e.store << '\n';
  }
  write_manifest(dir, exp.raw, exp.qas_config.seed, {"ranking.csv", "ranking_hist.csv"});
  std::cout << "best: " << table.best().arch.to_text(exp.space) << " objective "
            << table.best().objective << '\n';
  return 0;
}

int cmd_retrain(const CommonFlags& flags, const std::string& ensemble_path,
                const std::string& arch_text) {
  Experiment exp = load_experiment(flags.config_path);
  flags.apply(exp);
  const fs::path dir = fs::path(exp.out_dir);
  fs::create_directories(dir);

  qas::SupernetEnsemble ensemble = load_ensemble(exp, ensemble_path);
  qas::Architecture arch;
  try {
    arch = qas::Architecture::from_text(exp.space, arch_text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("bad --arch: ") + e.what());
  }
  const auto [loss, store] = ensemble.eval_min(arch, *exp.task, exp.qas_config.noise);
  const qas::ParamAssignment warm = std::as_const(ensemble.store(store)).get_params(arch);
  const qas::RetrainResult result = qas::retrain(
      exp.space, arch, warm, *exp.task, exp.qas_config.retrain_epochs,
      exp.qas_config.retrain_optimizer, exp.qas_config.retrain_learning_rate,
      exp.qas_config.noise);
  save_trajectory_csv(dir / "retrain_trajectory.csv", result.loss_trajectory, "loss");
  write_manifest(dir, exp.raw, exp.qas_config.seed, {"retrain_trajectory.csv"});
  std::cout << "warm-start loss " << loss << " -> final loss " << result.loss_trajectory.back()
            << '\n';
  return 0;
}

int cmd_vqe_exact(const std::string& hamiltonian_path) {
  const qas::Hamiltonian h =
      hamiltonian_path.empty() ? qas::h2_hamiltonian() : qas::load_hamiltonian(hamiltonian_path);
  std::cout.precision(12);
  std::cout << qas::exact_ground_energy(h) << '\n';
  return 0;
}

int cmd_barren(const CommonFlags& flags) {
  Experiment exp = load_experiment(flags.config_path);
  flags.apply(exp);
  const fs::path dir = fs::path(exp.out_dir);
  fs::create_directories(dir);

  std::vector<int> depths{2, 3, 4, 5, 6, 7};
  int samples = 2000;
  std::string mode = "heuristic";
  std::string observable = "ZIII";
  std::string subnet_text;
  if (exp.raw.contains("diagnostics") && exp.raw.at("diagnostics").contains("barren")) {
    const json& b = exp.raw.at("diagnostics").at("barren");
    reject_unknown_keys(b, {"depths", "samples", "mode", "observable", "subnet"},
                        "diagnostics.barren");
    if (b.contains("depths")) depths = b.at("depths").get<std::vector<int>>();
    samples = b.value("samples", samples);
    mode = b.value("mode", mode);
    observable = b.value("observable", observable);
    subnet_text = b.value("subnet", subnet_text);
  }
  qas::Hamiltonian obs;
  obs.add(1.0, observable);

  qas::SpaceFactory factory;
  if (mode == "heuristic") {
    factory = qas::heuristic_vqe_family();
  } else if (mode == "qas") {
    if (subnet_text.empty()) throw SchemaError("barren mode 'qas' needs diagnostics.barren.subnet");
    factory = qas::fixed_subnet_family(exp.space,
                                       qas::Architecture::from_text(exp.space, subnet_text));
  } else {
    throw SchemaError("barren mode must be 'heuristic' or 'qas'");
  }

  const qas::VarianceSweep sweep =
      qas::barren_sweep(factory, depths, samples, obs, exp.qas_config.seed);
  sweep.save_csv((dir / "barren_sweep.csv").string());
  write_manifest(dir, exp.raw, exp.qas_config.seed, {"barren_sweep.csv"});
  for (const auto& p : sweep.points) {
    std::cout << "L=" << p.depth << " var=" << p.variance << " stderr=" << p.stderr_variance
              << '\n';
  }
  return 0;
}

int cmd_correlate(const CommonFlags& flags, const std::string& ensemble_path) {
  Experiment exp = load_experiment(flags.config_path);
  flags.apply(exp);
  const fs::path dir = fs::path(exp.out_dir);
  fs::create_directories(dir);

  int n_subnets = 100;
  int independent_epochs = 100;
  if (exp.raw.contains("diagnostics") && exp.raw.at("diagnostics").contains("correlation")) {
    const json& c = exp.raw.at("diagnostics").at("correlation");
    reject_unknown_keys(c, {"n_subnets", "independent_epochs"}, "diagnostics.correlation");
    n_subnets = c.value("n_subnets", n_subnets);
    independent_epochs = c.value("independent_epochs", independent_epochs);
  }
  qas::SupernetEnsemble ensemble = load_ensemble(exp, ensemble_path);
  const qas::CorrelationReport report =
      qas::correlation_study(exp.space, *exp.task, ensemble, n_subnets, independent_epochs,
                             exp.qas_config.seed, exp.qas_config.noise);
  report.save_csv((dir / "correlation.csv").string());
  write_manifest(dir, exp.raw, exp.qas_config.seed, {"correlation.csv"});
  std::cout << "rho_S=" << report.rho_spearman << " rho_K=" << report.rho_kendall << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum circuit architecture search lab"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate the synthetic classification dataset");
  std::uint64_t gen_seed = 7;
  int gen_n = 300;
  std::string gen_out = "dataset.csv";
  gen->add_option("--seed", gen_seed, "dataset RNG seed");
  gen->add_option("--n", gen_n, "number of samples")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "output CSV path");

  CommonFlags search_flags, rank_flags, retrain_flags, barren_flags, corr_flags;
  auto* search = app.add_subcommand("search", "run the full train/rank/retrain pipeline");
  search_flags.attach(search);
  auto* rank = app.add_subcommand("rank", "rank subnets on a saved ensemble");
  rank_flags.attach(rank);
  std::string rank_ensemble, retrain_ensemble, corr_ensemble, retrain_arch;
  rank->add_option("--ensemble", rank_ensemble, "ensemble JSON from a search run")->required();
  auto* retr = app.add_subcommand("retrain", "retrain one architecture from a saved ensemble");
  retrain_flags.attach(retr);
  retr->add_option("--ensemble", retrain_ensemble, "ensemble JSON")->required();
  retr->add_option("--arch", retrain_arch, "architecture text form")->required();
  auto* vqe_exact = app.add_subcommand("vqe-exact", "print the exact ground-state energy");
  std::string ham_path;
  vqe_exact->add_option("--hamiltonian", ham_path, "term-list file (default: built-in H2)");
  auto* barren = app.add_subcommand("barren", "gradient-variance sweep over circuit depth");
  barren_flags.attach(barren);
  auto* corr = app.add_subcommand("correlate", "ranking vs independent-training correlation");
  corr_flags.attach(corr);
  corr->add_option("--ensemble", corr_ensemble, "ensemble JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_seed, gen_n, gen_out);
    if (search->parsed()) return cmd_search(search_flags);
    if (rank->parsed()) return cmd_rank(rank_flags, rank_ensemble);
    if (retr->parsed()) return cmd_retrain(retrain_flags, retrain_ensemble, retrain_arch);
    if (vqe_exact->parsed()) return cmd_vqe_exact(ham_path);
    if (barren->parsed()) return cmd_barren(barren_flags);
    if (corr->parsed()) return cmd_correlate(corr_flags, corr_ensemble);
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
