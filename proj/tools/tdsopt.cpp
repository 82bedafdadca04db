#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tds/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct GlobalFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> repetitions;
  std::optional<int> budget;
  std::optional<int> jobs;
  std::optional<std::string> algorithm;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& f) {
  cmd->add_option("--config", f.config_path, "configuration file");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--repetitions", f.repetitions, "independent runs per algorithm");
  cmd->add_option("--budget", f.budget, "objective evaluation budget per run");
  cmd->add_option("--jobs", f.jobs, "max concurrent runs");
  cmd->add_option("--algorithm", f.algorithm,
                  "algorithm: genetic|caste|separated|topsis");
}

// precedence: flag > file > default
tds::CliConfig resolve(const GlobalFlags& f) {
  tds::CliConfig cfg;
  if (!f.config_path.empty()) cfg = tds::load_config_file(f.config_path);
  if (!f.out_dir.empty()) cfg.output_dir = f.out_dir;
  if (f.seed) cfg.experiment.base_seed = *f.seed;
  if (f.repetitions) cfg.experiment.repetitions = *f.repetitions;
  if (f.budget) cfg.experiment.engine.evaluation_budget = *f.budget;
  if (f.jobs) cfg.experiment.jobs = *f.jobs;
  if (f.algorithm) cfg.experiment.algorithm = tds::algorithm_from_name(*f.algorithm);
  return cfg;
}

void echo_config(const tds::CliConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream out(std::filesystem::path(cfg.output_dir) / "config_resolved.ini");
  out << tds::config_to_text(cfg);
}

void print_summary(const tds::StatsSummary& s) {
  std::printf("%-10s average %.6e  minimum %.6e  std %.6e\n", s.algorithm.c_str(),
              s.average, s.minimum, s.std_dev);
}

tds::AlgorithmResults run_algorithm(tds::ExperimentConfig cfg, tds::Algorithm alg,
                                    const tds::ObservationDataset& data) {
  cfg.algorithm = alg;
  tds::AlgorithmResults r;
  r.algorithm = tds::algorithm_name(alg);
  r.traces = tds::run_experiment(cfg, data);
  r.summary = tds::summarize(r.algorithm, r.traces);
  r.curve = tds::convergence_curve(r.traces);
  return r;
}

int cmd_run(const GlobalFlags& flags) {
  const tds::CliConfig cfg = resolve(flags);
  cfg.experiment.validate();
  const tds::ObservationDataset data = cfg.load_dataset();
  echo_config(cfg);
  auto result = run_algorithm(cfg.experiment, cfg.experiment.algorithm, data);
  tds::export_results({result}, data, cfg.grid, cfg.output_dir);
  print_summary(result.summary);
  return kExitOk;
}

int cmd_compare(const GlobalFlags& flags) {
  const tds::CliConfig cfg = resolve(flags);
  const tds::ObservationDataset data = cfg.load_dataset();
  echo_config(cfg);
  std::vector<tds::AlgorithmResults> results;
  for (tds::Algorithm alg : {tds::Algorithm::genetic, tds::Algorithm::caste,
                             tds::Algorithm::separated, tds::Algorithm::topsis}) {
    tds::ExperimentConfig ecfg = cfg.experiment;
    ecfg.algorithm = alg;
    ecfg.validate();
    results.push_back(run_algorithm(ecfg, alg, data));
  }
  tds::export_results(results, data, cfg.grid, cfg.output_dir);
  for (const auto& r : results) print_summary(r.summary);
  return kExitOk;
}

int cmd_check(const GlobalFlags& flags, const std::string& params_path) {
  const tds::CliConfig cfg = resolve(flags);
  const tds::ObservationDataset data = cfg.load_dataset();
  const tds::ModelParameters p = tds::read_parameters_csv(params_path);
  const tds::FeasibilityReport report = tds::feasibility(p, cfg.experiment.penalty.eps);

  for (const auto& v : report.violations) {
    std::printf("%-28s %s", v.label.c_str(), v.violation == 0.0 ? "ok" : "VIOLATED");
    if (v.violation != 0.0) std::printf("  (violation %.6e)", v.violation);
    std::printf("\n");
  }
  std::printf("feasible: %s\n", report.feasible ? "yes" : "no");
  std::printf("static_gain: %.10g\n", tds::static_gain(p));
  if (report.feasible) {
    std::printf("cost: %.10e\n", tds::cost(p, data));
  } else {
    std::printf("penalized_cost: %.10e\n",
                tds::penalized_cost(p, data, cfg.experiment.penalty.penalty_base,
                                    cfg.experiment.penalty.penalty_weight,
                                    cfg.experiment.penalty.eps));
  }
  return report.feasible ? kExitOk : kExitValidation;
}

int cmd_plotdata(const GlobalFlags& flags, const std::string& params_path) {
  const tds::CliConfig cfg = resolve(flags);
  const tds::ObservationDataset data = cfg.load_dataset();
  const tds::ModelParameters p = tds::read_parameters_csv(params_path);

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path dir(cfg.output_dir);
  const std::vector<double> omegas =
      tds::log_grid(cfg.grid.omega_min, cfg.grid.omega_max, cfg.grid.points);
  tds::write_bode_csv(tds::bode_points(p, omegas), (dir / "bode_model.csv").string());
  tds::write_nyquist_csv(tds::nyquist_points(p, omegas),
                         (dir / "nyquist_model.csv").string());

  std::vector<tds::NyquistPoint> ref;
  for (const auto& s : data.samples) ref.push_back({s.re_value, s.im_value});
  tds::write_nyquist_csv(ref, (dir / "nyquist_dataset.csv").string());
  tds::write_dataset_csv(data, (dir / "dataset.csv").string());
  std::printf("plot data written to %s\n", cfg.output_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-delay model identification via evolutionary metaheuristics"};
  app.require_subcommand(1);

  GlobalFlags run_flags, compare_flags, check_flags, plot_flags;
  std::string check_params, plot_params;

  CLI::App* run = app.add_subcommand("run", "run one algorithm and export results");
  add_global_flags(run, run_flags);
  CLI::App* compare =
      app.add_subcommand("compare", "run all four algorithms on shared seeds");
  add_global_flags(compare, compare_flags);
  CLI::App* check =
      app.add_subcommand("check", "report feasibility, gain and cost of a parameter file");
  add_global_flags(check, check_flags);
  check->add_option("params", check_params, "parameter CSV (name,value)")->required();
  CLI::App* plot = app.add_subcommand("plot-data", "export Bode/Nyquist CSV data");
  add_global_flags(plot, plot_flags);
  plot->add_option("params", plot_params, "parameter CSV (name,value)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (compare->parsed()) return cmd_compare(compare_flags);
    if (check->parsed()) return cmd_check(check_flags, check_params);
    if (plot->parsed()) return cmd_plotdata(plot_flags, plot_params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}
