#pragma once

#include <string>
#include <vector>

#include "tds/engine.hpp"
#include "tds/model.hpp"
#include "tds/socio.hpp"

namespace tds {

enum class Algorithm { genetic, caste, separated, topsis };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct PenaltySettings {
  double eps = kDefaultEps;
  double penalty_base = kDefaultPenaltyBase;
  double penalty_weight = kDefaultPenaltyWeight;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::genetic;
  EngineConfig engine;
  CasteConfig caste;
  SeparatedConfig separated;
  TopsisConfig topsis;
  PenaltySettings penalty;
  Bounds bounds = default_tds_bounds();
  int repetitions = 10;
  std::uint64_t base_seed = 0;  // run i uses seed base_seed + i
  int jobs = 1;                 // concurrent repetitions

  void validate() const;
};

struct StatsSummary {
  std::string algorithm;
  double average = 0.0;
  double minimum = 0.0;
  double std_dev = 0.0;  // population standard deviation
};

struct ConvergenceCurve {
  std::vector<int> evaluations;
  std::vector<double> mean_best;
};

/// The objective the experiments optimize: penalized least-squares cost of
/// the completed parameter vector against the dataset.
Objective make_objective(const ObservationDataset& data, const PenaltySettings& ps);

/// `repetitions` independent seeded runs of the configured algorithm,
/// returned in seed order regardless of scheduling.
std::vector<RunTrace> run_experiment(const ExperimentConfig& config,
                                     const ObservationDataset& data);

StatsSummary summarize(const std::string& algorithm,
                       const std::vector<RunTrace>& traces);

ConvergenceCurve convergence_curve(const std::vector<RunTrace>& traces,
                                   int grid_stride = 100);

struct PlotGrid {
  double omega_min = kDefaultGridMin;
  double omega_max = kDefaultGridMax;
  int points = kDefaultGridPoints;
};

struct AlgorithmResults {
  std::string algorithm;
  std::vector<RunTrace> traces;
  StatsSummary summary;
  ConvergenceCurve curve;
};

/// Writes the summary, per-run finals, convergence, best-parameter, Bode and
/// Nyquist CSV files plus the dataset-derived reference curves.
void export_results(const std::vector<AlgorithmResults>& results,
                    const ObservationDataset& data, const PlotGrid& grid,
                    const std::string& directory);

void write_parameters_csv(const ModelParameters& p, const std::string& path);
ModelParameters read_parameters_csv(const std::string& path);

void write_bode_csv(const std::vector<BodePoint>& points, const std::string& path);
void write_nyquist_csv(const std::vector<NyquistPoint>& points,
                       const std::string& path);

}  // namespace tds
