#include "tds/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <atomic>
#include <thread>

namespace tds {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::genetic: return "genetic";
    case Algorithm::caste: return "caste";
    case Algorithm::separated: return "separated";
    case Algorithm::topsis: return "topsis";
  }
  throw std::logic_error("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "genetic") return Algorithm::genetic;
  if (name == "caste") return Algorithm::caste;
  if (name == "separated") return Algorithm::separated;
  if (name == "topsis") return Algorithm::topsis;
  throw std::invalid_argument("unknown algorithm: " + name +
                              " (expected genetic|caste|separated|topsis)");
}

void ExperimentConfig::validate() const {
  engine.validate();
  bounds.validate();
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  switch (algorithm) {
    case Algorithm::caste: caste.validate(engine); break;
    case Algorithm::separated: separated.validate(engine); break;
    case Algorithm::topsis: topsis.validate(engine); break;
    case Algorithm::genetic: break;
  }
}

Objective make_objective(const ObservationDataset& data, const PenaltySettings& ps) {
  return [data, ps](const Vector& genes) {
    FreeGenes g = genes.head<8>();
    const ModelParameters p = complete_parameters(g, data.static_gain);
    return penalized_cost(p, data, ps.penalty_base, ps.penalty_weight, ps.eps);
  };
}

namespace {

RunTrace run_one(const ExperimentConfig& cfg, const Objective& objective,
                 std::uint64_t seed) {
  EngineConfig engine = cfg.engine;
  engine.rng_seed = seed;
  switch (cfg.algorithm) {
    case Algorithm::genetic:
      return run(objective, engine, cfg.bounds);
    case Algorithm::caste:
      return caste_run(objective, engine, cfg.bounds, cfg.caste);
    case Algorithm::separated:
      return separated_run(objective, engine, cfg.bounds, cfg.separated);
    case Algorithm::topsis:
      return topsis_run(objective, engine, cfg.bounds, cfg.topsis);
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace

std::vector<RunTrace> run_experiment(const ExperimentConfig& config,
                                     const ObservationDataset& data) {
  config.validate();
  data.validate();
  const Objective objective = make_objective(data, config.penalty);
  std::vector<RunTrace> traces(config.repetitions);

  if (config.jobs <= 1) {
    for (int i = 0; i < config.repetitions; ++i) {
      traces[i] = run_one(config, objective, config.base_seed + i);
    }
    return traces;
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < config.repetitions; i = next.fetch_add(1)) {
      traces[i] = run_one(config, objective, config.base_seed + i);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min(config.jobs, config.repetitions);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return traces;
}

StatsSummary summarize(const std::string& algorithm,
                       const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("summarize: no traces");
  StatsSummary s;
  s.algorithm = algorithm;
  double sum = 0.0;
  s.minimum = traces[0].best_individual.cost();
  for (const auto& t : traces) {
    const double c = t.best_individual.cost();
    sum += c;
    s.minimum = std::min(s.minimum, c);
  }
  s.average = sum / traces.size();
  double var = 0.0;
  for (const auto& t : traces) {
    const double d = t.best_individual.cost() - s.average;
    var += d * d;
  }
  s.std_dev = std::sqrt(var / traces.size());
  return s;
}

ConvergenceCurve convergence_curve(const std::vector<RunTrace>& traces,
                                   int grid_stride) {
  if (traces.empty()) throw std::invalid_argument("convergence_curve: no traces");
  if (grid_stride < 1) throw std::invalid_argument("grid_stride must be >= 1");
  const int budget = traces[0].evaluations_used;
  for (const auto& t : traces) {
    if (t.evaluations_used != budget) {
      throw std::invalid_argument("traces must share a budget");
    }
  }
  ConvergenceCurve c;
  for (int e = grid_stride; e <= budget; e += grid_stride) {
    double sum = 0.0;
    for (const auto& t : traces) sum += t.best_history[e - 1].best_cost_so_far;
    c.evaluations.push_back(e);
    c.mean_best.push_back(sum / traces.size());
  }
  return c;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

void write_parameters_csv(const ModelParameters& p, const std::string& path) {
  auto out = open_out(path);
  out << "name,value\n";
  out << "b0," << fmt(p.b0) << "\n";
  out << "b0_tau," << fmt(p.b0_tau) << "\n";
  out << "tau0," << fmt(p.tau0) << "\n";
  out << "tau," << fmt(p.tau) << "\n";
  out << "a2," << fmt(p.a2) << "\n";
  out << "a1," << fmt(p.a1) << "\n";
  out << "a0," << fmt(p.a0) << "\n";
  out << "a0_theta," << fmt(p.a0_theta) << "\n";
  out << "theta," << fmt(p.theta) << "\n";
}

ModelParameters read_parameters_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file: " + path);
  std::map<std::string, double> values;
  std::string line;
  std::getline(in, line);  // header (optional)
  auto parse = [&](const std::string& row) {
    const auto comma = row.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed parameter row: " + row);
    }
    values[row.substr(0, comma)] = std::stod(row.substr(comma + 1));
  };
  if (line != "name,value" && !line.empty()) parse(line);
  while (std::getline(in, line)) {
    if (!line.empty()) parse(line);
  }
  ModelParameters p;
  const std::vector<std::pair<std::string, double*>> fields = {
      {"b0", &p.b0},   {"b0_tau", &p.b0_tau}, {"tau0", &p.tau0},
      {"tau", &p.tau}, {"a2", &p.a2},         {"a1", &p.a1},
      {"a0", &p.a0},   {"a0_theta", &p.a0_theta}, {"theta", &p.theta}};
  for (const auto& [name, slot] : fields) {
    auto it = values.find(name);
    if (it == values.end()) {
      throw std::runtime_error("parameter file missing field: " + name);
    }
    *slot = it->second;
    values.erase(it);
  }
  if (!values.empty()) {
    throw std::runtime_error("parameter file has unknown field: " +
                             values.begin()->first);
  }
  return p;
}

void write_bode_csv(const std::vector<BodePoint>& points, const std::string& path) {
  auto out = open_out(path);
  out << "omega,mag_db,phase_deg\n";
  for (const auto& p : points) {
    out << fmt(p.omega) << ',' << fmt(p.magnitude_db) << ',' << fmt(p.phase_deg)
        << "\n";
  }
}

void write_nyquist_csv(const std::vector<NyquistPoint>& points,
                       const std::string& path) {
  auto out = open_out(path);
  out << "re,im\n";
  for (const auto& p : points) out << fmt(p.re) << ',' << fmt(p.im) << "\n";
}

void export_results(const std::vector<AlgorithmResults>& results,
                    const ObservationDataset& data, const PlotGrid& grid,
                    const std::string& directory) {
  if (results.empty()) throw std::invalid_argument("export_results: nothing to export");
  for (const auto& r : results) {
    if (r.traces.empty()) throw std::invalid_argument("export_results: empty trace list");
  }
  const std::filesystem::path dir(directory);
  std::filesystem::create_directories(dir);

  {
    auto out = open_out(dir / "summary.csv");
    out << "algorithm,average,minimum,std\n";
    for (const auto& r : results) {
      out << r.summary.algorithm << ',' << fmt(r.summary.average) << ','
          << fmt(r.summary.minimum) << ',' << fmt(r.summary.std_dev) << "\n";
    }
  }
  {
    auto out = open_out(dir / "finals.csv");
    out << "algorithm,seed,final_cost\n";
    for (const auto& r : results) {
      for (const auto& t : r.traces) {
        out << r.algorithm << ',' << t.seed << ','
            << fmt(t.best_individual.cost()) << "\n";
      }
    }
  }

  const std::vector<double> omegas = log_grid(grid.omega_min, grid.omega_max, grid.points);
  for (const auto& r : results) {
    {
      auto out = open_out(dir / ("convergence_" + r.algorithm + ".csv"));
      out << "evaluation,mean_best\n";
      for (size_t i = 0; i < r.curve.evaluations.size(); ++i) {
        out << r.curve.evaluations[i] << ',' << fmt(r.curve.mean_best[i]) << "\n";
      }
    }
    const Individual* best = &r.traces[0].best_individual;
    for (const auto& t : r.traces) {
      if (t.best_individual.cost() < best->cost()) best = &t.best_individual;
    }
    FreeGenes g = best->genotype.genes.head<8>();
    const ModelParameters p = complete_parameters(g, data.static_gain);
    write_parameters_csv(p, (dir / ("best_parameters_" + r.algorithm + ".csv")).string());
    write_bode_csv(bode_points(p, omegas), (dir / ("bode_" + r.algorithm + ".csv")).string());
    write_nyquist_csv(nyquist_points(p, omegas),
                      (dir / ("nyquist_" + r.algorithm + ".csv")).string());
  }

  // dataset reference curves from the observation table
  {
    std::vector<NyquistPoint> ref;
    std::vector<BodePoint> bref;
    double prev_phase = 0.0;
    bool first = true;
    for (const auto& s : data.samples) {
      ref.push_back({s.re_value, s.im_value});
      const double mag = std::hypot(s.re_value, s.im_value);
      double phase = std::atan2(s.im_value, s.re_value) * 180.0 / M_PI;
      if (!first) {
        while (phase - prev_phase > 180.0) phase -= 360.0;
        while (phase - prev_phase < -180.0) phase += 360.0;
      }
      bref.push_back({s.omega, 20.0 * std::log10(mag), phase});
      prev_phase = phase;
      first = false;
    }
    write_nyquist_csv(ref, (dir / "nyquist_dataset.csv").string());
    write_bode_csv(bref, (dir / "bode_dataset.csv").string());
  }
}

}  // namespace tds
