#include "tds/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tds {

ObservationDataset CliConfig::load_dataset() const {
  if (dataset_path.empty()) return reference_dataset();
  return load_dataset_csv(dataset_path, dataset_static_gain);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v + "'");
  }
}

std::string weighting_name(TopsisWeighting w) {
  switch (w) {
    case TopsisWeighting::uniform: return "uniform";
    case TopsisWeighting::fitness_proportional: return "fitness_proportional";
    case TopsisWeighting::linear_rank: return "linear_rank";
    case TopsisWeighting::exponential_rank: return "exponential_rank";
  }
  throw std::logic_error("unknown weighting");
}

TopsisWeighting weighting_from_name(const std::string& v) {
  if (v == "uniform") return TopsisWeighting::uniform;
  if (v == "fitness_proportional") return TopsisWeighting::fitness_proportional;
  if (v == "linear_rank") return TopsisWeighting::linear_rank;
  if (v == "exponential_rank") return TopsisWeighting::exponential_rank;
  throw std::invalid_argument("unknown weighting_variant: " + v);
}

const char* const kGeneNames[8] = {"b0", "tau0", "tau", "a2",
                                   "a1", "a0", "a0_theta", "theta"};

using Setter = std::function<void(CliConfig&, const std::string&, const std::string&)>;

// One setter per accepted "section.key"; anything else is an unknown key.
const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["experiment.algorithm"] = [](CliConfig& c, const std::string&, const std::string& v) {
      c.experiment.algorithm = algorithm_from_name(v);
    };
    t["experiment.repetitions"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.repetitions = to_int(k, v);
    };
    t["experiment.base_seed"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.base_seed = static_cast<std::uint64_t>(std::stoull(v));
    };
    t["experiment.jobs"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.jobs = to_int(k, v);
    };

    t["engine.population_size"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.population_size = to_int(k, v);
    };
    t["engine.offspring_size"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.offspring_size = to_int(k, v);
    };
    t["engine.crossover_probability"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.crossover_probability = to_double(k, v);
    };
    t["engine.crossover_distribution_index"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.crossover_distribution_index = to_double(k, v);
    };
    t["engine.mutation_probability"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.mutation_probability = to_double(k, v);
    };
    t["engine.mutation_distribution_index"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.mutation_distribution_index = to_double(k, v);
    };
    t["engine.evaluation_budget"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.engine.evaluation_budget = to_int(k, v);
    };

    t["model.eps"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.penalty.eps = to_double(k, v);
    };
    t["model.penalty_base"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.penalty.penalty_base = to_double(k, v);
    };
    t["model.penalty_weight"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.penalty.penalty_weight = to_double(k, v);
    };
    t["model.dataset"] = [](CliConfig& c, const std::string&, const std::string& v) {
      c.dataset_path = v;
    };
    t["model.static_gain"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.dataset_static_gain = to_double(k, v);
    };
    t["model.grid_min"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.grid.omega_min = to_double(k, v);
    };
    t["model.grid_max"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.grid.omega_max = to_double(k, v);
    };
    t["model.grid_points"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.grid.points = to_int(k, v);
    };

    for (int i = 0; i < 8; ++i) {
      t[std::string("bounds.") + kGeneNames[i] + "_min"] =
          [i](CliConfig& c, const std::string& k, const std::string& v) {
            c.experiment.bounds.lower[i] = to_double(k, v);
          };
      t[std::string("bounds.") + kGeneNames[i] + "_max"] =
          [i](CliConfig& c, const std::string& k, const std::string& v) {
            c.experiment.bounds.upper[i] = to_double(k, v);
          };
    }

    t["caste.number_of_castes"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.caste.number_of_castes = to_int(k, v);
    };
    t["caste.chance_for_non_caste_parents"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.caste.chance_for_non_caste_parents = to_double(k, v);
    };
    t["caste.assignment_mode"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      if (v == "random") c.experiment.caste.assignment_mode = CasteAssignment::random;
      else if (v == "elitist") c.experiment.caste.assignment_mode = CasteAssignment::elitist;
      else throw std::invalid_argument("config key '" + k + "': expected random|elitist");
    };

    t["separated.number_of_castes"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.separated.number_of_castes = to_int(k, v);
    };
    t["separated.assign_castes_interval"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.separated.assign_castes_interval = to_int(k, v);
    };
    t["separated.learn_from_better_caste_probability"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.separated.learn_from_better_caste_probability = to_double(k, v);
    };
    t["separated.learn_from_variable"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.separated.learn_from_variable = to_double(k, v);
    };

    t["topsis.p"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.topsis.p = to_double(k, v);
    };
    t["topsis.t_best"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.topsis.t_best = to_double(k, v);
    };
    t["topsis.t_worst"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.topsis.t_worst = to_double(k, v);
    };
    t["topsis.best_individuals_count"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.topsis.best_individuals_count = to_int(k, v);
    };
    t["topsis.worst_individuals_count"] = [](CliConfig& c, const std::string& k, const std::string& v) {
      c.experiment.topsis.worst_individuals_count = to_int(k, v);
    };
    t["topsis.weighting_variant"] = [](CliConfig& c, const std::string&, const std::string& v) {
      c.experiment.topsis.weighting_variant = weighting_from_name(v);
    };

    t["output.directory"] = [](CliConfig& c, const std::string&, const std::string& v) {
      c.output_dir = v;
    };
    return t;
  }();
  return table;
}

}  // namespace

CliConfig parse_config_text(const std::string& text) {
  CliConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw std::invalid_argument("unknown config key: " + key);
    }
    it->second(cfg, key, value);
  }
  return cfg;
}

CliConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string config_to_text(const CliConfig& c) {
  std::ostringstream out;
  const auto& e = c.experiment;
  out << "[experiment]\n";
  out << "algorithm = " << algorithm_name(e.algorithm) << "\n";
  out << "repetitions = " << e.repetitions << "\n";
  out << "base_seed = " << e.base_seed << "\n";
  out << "jobs = " << e.jobs << "\n\n";

  out << "[engine]\n";
  out << "population_size = " << e.engine.population_size << "\n";
  out << "offspring_size = " << e.engine.offspring_size << "\n";
  out << "crossover_probability = " << fmt(e.engine.crossover_probability) << "\n";
  out << "crossover_distribution_index = " << fmt(e.engine.crossover_distribution_index) << "\n";
  out << "mutation_probability = " << fmt(e.engine.mutation_probability) << "\n";
  out << "mutation_distribution_index = " << fmt(e.engine.mutation_distribution_index) << "\n";
  out << "evaluation_budget = " << e.engine.evaluation_budget << "\n\n";

  out << "[model]\n";
  out << "eps = " << fmt(e.penalty.eps) << "\n";
  out << "penalty_base = " << fmt(e.penalty.penalty_base) << "\n";
  out << "penalty_weight = " << fmt(e.penalty.penalty_weight) << "\n";
  if (!c.dataset_path.empty()) out << "dataset = " << c.dataset_path << "\n";
  out << "static_gain = " << fmt(c.dataset_static_gain) << "\n";
  out << "grid_min = " << fmt(c.grid.omega_min) << "\n";
  out << "grid_max = " << fmt(c.grid.omega_max) << "\n";
  out << "grid_points = " << c.grid.points << "\n\n";

  out << "[bounds]\n";
  for (int i = 0; i < 8; ++i) {
    out << kGeneNames[i] << "_min = " << fmt(e.bounds.lower[i]) << "\n";
    out << kGeneNames[i] << "_max = " << fmt(e.bounds.upper[i]) << "\n";
  }
  out << "\n[caste]\n";
  out << "number_of_castes = " << e.caste.number_of_castes << "\n";
  out << "chance_for_non_caste_parents = " << fmt(e.caste.chance_for_non_caste_parents) << "\n";
  out << "assignment_mode = "
      << (e.caste.assignment_mode == CasteAssignment::random ? "random" : "elitist")
      << "\n\n";

  out << "[separated]\n";
  out << "number_of_castes = " << e.separated.number_of_castes << "\n";
  out << "assign_castes_interval = " << e.separated.assign_castes_interval << "\n";
  out << "learn_from_better_caste_probability = "
      << fmt(e.separated.learn_from_better_caste_probability) << "\n";
  out << "learn_from_variable = " << fmt(e.separated.learn_from_variable) << "\n\n";

  out << "[topsis]\n";
  out << "p = " << fmt(e.topsis.p) << "\n";
  out << "t_best = " << fmt(e.topsis.t_best) << "\n";
  out << "t_worst = " << fmt(e.topsis.t_worst) << "\n";
  out << "best_individuals_count = " << e.topsis.best_individuals_count << "\n";
  out << "worst_individuals_count = " << e.topsis.worst_individuals_count << "\n";
  out << "weighting_variant = " << weighting_name(e.topsis.weighting_variant) << "\n\n";

  out << "[output]\n";
  out << "directory = " << c.output_dir << "\n";
  return out.str();
}

}  // namespace tds
