#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace tds {

using Rng = std::mt19937_64;
using Vector = Eigen::VectorXd;

/// Per-gene box bounds shared by a whole run.
struct Bounds {
  Vector lower;
  Vector upper;

  int size() const { return static_cast<int>(lower.size()); }
  void validate() const;  // throws on lower > upper or size mismatch
  Vector clamp(const Vector& genes) const;
};

/// Default search box for the 8 free genes of the time-delay problem.
/// Order: b0, tau0, tau, a2, a1, a0, a0_theta, theta.
Bounds default_tds_bounds(double eps = 1e-9);

struct Genotype {
  Vector genes;
  const Bounds* bounds = nullptr;  // non-owning; shared across a run
};

struct Individual {
  Genotype genotype;
  std::optional<double> fitness;  // cost, lower is better
  int caste = 0;                  // 0 = untagged; castes number from 1

  double cost() const { return *fitness; }
};

struct EngineConfig {
  int population_size = 100;
  int offspring_size = 20;
  double crossover_probability = 0.9;
  double crossover_distribution_index = 20.0;
  double mutation_probability = 1.0 / 8.0;
  double mutation_distribution_index = 20.0;
  int evaluation_budget = 15000;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct TracePoint {
  int evaluation_index;  // 1-based
  double best_cost_so_far;
};

struct RunTrace {
  std::vector<TracePoint> best_history;
  Individual best_individual;
  int evaluations_used = 0;
  std::uint64_t seed = 0;
};

using Objective = std::function<double(const Vector&)>;

/// Counts evaluations and records the best-so-far series; owned by one run.
class Evaluator {
 public:
  Evaluator(Objective objective, int budget);

  void evaluate(Individual& ind);
  int used() const { return used_; }
  int remaining() const { return budget_ - used_; }
  bool exhausted() const { return used_ >= budget_; }
  RunTrace finish(std::uint64_t seed) &&;

 private:
  Objective objective_;
  int budget_;
  int used_ = 0;
  double best_cost_ = 0.0;
  Individual best_;
  std::vector<TracePoint> history_;
};

std::vector<Individual> init_population(const EngineConfig& config,
                                        const Bounds& bounds, Rng& rng);

/// Draws two distinct individuals uniformly and returns the cheaper one
/// (first-drawn wins ties). A one-element population is returned directly
/// without consuming randomness.
const Individual& binary_tournament(const std::vector<Individual>& population,
                                    Rng& rng);

/// Tournament over population[indices]; same contract as binary_tournament.
const Individual& binary_tournament(const std::vector<Individual>& population,
                                    const std::vector<int>& indices, Rng& rng);

/// Bounded simulated binary crossover (Deb), whole-operator probability,
/// per-gene recombination with spread index eta; children clipped to bounds.
std::pair<Genotype, Genotype> sbx_crossover(const Genotype& p1, const Genotype& p2,
                                            double probability, double eta,
                                            Rng& rng);

/// Bounded polynomial mutation: each gene perturbed independently with the
/// given probability, distribution index eta; result clipped to bounds.
Genotype polynomial_mutation(const Genotype& g, double probability, double eta,
                             Rng& rng);

/// (mu+lambda) truncation: the population_size best of population+offspring,
/// stable order among ties.
std::vector<Individual> replace(const std::vector<Individual>& population,
                                const std::vector<Individual>& offspring);

/// Hook points for the socio-cognitive variants. All optional; with every
/// hook empty, run() is the baseline generational GA.
struct RunHooks {
  /// Called once after the initial population is evaluated.
  std::function<void(std::vector<Individual>&, Rng&)> post_init;
  /// Replaces the default variation: must produce exactly `count` children
  /// (unevaluated). Default: repeated tournament + SBX + mutation.
  std::function<std::vector<Individual>(const std::vector<Individual>&, int count,
                                        Rng&)>
      variation;
  /// Called after replacement; may mutate individuals and re-evaluate them
  /// through the evaluator (consuming budget).
  std::function<void(std::vector<Individual>&, Rng&, Evaluator&)> post_replacement;
};

/// Generational loop: tournament selection, SBX + polynomial mutation,
/// (mu+lambda) replacement, until the evaluation budget is exhausted. The
/// final generation is truncated to fit the budget exactly. One PRNG stream,
/// consumed in fixed order: selection, crossover, mutation, hooks.
RunTrace run(const Objective& objective, const EngineConfig& config,
             const Bounds& bounds, const RunHooks& hooks = {});

}  // namespace tds
