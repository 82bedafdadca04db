#pragma once

#include "tds/engine.hpp"

namespace tds {

enum class CasteAssignment { random, elitist };

/// Overlapping caste algorithm: castes share one population and one global
/// replacement; parents may occasionally come from another caste.
struct CasteConfig {
  int number_of_castes = 3;
  double chance_for_non_caste_parents = 0.05;
  CasteAssignment assignment_mode = CasteAssignment::random;

  void validate(const EngineConfig& engine) const;
};

/// Separated castes: each caste evolves as an independent sub-EA; learning
/// copies genes from strictly higher castes, and caste order is refreshed on
/// an evaluation-count interval.
struct SeparatedConfig {
  int number_of_castes = 5;
  int assign_castes_interval = 3000;  // in objective evaluations
  double learn_from_better_caste_probability = 0.1;
  double learn_from_variable = 0.1;  // per-gene copy probability

  void validate(const EngineConfig& engine) const;
};

enum class TopsisWeighting { uniform, fitness_proportional, linear_rank, exponential_rank };

/// Gravity/anti-gravity mutation toward a weighted average of the best
/// individuals and away from one of the worst.
struct TopsisConfig {
  double p = 0.1;        // per-individual chance of the gravity mutation
  double t_best = 0.1;   // pull strength toward the attraction point
  double t_worst = 0.0;  // push strength away from the repulsion point
  int best_individuals_count = 10;
  int worst_individuals_count = 10;
  TopsisWeighting weighting_variant = TopsisWeighting::uniform;

  void validate(const EngineConfig& engine) const;
};

/// Tags every individual with a caste in [1, number_of_castes]; lower index
/// means higher caste. Random mode draws a uniform equal-size partition;
/// elitist mode fills caste 1 with the best block, caste 2 with the next,
/// and so on. A single caste consumes no randomness.
void assign_castes(std::vector<Individual>& population, CasteAssignment mode,
                   int number_of_castes, Rng& rng);

/// Elitist reassignment on an already-tagged population.
void reassign_caste_order(std::vector<Individual>& population, int number_of_castes);

/// Parent 1 by tournament within the caste; parent 2 likewise, except with
/// probability `chance` the second tournament runs over all other castes.
/// With a single caste the cross-caste branch is skipped entirely.
std::pair<const Individual*, const Individual*> select_parents_cross_caste(
    const std::vector<Individual>& population, int caste, double chance, Rng& rng);

/// Hereditary when parents agree; a fair coin between two different castes.
int child_caste(int parent1_caste, int parent2_caste, Rng& rng);

/// With the configured probability, copies genes (each with independent
/// probability learn_from_variable) from a uniformly chosen member of a
/// uniformly chosen strictly higher caste. Top-caste individuals are fixed
/// points and consume no randomness.
Individual learning_operator(const Individual& individual,
                             const std::vector<Individual>& population,
                             const SeparatedConfig& config, Rng& rng);

/// Gene-wise weighted average of the `count` best individuals by cost.
Genotype attraction_point(const std::vector<Individual>& population, int count,
                          TopsisWeighting variant);
/// Same over the `count` worst.
Genotype repulsion_point(const std::vector<Individual>& population, int count,
                         TopsisWeighting variant);

/// x' = clamp(x + t_best*(attract - x) - t_worst*(repulse - x)); clears fitness.
Individual topsis_mutation(const Individual& individual, const Genotype& attract,
                           const Genotype& repulse, const TopsisConfig& config);

RunTrace caste_run(const Objective& objective, const EngineConfig& engine,
                   const Bounds& bounds, const CasteConfig& config);

RunTrace separated_run(const Objective& objective, const EngineConfig& engine,
                       const Bounds& bounds, const SeparatedConfig& config);

RunTrace topsis_run(const Objective& objective, const EngineConfig& engine,
                    const Bounds& bounds, const TopsisConfig& config);

}  // namespace tds
