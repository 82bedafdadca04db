#include "tds/socio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tds {

namespace {

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::vector<int> caste_indices(const std::vector<Individual>& population, int caste) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(population.size()); ++i) {
    if (population[i].caste == caste) out.push_back(i);
  }
  return out;
}

std::vector<int> complement_indices(const std::vector<Individual>& population,
                                    int caste) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(population.size()); ++i) {
    if (population[i].caste != caste && population[i].caste != 0) out.push_back(i);
  }
  return out;
}

std::vector<int> order_by_cost(const std::vector<Individual>& population) {
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return population[a].cost() < population[b].cost();
  });
  return order;
}

void check_caste_count(int population_size, int number_of_castes) {
  if (number_of_castes < 1 || number_of_castes > population_size) {
    throw std::invalid_argument(
        "number_of_castes must lie in [1, population_size]");
  }
}

// Near-equal caste sizes; the first (highest) castes absorb the remainder.
int caste_of_rank(int rank, int population_size, int number_of_castes) {
  const int base = population_size / number_of_castes;
  const int rem = population_size % number_of_castes;
  // the first `rem` castes have base+1 members
  if (rank < rem * (base + 1)) return rank / (base + 1) + 1;
  return (rank - rem * (base + 1)) / base + rem + 1;
}

}  // namespace

void CasteConfig::validate(const EngineConfig& engine) const {
  check_caste_count(engine.population_size, number_of_castes);
  if (!(chance_for_non_caste_parents >= 0.0 && chance_for_non_caste_parents <= 1.0)) {
    throw std::invalid_argument("chance_for_non_caste_parents must lie in [0,1]");
  }
  if (engine.offspring_size < number_of_castes) {
    throw std::invalid_argument("offspring_size must be >= number_of_castes");
  }
}

void SeparatedConfig::validate(const EngineConfig& engine) const {
  check_caste_count(engine.population_size, number_of_castes);
  if (engine.population_size / number_of_castes < 2) {
    throw std::invalid_argument("castes must hold at least 2 individuals");
  }
  if (assign_castes_interval < 1) {
    throw std::invalid_argument("assign_castes_interval must be >= 1");
  }
  for (double p : {learn_from_better_caste_probability, learn_from_variable}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("learning probabilities must lie in [0,1]");
    }
  }
}

void TopsisConfig::validate(const EngineConfig& engine) const {
  for (double v : {p, t_best, t_worst}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("topsis strengths must lie in [0,1]");
    }
  }
  for (int c : {best_individuals_count, worst_individuals_count}) {
    if (c < 1 || c > engine.population_size) {
      throw std::invalid_argument("topsis counts must lie in [1, population_size]");
    }
  }
}

void assign_castes(std::vector<Individual>& population, CasteAssignment mode,
                   int number_of_castes, Rng& rng) {
  const int n = static_cast<int>(population.size());
  check_caste_count(n, number_of_castes);
  if (number_of_castes == 1) {
    for (auto& ind : population) ind.caste = 1;
    return;
  }
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  if (mode == CasteAssignment::random) {
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    order = order_by_cost(population);
  }
  for (int r = 0; r < n; ++r) {
    population[order[r]].caste = caste_of_rank(r, n, number_of_castes);
  }
}

void reassign_caste_order(std::vector<Individual>& population, int number_of_castes) {
  Rng unused(0);
  assign_castes(population, CasteAssignment::elitist, number_of_castes, unused);
}

std::pair<const Individual*, const Individual*> select_parents_cross_caste(
    const std::vector<Individual>& population, int caste, double chance, Rng& rng) {
  const std::vector<int> own = caste_indices(population, caste);
  if (own.empty()) throw std::invalid_argument("caste is empty");
  const Individual* p1 = &binary_tournament(population, own, rng);
  const std::vector<int> other = complement_indices(population, caste);
  if (!other.empty() && uniform01(rng) < chance) {
    return {p1, &binary_tournament(population, other, rng)};
  }
  return {p1, &binary_tournament(population, own, rng)};
}

int child_caste(int parent1_caste, int parent2_caste, Rng& rng) {
  if (parent1_caste == parent2_caste) return parent1_caste;
  return uniform01(rng) < 0.5 ? parent1_caste : parent2_caste;
}

Individual learning_operator(const Individual& individual,
                             const std::vector<Individual>& population,
                             const SeparatedConfig& config, Rng& rng) {
  if (individual.caste <= 1) return individual;
  if (uniform01(rng) >= config.learn_from_better_caste_probability) return individual;
  const int teacher_caste =
      std::uniform_int_distribution<int>(1, individual.caste - 1)(rng);
  const std::vector<int> teachers = caste_indices(population, teacher_caste);
  if (teachers.empty()) return individual;
  const int pick = std::uniform_int_distribution<int>(
      0, static_cast<int>(teachers.size()) - 1)(rng);
  const Individual& teacher = population[teachers[pick]];
  Individual out = individual;
  bool changed = false;
  for (int i = 0; i < out.genotype.genes.size(); ++i) {
    if (uniform01(rng) < config.learn_from_variable) {
      out.genotype.genes[i] = teacher.genotype.genes[i];
      changed = true;
    }
  }
  if (changed) out.fitness.reset();
  return out;
}

namespace {

Genotype weighted_point(const std::vector<Individual>& population,
                        const std::vector<int>& chosen, TopsisWeighting variant,
                        bool attraction) {
  Genotype out;
  out.bounds = population[chosen[0]].genotype.bounds;
  Vector sum = Vector::Zero(population[chosen[0]].genotype.genes.size());
  double wsum = 0.0;
  for (int r = 0; r < static_cast<int>(chosen.size()); ++r) {
    const Individual& ind = population[chosen[r]];
    double w = 1.0;
    switch (variant) {
      case TopsisWeighting::uniform:
        w = 1.0;
        break;
      case TopsisWeighting::fitness_proportional:
        w = attraction ? 1.0 / (ind.cost() + 1e-12) : ind.cost();
        break;
      case TopsisWeighting::linear_rank:
        w = static_cast<double>(chosen.size() - r);
        break;
      case TopsisWeighting::exponential_rank:
        w = std::pow(2.0, -(r + 1));
        break;
    }
    sum += w * ind.genotype.genes;
    wsum += w;
  }
  out.genes = sum / wsum;
  return out;
}

}  // namespace

Genotype attraction_point(const std::vector<Individual>& population, int count,
                          TopsisWeighting variant) {
  std::vector<int> order = order_by_cost(population);
  order.resize(count);
  return weighted_point(population, order, variant, true);
}

Genotype repulsion_point(const std::vector<Individual>& population, int count,
                         TopsisWeighting variant) {
  std::vector<int> order = order_by_cost(population);
  std::reverse(order.begin(), order.end());
  order.resize(count);
  return weighted_point(population, order, variant, false);
}

Individual topsis_mutation(const Individual& individual, const Genotype& attract,
                           const Genotype& repulse, const TopsisConfig& config) {
  Individual out = individual;
  Vector x = individual.genotype.genes;
  x += config.t_best * (attract.genes - x) - config.t_worst * (repulse.genes - x);
  out.genotype.genes = individual.genotype.bounds->clamp(x);
  out.fitness.reset();
  return out;
}

namespace {

// Offspring quota per caste; the remainder goes to caste 1 (the highest).
std::vector<int> caste_quotas(int total, int number_of_castes) {
  std::vector<int> q(number_of_castes, total / number_of_castes);
  q[0] += total % number_of_castes;
  return q;
}

}  // namespace

RunTrace caste_run(const Objective& objective, const EngineConfig& engine,
                   const Bounds& bounds, const CasteConfig& config) {
  engine.validate();
  config.validate(engine);

  RunHooks hooks;
  hooks.post_init = [&](std::vector<Individual>& pop, Rng& rng) {
    assign_castes(pop, config.assignment_mode, config.number_of_castes, rng);
  };
  hooks.variation = [&](const std::vector<Individual>& pop, int count, Rng& rng) {
    std::vector<Individual> children;
    children.reserve(count);
    const std::vector<int> quotas = caste_quotas(count, config.number_of_castes);
    for (int c = 1; c <= config.number_of_castes; ++c) {
      // global replacement can empty a caste; its quota then draws from the
      // whole population
      const bool extinct = caste_indices(pop, c).empty();
      int produced = 0;
      while (produced < quotas[c - 1]) {
        auto [p1, p2] =
            extinct ? std::pair<const Individual*, const Individual*>{
                          &binary_tournament(pop, rng), &binary_tournament(pop, rng)}
                    : select_parents_cross_caste(
                          pop, c, config.chance_for_non_caste_parents, rng);
        auto [g1, g2] = sbx_crossover(p1->genotype, p2->genotype,
                                      engine.crossover_probability,
                                      engine.crossover_distribution_index, rng);
        for (Genotype* g : {&g1, &g2}) {
          if (produced >= quotas[c - 1]) break;
          Individual child;
          child.caste = child_caste(p1->caste, p2->caste, rng);
          child.genotype =
              polynomial_mutation(*g, engine.mutation_probability,
                                  engine.mutation_distribution_index, rng);
          children.push_back(std::move(child));
          ++produced;
        }
      }
    }
    return children;
  };
  return run(objective, engine, bounds, hooks);
}

RunTrace topsis_run(const Objective& objective, const EngineConfig& engine,
                    const Bounds& bounds, const TopsisConfig& config) {
  engine.validate();
  config.validate(engine);

  RunHooks hooks;
  hooks.post_replacement = [&](std::vector<Individual>& pop, Rng& rng,
                               Evaluator& eval) {
    if (config.p <= 0.0) return;  // leaves the baseline stream untouched
    const Genotype attract =
        attraction_point(pop, config.best_individuals_count, config.weighting_variant);
    const Genotype repulse =
        repulsion_point(pop, config.worst_individuals_count, config.weighting_variant);
    for (auto& ind : pop) {
      if (eval.exhausted()) break;
      if (uniform01(rng) < config.p) {
        ind = topsis_mutation(ind, attract, repulse, config);
        eval.evaluate(ind);
      }
    }
  };
  return run(objective, engine, bounds, hooks);
}

RunTrace separated_run(const Objective& objective, const EngineConfig& engine,
                       const Bounds& bounds, const SeparatedConfig& config) {
  engine.validate();
  config.validate(engine);

  Rng rng(engine.rng_seed);
  Evaluator eval(objective, engine.evaluation_budget);

  std::vector<Individual> pop = init_population(engine, bounds, rng);
  for (auto& ind : pop) eval.evaluate(ind);
  reassign_caste_order(pop, config.number_of_castes);

  int reassignments_done = eval.used() / config.assign_castes_interval;

  while (!eval.exhausted()) {
    const std::vector<int> quotas =
        caste_quotas(engine.offspring_size, config.number_of_castes);
    for (int c = 1; c <= config.number_of_castes && !eval.exhausted(); ++c) {
      const int quota = std::min(quotas[c - 1], eval.remaining());
      if (quota == 0) continue;
      const std::vector<int> own = caste_indices(pop, c);

      std::vector<Individual> children;
      children.reserve(quota);
      while (static_cast<int>(children.size()) < quota) {
        const Individual& p1 = binary_tournament(pop, own, rng);
        const Individual& p2 = binary_tournament(pop, own, rng);
        auto [g1, g2] = sbx_crossover(p1.genotype, p2.genotype,
                                      engine.crossover_probability,
                                      engine.crossover_distribution_index, rng);
        for (Genotype* g : {&g1, &g2}) {
          if (static_cast<int>(children.size()) >= quota) break;
          Individual child;
          child.caste = c;
          child.genotype =
              polynomial_mutation(*g, engine.mutation_probability,
                                  engine.mutation_distribution_index, rng);
          children.push_back(learning_operator(child, pop, config, rng));
        }
      }
      for (auto& child : children) eval.evaluate(child);

      // replacement stays inside the caste
      std::vector<Individual> members;
      for (int idx : own) members.push_back(pop[idx]);
      members.insert(members.end(), children.begin(), children.end());
      std::stable_sort(members.begin(), members.end(),
                       [](const Individual& a, const Individual& b) {
                         return a.cost() < b.cost();
                       });
      members.resize(own.size());
      for (size_t i = 0; i < own.size(); ++i) pop[own[i]] = std::move(members[i]);

      if (eval.used() / config.assign_castes_interval > reassignments_done) {
        reassignments_done = eval.used() / config.assign_castes_interval;
        reassign_caste_order(pop, config.number_of_castes);
      }
    }
  }
  return std::move(eval).finish(engine.rng_seed);
}

}  // namespace tds
