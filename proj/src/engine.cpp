#include "tds/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tds {

namespace {
constexpr double kGeneEps = 1e-14;  // SBX "parents coincide" threshold

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}
}  // namespace

void Bounds::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("bounds: size mismatch or empty");
  }
  for (int i = 0; i < size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw std::invalid_argument("bounds: lower > upper at gene " +
                                  std::to_string(i));
    }
  }
}

Vector Bounds::clamp(const Vector& genes) const {
  return genes.cwiseMax(lower).cwiseMin(upper);
}

Bounds default_tds_bounds(double eps) {
  Bounds b;
  b.lower.resize(8);
  b.upper.resize(8);
  // order: b0, tau0, tau, a2, a1, a0, a0_theta, theta
  b.lower << -1.0, eps, eps, eps, eps, -1.0, -1.0, eps;
  b.upper << 1.0, 1000.0, 1000.0, 10.0, 10.0, 1.0, 1.0, 1000.0;
  return b;
}

void EngineConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (offspring_size < 2 || offspring_size % 2 != 0) {
    throw std::invalid_argument("offspring_size must be even and >= 2");
  }
  for (double p : {crossover_probability, mutation_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probabilities must lie in [0,1]");
    }
  }
  if (evaluation_budget < population_size) {
    throw std::invalid_argument("evaluation_budget must cover the initial population");
  }
}

Evaluator::Evaluator(Objective objective, int budget)
    : objective_(std::move(objective)), budget_(budget) {
  history_.reserve(budget);
}

void Evaluator::evaluate(Individual& ind) {
  if (used_ >= budget_) throw std::logic_error("evaluation budget exceeded");
  const double c = objective_(ind.genotype.genes);
  ind.fitness = c;
  ++used_;
  if (used_ == 1 || c < best_cost_) {
    best_cost_ = c;
    best_ = ind;
  }
  history_.push_back({used_, best_cost_});
}

RunTrace Evaluator::finish(std::uint64_t seed) && {
  RunTrace t;
  t.best_history = std::move(history_);
  t.best_individual = std::move(best_);
  t.evaluations_used = used_;
  t.seed = seed;
  return t;
}

std::vector<Individual> init_population(const EngineConfig& config,
                                        const Bounds& bounds, Rng& rng) {
  bounds.validate();
  std::vector<Individual> pop(config.population_size);
  for (auto& ind : pop) {
    ind.genotype.bounds = &bounds;
    ind.genotype.genes.resize(bounds.size());
    for (int i = 0; i < bounds.size(); ++i) {
      ind.genotype.genes[i] = std::uniform_real_distribution<double>(
          bounds.lower[i], bounds.upper[i])(rng);
    }
  }
  return pop;
}

const Individual& binary_tournament(const std::vector<Individual>& population,
                                    const std::vector<int>& indices, Rng& rng) {
  const int n = static_cast<int>(indices.size());
  if (n == 0) throw std::invalid_argument("tournament over empty selection");
  if (n == 1) return population[indices[0]];
  const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
  int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
  if (j >= i) ++j;
  const Individual& a = population[indices[i]];
  const Individual& b = population[indices[j]];
  if (!a.fitness || !b.fitness) {
    throw std::logic_error("tournament over unevaluated individuals");
  }
  return b.cost() < a.cost() ? b : a;
}

const Individual& binary_tournament(const std::vector<Individual>& population,
                                    Rng& rng) {
  std::vector<int> all(population.size());
  std::iota(all.begin(), all.end(), 0);
  return binary_tournament(population, all, rng);
}

namespace {

// One half of the bounded SBX spread computation (Deb & Agrawal).
double sbx_child_value(double y1, double y2, double edge_gap, double u,
                       double eta, bool upper_side) {
  const double beta = 1.0 + 2.0 * edge_gap / (y2 - y1);
  const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
  double betaq;
  if (u <= 1.0 / alpha) {
    betaq = std::pow(u * alpha, 1.0 / (eta + 1.0));
  } else {
    betaq = std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
  }
  return upper_side ? 0.5 * ((y1 + y2) + betaq * (y2 - y1))
                    : 0.5 * ((y1 + y2) - betaq * (y2 - y1));
}

}  // namespace

std::pair<Genotype, Genotype> sbx_crossover(const Genotype& p1, const Genotype& p2,
                                            double probability, double eta,
                                            Rng& rng) {
  if (p1.genes.size() != p2.genes.size() || p1.bounds != p2.bounds) {
    throw std::invalid_argument("sbx: parent genotype mismatch");
  }
  Genotype c1 = p1;
  Genotype c2 = p2;
  if (uniform01(rng) > probability) return {c1, c2};

  const Bounds& b = *p1.bounds;
  for (int i = 0; i < p1.genes.size(); ++i) {
    const double x1 = p1.genes[i];
    const double x2 = p2.genes[i];
    if (uniform01(rng) > 0.5) continue;
    if (std::abs(x1 - x2) <= kGeneEps) continue;
    const double y1 = std::min(x1, x2);
    const double y2 = std::max(x1, x2);
    const double u = uniform01(rng);
    double lo = sbx_child_value(y1, y2, y1 - b.lower[i], u, eta, false);
    double hi = sbx_child_value(y1, y2, b.upper[i] - y2, u, eta, true);
    lo = std::clamp(lo, b.lower[i], b.upper[i]);
    hi = std::clamp(hi, b.lower[i], b.upper[i]);
    if (uniform01(rng) <= 0.5) std::swap(lo, hi);
    c1.genes[i] = lo;
    c2.genes[i] = hi;
  }
  return {c1, c2};
}

Genotype polynomial_mutation(const Genotype& g, double probability, double eta,
                             Rng& rng) {
  Genotype out = g;
  const Bounds& b = *g.bounds;
  for (int i = 0; i < out.genes.size(); ++i) {
    if (uniform01(rng) > probability) continue;
    const double yl = b.lower[i];
    const double yu = b.upper[i];
    if (yl == yu) {
      out.genes[i] = yl;
      continue;
    }
    double y = out.genes[i];
    const double delta1 = (y - yl) / (yu - yl);
    const double delta2 = (yu - y) / (yu - yl);
    const double rnd = uniform01(rng);
    const double mut_pow = 1.0 / (eta + 1.0);
    double deltaq;
    if (rnd <= 0.5) {
      const double xy = 1.0 - delta1;
      const double val = 2.0 * rnd + (1.0 - 2.0 * rnd) * std::pow(xy, eta + 1.0);
      deltaq = std::pow(val, mut_pow) - 1.0;
    } else {
      const double xy = 1.0 - delta2;
      const double val =
          2.0 * (1.0 - rnd) + 2.0 * (rnd - 0.5) * std::pow(xy, eta + 1.0);
      deltaq = 1.0 - std::pow(val, mut_pow);
    }
    y += deltaq * (yu - yl);
    out.genes[i] = std::clamp(y, yl, yu);
  }
  return out;
}

std::vector<Individual> replace(const std::vector<Individual>& population,
                                const std::vector<Individual>& offspring) {
  std::vector<Individual> merged;
  merged.reserve(population.size() + offspring.size());
  merged.insert(merged.end(), population.begin(), population.end());
  merged.insert(merged.end(), offspring.begin(), offspring.end());
  for (const auto& ind : merged) {
    if (!ind.fitness) throw std::logic_error("replace: unevaluated individual");
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.cost() < b.cost();
                   });
  merged.resize(population.size());
  return merged;
}

namespace {

std::vector<Individual> default_variation(const std::vector<Individual>& pop,
                                          int count, const EngineConfig& cfg,
                                          Rng& rng) {
  std::vector<Individual> children;
  children.reserve(count);
  while (static_cast<int>(children.size()) < count) {
    const Individual& p1 = binary_tournament(pop, rng);
    const Individual& p2 = binary_tournament(pop, rng);
    auto [g1, g2] = sbx_crossover(p1.genotype, p2.genotype,
                                  cfg.crossover_probability,
                                  cfg.crossover_distribution_index, rng);
    for (Genotype* g : {&g1, &g2}) {
      if (static_cast<int>(children.size()) >= count) break;
      Individual child;
      child.genotype = polynomial_mutation(*g, cfg.mutation_probability,
                                           cfg.mutation_distribution_index, rng);
      children.push_back(std::move(child));
    }
  }
  return children;
}

}  // namespace

RunTrace run(const Objective& objective, const EngineConfig& config,
             const Bounds& bounds, const RunHooks& hooks) {
  config.validate();
  Rng rng(config.rng_seed);
  Evaluator eval(objective, config.evaluation_budget);

  std::vector<Individual> pop = init_population(config, bounds, rng);
  for (auto& ind : pop) eval.evaluate(ind);
  if (hooks.post_init) hooks.post_init(pop, rng);

  while (!eval.exhausted()) {
    const int count = std::min(config.offspring_size, eval.remaining());
    std::vector<Individual> offspring =
        hooks.variation ? hooks.variation(pop, count, rng)
                        : default_variation(pop, count, config, rng);
    for (auto& child : offspring) eval.evaluate(child);
    pop = replace(pop, offspring);
    if (hooks.post_replacement && !eval.exhausted()) {
      hooks.post_replacement(pop, rng, eval);
    }
  }
  return std::move(eval).finish(config.rng_seed);
}

}  // namespace tds
