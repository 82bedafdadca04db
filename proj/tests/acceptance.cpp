// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tds/config.hpp"
#include "tds/harness.hpp"

using namespace tds;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %d (%s): %s%s%s\n", number, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : " -- ",
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. cost against an independent brute-force complex-arithmetic oracle,
//    written without std::complex: explicit real/imaginary expansion.

double oracle_cost(const ModelParameters& p, const ObservationDataset& data) {
  double total = 0.0;
  for (const auto& s : data.samples) {
    const double w = s.omega;
    const double nr = p.b0 + p.b0_tau * std::cos(p.tau0 * w);
    const double ni = -p.b0_tau * std::sin(p.tau0 * w);
    const double dr = p.a0 - p.a2 * w * w + p.a0_theta * std::cos(p.theta * w);
    const double di = p.a1 * w - w * w * w - p.a0_theta * std::sin(p.theta * w);
    const double dd = dr * dr + di * di;
    const double qr = (nr * dr + ni * di) / dd;
    const double qi = (ni * dr - nr * di) / dd;
    const double cr = std::cos(p.tau * w), ci = -std::sin(p.tau * w);
    const double gr = qr * cr - qi * ci;
    const double gi = qr * ci + qi * cr;
    const double er = gr - s.re_value, ei = gi - s.im_value;
    total += er * er + ei * ei;
  }
  return total;
}

bool criterion_1() {
  const ObservationDataset& data = reference_dataset();
  const std::vector<ModelParameters> vectors = {
      {0.02, 0.01, 100.0, 50.0, 0.05, 0.001, 1e-5, 5e-6, 200.0},
      {1.0, 0.5, 1.0, 1.0, 3.0, 3.0, 0.5, 0.3, 1.0},
      {0.5, -0.2, 10.0, 5.0, 2.0, 1.5, 0.7, 0.4, 20.0},
  };
  double worst = 0.0;
  for (const auto& p : vectors) {
    const double got = cost(p, data);
    const double ref = oracle_cost(p, data);
    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
  }
  report(1, "model oracle equivalence", worst <= 1e-10,
         "worst relative deviation " + num(worst) + " over 3 vectors, tolerance 1e-10");
  return worst <= 1e-10;
}

// ---------------------------------------------------------------------------
// 2. static-gain closure on random in-bounds free genes.

bool criterion_2() {
  const Bounds bounds = default_tds_bounds();
  Rng rng(42);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    FreeGenes g;
    for (int j = 0; j < 8; ++j) {
      std::uniform_real_distribution<double> u(bounds.lower[j], bounds.upper[j]);
      g[j] = u(rng);
    }
    const ModelParameters p = complete_parameters(g, 0.0322);
    double dev;
    try {
      dev = std::abs(static_gain(p) - 0.0322);
    } catch (const DegenerateDenominator&) {
      // a0 + a0_theta can land arbitrarily close to zero; the coupling is
      // exact there too, but the gain is not evaluable. Redraw instead.
      --i;
      continue;
    }
    worst = std::max(worst, dev);
  }
  report(2, "static-gain closure", worst <= 1e-12,
         "worst |static_gain - 0.0322| = " + num(worst) +
             " over 1000 random genotypes, tolerance 1e-12");
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 3. analytic minimum vs a 10^6-point log-grid search over omega in
//    [1e-6, 1e3] (plus the omega = 0 boundary the infimum includes).

bool criterion_3() {
  const int points = 1000000;
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) {
    const double w = std::pow(10.0, -6.0 + 9.0 * i / (points - 1.0));
    xs[i] = w * w;
  }
  Rng rng(35);
  std::uniform_real_distribution<double> ua(1e-6, 10.0);
  std::uniform_real_distribution<double> u0(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a2 = ua(rng), a1 = ua(rng), a0 = u0(rng);
    double best = a0 * a0;
    for (const double x : xs) {
      const double t1 = a0 - a2 * x, t2 = a1 - x;
      const double f = t1 * t1 + x * t2 * t2;
      if (f < best) best = f;
    }
    const double grid = std::sqrt(best);
    const double analytic = min_denominator_magnitude(a2, a1, a0);
    worst = std::max(worst, std::abs(analytic - grid) / std::max(grid, 1e-300));
  }
  report(3, "constraint analytic-vs-grid", worst <= 1e-6,
         "worst relative deviation " + num(worst) +
             " over 1000 triples, tolerance 1e-6");
  return worst <= 1e-6;
}

// ---------------------------------------------------------------------------
// 4. desk-scale statistics reproduction. (a) is checked at the primary base
//    seed; (b) is statistical and must hold for at least 2 of 3 base seeds.

struct ExperimentOutputs {
  std::vector<AlgorithmResults> per_algorithm;  // all traces, for criterion 6
};

StatsSummary run_one(Algorithm alg, std::uint64_t base_seed,
                     ExperimentOutputs& outputs) {
  ExperimentConfig cfg;
  cfg.algorithm = alg;
  cfg.base_seed = base_seed;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  auto traces = run_experiment(cfg, reference_dataset());
  auto summary = summarize(algorithm_name(alg), traces);
  auto curve = convergence_curve(traces);
  outputs.per_algorithm.push_back(
      {algorithm_name(alg), std::move(traces), summary, std::move(curve)});
  return summary;
}

bool criterion_4(ExperimentOutputs& outputs) {
  const std::vector<std::uint64_t> base_seeds = {200, 500, 600};
  std::vector<double> genetic_avg, caste_avg, separated_avg;
  for (const auto seed : base_seeds) {
    genetic_avg.push_back(run_one(Algorithm::genetic, seed, outputs).average);
    caste_avg.push_back(run_one(Algorithm::caste, seed, outputs).average);
    separated_avg.push_back(run_one(Algorithm::separated, seed, outputs).average);
  }
  const double topsis_avg =
      run_one(Algorithm::topsis, base_seeds[0], outputs).average;

  const bool part_a = genetic_avg[0] >= 1e-8 && genetic_avg[0] <= 1e-4;
  int ordering_holds = 0;
  for (std::size_t i = 0; i < base_seeds.size(); ++i) {
    if (caste_avg[i] <= 2.0 * genetic_avg[i] &&
        separated_avg[i] <= 2.0 * genetic_avg[i])
      ++ordering_holds;
  }
  const bool part_b = ordering_holds >= 2;
  std::ostringstream detail;
  detail << "(a) genetic avg " << num(genetic_avg[0])
         << (part_a ? " in" : " outside") << " [1e-8, 1e-4]; "
         << "(b) caste/separated <= 2x genetic on " << ordering_holds
         << " of 3 base seeds (caste " << num(caste_avg[0]) << ", separated "
         << num(separated_avg[0]) << "); topsis avg " << num(topsis_avg)
         << " (informational)";
  report(4, "desk-scale statistics reproduction", part_a && part_b, detail.str());
  return part_a && part_b;
}

// ---------------------------------------------------------------------------
// 5. degenerate reductions are bit-identical to the baseline.

bool traces_equal(const RunTrace& a, const RunTrace& b) {
  if (a.best_history.size() != b.best_history.size()) return false;
  for (std::size_t i = 0; i < a.best_history.size(); ++i) {
    if (a.best_history[i].evaluation_index != b.best_history[i].evaluation_index)
      return false;
    if (a.best_history[i].best_cost_so_far != b.best_history[i].best_cost_so_far)
      return false;
  }
  return a.best_individual.genotype.genes == b.best_individual.genotype.genes &&
         a.evaluations_used == b.evaluations_used;
}

bool criterion_5() {
  const Objective objective = make_objective(reference_dataset(), {});
  const Bounds bounds = default_tds_bounds();
  bool all = true;
  for (const std::uint64_t seed : {7ull, 19ull, 123ull}) {
    EngineConfig engine;
    engine.rng_seed = seed;
    engine.evaluation_budget = 3000;
    const RunTrace baseline = run(objective, engine, bounds);

    CasteConfig one_caste;
    one_caste.number_of_castes = 1;
    all = all && traces_equal(baseline, caste_run(objective, engine, bounds, one_caste));

    TopsisConfig inert;
    inert.p = 0.0;
    all = all && traces_equal(baseline, topsis_run(objective, engine, bounds, inert));
  }
  report(5, "degenerate-reduction trace equality", all,
         "single-caste caste_run and p=0 topsis_run vs baseline, 3 seeds, "
         "bitwise trace comparison");
  return all;
}

// ---------------------------------------------------------------------------
// 6. every best-so-far trace and every convergence curve is nonincreasing.

bool criterion_6(const ExperimentOutputs& outputs) {
  int traces = 0, curves = 0;
  bool all = true;
  for (const auto& result : outputs.per_algorithm) {
    for (const auto& trace : result.traces) {
      ++traces;
      for (std::size_t i = 1; i < trace.best_history.size(); ++i)
        if (trace.best_history[i].best_cost_so_far >
            trace.best_history[i - 1].best_cost_so_far)
          all = false;
    }
    ++curves;
    for (std::size_t i = 1; i < result.curve.mean_best.size(); ++i)
      if (result.curve.mean_best[i] > result.curve.mean_best[i - 1]) all = false;
  }
  report(6, "monotonicity suite", all,
         std::to_string(traces) + " traces and " + std::to_string(curves) +
             " convergence curves checked");
  return all;
}

// ---------------------------------------------------------------------------
// 7. operator property suite.

bool criterion_7() {
  const Bounds bounds = default_tds_bounds();
  Rng rng(5);
  bool sbx_ok = true, mut_ok = true, topsis_ok = true, elitist_ok = true,
       cross_ok = true;

  // SBX with identical parents is a fixed point.
  for (int t = 0; t < 1000 && sbx_ok; ++t) {
    Vector genes(8);
    for (int j = 0; j < 8; ++j) {
      std::uniform_real_distribution<double> u(bounds.lower[j], bounds.upper[j]);
      genes[j] = u(rng);
    }
    Genotype parent{genes, &bounds};
    auto [c1, c2] = sbx_crossover(parent, parent, 0.9, 20.0, rng);
    sbx_ok = c1.genes == genes && c2.genes == genes;
  }

  // polynomial mutation keeps every gene inside the box.
  for (int t = 0; t < 100000 && mut_ok; ++t) {
    Vector genes(8);
    for (int j = 0; j < 8; ++j) {
      std::uniform_real_distribution<double> u(bounds.lower[j], bounds.upper[j]);
      genes[j] = u(rng);
    }
    const Genotype mutated = polynomial_mutation({genes, &bounds}, 1.0, 20.0, rng);
    for (int j = 0; j < 8; ++j)
      if (mutated.genes[j] < bounds.lower[j] || mutated.genes[j] > bounds.upper[j])
        mut_ok = false;
  }

  // topsis endpoint: t_best = 1, count = 1 collapses onto the best individual.
  {
    std::vector<Individual> pop;
    for (int i = 0; i < 10; ++i) {
      Vector genes(8);
      for (int j = 0; j < 8; ++j) {
        std::uniform_real_distribution<double> u(bounds.lower[j], bounds.upper[j]);
        genes[j] = u(rng);
      }
      pop.push_back({{genes, &bounds}, 10.0 + i, 0});
    }
    TopsisConfig cfg;
    cfg.t_best = 1.0;
    cfg.t_worst = 0.0;
    cfg.best_individuals_count = 1;
    cfg.worst_individuals_count = 1;
    const Genotype attract = attraction_point(pop, 1, cfg.weighting_variant);
    const Genotype repulse = repulsion_point(pop, 1, cfg.weighting_variant);
    const Individual moved = topsis_mutation(pop[5], attract, repulse, cfg);
    const Vector& best = pop[0].genotype.genes;
    for (int j = 0; j < 8; ++j) {
      const double scale = std::max(1.0, std::abs(best[j]));
      if (std::abs(moved.genotype.genes[j] - best[j]) > 1e-12 * scale)
        topsis_ok = false;
    }
  }

  // elitist assignment produces fitness-ordered caste blocks.
  {
    std::vector<Individual> pop;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 103; ++i)
      pop.push_back({{Vector::Zero(8), &bounds}, u(rng), 0});
    assign_castes(pop, CasteAssignment::elitist, 4, rng);
    for (int c = 1; c < 4 && elitist_ok; ++c) {
      double worst_upper = -1.0, best_lower = 2.0;
      for (const auto& ind : pop) {
        if (ind.caste == c) worst_upper = std::max(worst_upper, ind.cost());
        if (ind.caste == c + 1) best_lower = std::min(best_lower, ind.cost());
      }
      elitist_ok = worst_upper <= best_lower;
    }
  }

  // cross-caste selection frequency 0.05 +/- 0.01 over 1e4 draws.
  double cross_rate = 0.0;
  {
    std::vector<Individual> pop;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i)
      pop.push_back({{Vector::Zero(8), &bounds}, u(rng), 1 + i % 2});
    int cross = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
      auto [p1, p2] = select_parents_cross_caste(pop, 1, 0.05, rng);
      (void)p1;
      if (p2->caste != 1) ++cross;
    }
    cross_rate = static_cast<double>(cross) / draws;
    cross_ok = std::abs(cross_rate - 0.05) <= 0.01;
  }

  const bool all = sbx_ok && mut_ok && topsis_ok && elitist_ok && cross_ok;
  std::ostringstream detail;
  detail << "sbx fixed point " << (sbx_ok ? "ok" : "BROKEN")
         << ", mutation bound closure (1e5 samples) " << (mut_ok ? "ok" : "BROKEN")
         << ", topsis endpoint " << (topsis_ok ? "ok" : "BROKEN")
         << ", elitist block ordering " << (elitist_ok ? "ok" : "BROKEN")
         << ", cross-caste rate " << num(cross_rate) << " vs 0.05 +/- 0.01";
  report(7, "operator property suite", all, detail.str());
  return all;
}

// ---------------------------------------------------------------------------
// 8. exported dataset Nyquist rows equal the table exactly; Bode phase is
//    unwrapped with no consecutive jump over 180 degrees.

bool criterion_8(const ExperimentOutputs& outputs) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tds_acceptance_plots";
  fs::create_directories(dir);
  export_results(outputs.per_algorithm, reference_dataset(), {}, dir.string());

  bool nyquist_ok = true;
  {
    std::ifstream in(dir / "nyquist_dataset.csv");
    std::string line;
    std::getline(in, line);  // header
    std::size_t row = 0;
    const auto& samples = reference_dataset().samples;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (row >= samples.size() || comma == std::string::npos) {
        nyquist_ok = false;
        break;
      }
      const double re = std::stod(line.substr(0, comma));
      const double im = std::stod(line.substr(comma + 1));
      if (re != samples[row].re_value || im != samples[row].im_value)
        nyquist_ok = false;
      ++row;
    }
    nyquist_ok = nyquist_ok && row == samples.size();
  }

  bool phase_ok = true;
  {
    const ModelParameters p = {0.02, 0.01, 100.0, 50.0, 0.05,
                               0.001, 1e-5, 5e-6, 200.0};
    const auto grid = log_grid(kDefaultGridMin, kDefaultGridMax, kDefaultGridPoints);
    const auto bode = bode_points(p, grid);
    for (std::size_t i = 1; i < bode.size(); ++i)
      if (std::abs(bode[i].phase_deg - bode[i - 1].phase_deg) > 180.0)
        phase_ok = false;
  }

  const bool all = nyquist_ok && phase_ok;
  report(8, "plot-data fidelity", all,
         std::string("dataset Nyquist rows ") +
             (nyquist_ok ? "exact" : "MISMATCHED") + ", Bode phase jumps " +
             (phase_ok ? "<= 180 deg" : "EXCEED 180 deg"));
  return all;
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  ExperimentOutputs outputs;
  criterion_4(outputs);
  criterion_5();
  criterion_6(outputs);
  criterion_7();
  criterion_8(outputs);
  if (g_failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", g_failures);
  return 1;
}
