#include "tds/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tds {

bool ModelParameters::all_finite() const {
  for (double v : {b0, b0_tau, tau0, tau, a2, a1, a0, a0_theta, theta}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void ObservationDataset::validate() const {
  if (samples.empty()) throw std::invalid_argument("dataset is empty");
  double prev = 0.0;
  for (const auto& s : samples) {
    if (!(s.omega > prev)) {
      throw std::invalid_argument(
          "dataset omegas must be strictly positive and increasing");
    }
    prev = s.omega;
  }
}

const ObservationDataset& reference_dataset() {
  static const ObservationDataset data = [] {
    ObservationDataset d;
    d.static_gain = 0.0322;
    d.samples = {
        {0.0002, 0.03238, -0.00284}, {0.0003, 0.03213, -0.00424},
        {0.0005, 0.03137, -0.00694}, {0.0008, 0.02962, -0.01063},
        {0.001, 0.02813, -0.01278},  {0.0012, 0.02645, -0.01465},
        {0.0015, 0.02371, -0.01692}, {0.0018, 0.02087, -0.01857},
        {0.002, 0.01899, -0.01936},  {0.003, 0.01063, -0.02054},
        {0.005, 0.00057, -0.01713},  {0.008, -0.00540, -0.01110},
        {0.01, -0.00704, -0.00795},  {0.011, -0.00757, -0.00658},
        {0.012, -0.00795, -0.00531}, {0.014, -0.00843, -0.00296},
        {0.016, -0.00860, -0.00074}, {0.018, -0.00846, 0.00147},
        {0.02, -0.00795, 0.00377},   {0.025, -0.00346, 0.00982},
    };
    return d;
  }();
  return data;
}

ObservationDataset load_dataset_csv(const std::string& path, double static_gain) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  ObservationDataset d;
  d.static_gain = static_gain;
  std::string line;
  if (!std::getline(in, line) || line.rfind("omega,re,im", 0) != 0) {
    throw std::runtime_error("dataset file missing 'omega,re,im' header: " + path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    FrequencySample s{};
    char c1 = 0, c2 = 0;
    if (!(row >> s.omega >> c1 >> s.re_value >> c2 >> s.im_value) ||
        c1 != ',' || c2 != ',') {
      throw std::runtime_error("malformed dataset row in " + path + ": " + line);
    }
    d.samples.push_back(s);
  }
  d.validate();
  return d;
}

void write_dataset_csv(const ObservationDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << "omega,re,im\n";
  char buf[128];
  for (const auto& s : data.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.omega, s.re_value,
                  s.im_value);
    out << buf;
  }
}

double FeasibilityReport::total_violation() const {
  double t = 0.0;
  for (const auto& v : violations) t += v.violation;
  return t;
}

ModelParameters complete_parameters(const FreeGenes& genes, double k) {
  ModelParameters p;
  p.b0 = genes[static_cast<int>(GeneIndex::b0)];
  p.tau0 = genes[static_cast<int>(GeneIndex::tau0)];
  p.tau = genes[static_cast<int>(GeneIndex::tau)];
  p.a2 = genes[static_cast<int>(GeneIndex::a2)];
  p.a1 = genes[static_cast<int>(GeneIndex::a1)];
  p.a0 = genes[static_cast<int>(GeneIndex::a0)];
  p.a0_theta = genes[static_cast<int>(GeneIndex::a0_theta)];
  p.theta = genes[static_cast<int>(GeneIndex::theta)];
  p.b0_tau = k * (p.a0 + p.a0_theta) - p.b0;
  return p;
}

double static_gain(const ModelParameters& p) {
  const double den = p.a0 + p.a0_theta;
  if (std::abs(den) < kDenominatorTolerance) {
    throw DegenerateDenominator("static gain: a0 + a0_theta is degenerate");
  }
  return (p.b0 + p.b0_tau) / den;
}

Complex transfer_value(const ModelParameters& p, double omega) {
  const Complex s(0.0, omega);
  const Complex num = p.b0 + p.b0_tau * std::exp(-p.tau0 * s);
  const Complex den =
      s * s * s + p.a2 * s * s + p.a1 * s + p.a0 + p.a0_theta * std::exp(-p.theta * s);
  if (std::abs(den) < kDenominatorTolerance) {
    throw DegenerateDenominator("transfer value: denominator is degenerate");
  }
  return num / den * std::exp(-p.tau * s);
}

double cost(const ModelParameters& p, const ObservationDataset& data) {
  if (data.samples.empty()) throw std::invalid_argument("cost: empty dataset");
  double total = 0.0;
  for (const auto& s : data.samples) {
    const Complex g = transfer_value(p, s.omega);
    const double dr = g.real() - s.re_value;
    const double di = g.imag() - s.im_value;
    total += dr * dr + di * di;
  }
  return total;
}

double min_denominator_magnitude(double a2, double a1, double a0) {
  // With x = omega^2 the squared magnitude is the cubic
  //   f(x) = x^3 + (a2^2 - 2 a1) x^2 + (a1^2 - 2 a0 a2) x + a0^2,
  // nonnegative on x >= 0 and increasing at infinity, so the infimum sits
  // at x = 0 or at a positive root of f'(x) = 3x^2 + 2 c2 x + c1.
  const double c2 = a2 * a2 - 2.0 * a1;
  const double c1 = a1 * a1 - 2.0 * a0 * a2;
  const auto f = [&](double x) {
    return ((x + c2) * x + c1) * x + a0 * a0;
  };
  double best = f(0.0);
  const double disc = c2 * c2 - 3.0 * c1;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    for (double x : {(-c2 - sq) / 3.0, (-c2 + sq) / 3.0}) {
      if (x > 0.0) best = std::min(best, f(x));
    }
  }
  return std::sqrt(std::max(best, 0.0));
}

namespace {

// Violation of a strict inequality value > 0, relaxed to value >= eps.
double positivity_violation(double value, double eps) {
  return std::max(0.0, eps - value);
}

}  // namespace

FeasibilityReport feasibility(const ModelParameters& p, double eps) {
  FeasibilityReport r;
  auto& v = r.violations;

  v.push_back({"delay_positivity", positivity_violation(p.tau0, eps) +
                                        positivity_violation(p.tau, eps) +
                                        positivity_violation(p.theta, eps)});
  v.push_back({"coefficient_positivity",
               positivity_violation(p.a2, eps) + positivity_violation(p.a1, eps) +
                   positivity_violation(p.a0 + p.a0_theta, eps)});
  v.push_back({"a2a1_gt_a0", positivity_violation(p.a2 * p.a1 - p.a0, eps)});
  v.push_back({"a2a1_gt_a0_plus_a0_theta",
               positivity_violation(p.a2 * p.a1 - (p.a0 + p.a0_theta), eps)});
  const double min_mag = min_denominator_magnitude(p.a2, p.a1, p.a0);
  v.push_back({"delay_term_ratio",
               std::max(0.0, std::abs(p.a0_theta) - (1.0 - eps) * min_mag)});
  v.push_back({"minimum_phase",
               positivity_violation(std::abs(p.b0) - std::abs(p.b0_tau), eps)});
  v.push_back({"nonzero", positivity_violation(std::abs(p.a0), eps) +
                              positivity_violation(std::abs(p.a0_theta), eps) +
                              positivity_violation(std::abs(p.b0_tau), eps)});

  r.feasible = std::all_of(v.begin(), v.end(),
                           [](const auto& c) { return c.violation == 0.0; });
  return r;
}

double penalized_cost(const ModelParameters& p, const ObservationDataset& data,
                      double penalty_base, double penalty_weight, double eps) {
  const FeasibilityReport r = feasibility(p, eps);
  if (r.feasible) return cost(p, data);
  return penalty_base + penalty_weight * r.total_violation();
}

std::vector<BodePoint> bode_points(const ModelParameters& p,
                                   const std::vector<double>& omegas) {
  std::vector<BodePoint> out;
  out.reserve(omegas.size());
  double prev_phase = 0.0;
  bool first = true;
  for (double w : omegas) {
    const Complex g = transfer_value(p, w);
    const double mag = std::abs(g);
    if (mag == 0.0) {
      throw std::runtime_error("bode: zero magnitude at omega " + std::to_string(w));
    }
    double phase = std::arg(g) * 180.0 / M_PI;
    if (!first) {
      // unwrap: keep consecutive differences within +-180 degrees
      while (phase - prev_phase > 180.0) phase -= 360.0;
      while (phase - prev_phase < -180.0) phase += 360.0;
    }
    out.push_back({w, 20.0 * std::log10(mag), phase});
    prev_phase = phase;
    first = false;
  }
  return out;
}

std::vector<NyquistPoint> nyquist_points(const ModelParameters& p,
                                         const std::vector<double>& omegas) {
  std::vector<NyquistPoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    const Complex g = transfer_value(p, w);
    out.push_back({g.real(), g.imag()});
  }
  return out;
}

std::vector<double> log_grid(double omega_min, double omega_max, int points) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || points < 2) {
    throw std::invalid_argument("log_grid: need 0 < omega_min < omega_max, points >= 2");
  }
  std::vector<double> out(points);
  const double l0 = std::log10(omega_min);
  const double l1 = std::log10(omega_max);
  for (int i = 0; i < points; ++i) {
    out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (points - 1));
  }
  return out;
}

}  // namespace tds
