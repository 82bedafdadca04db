#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tds {

using Complex = std::complex<double>;

/// The nine real parameters of the time-delay transfer function
///
///   G(s) = (b0 + b0_tau * exp(-tau0 s))
///          / (s^3 + a2 s^2 + a1 s + a0 + a0_theta * exp(-theta s))
///          * exp(-tau s)
///
/// The struct itself does not enforce the stability/feasibility constraint
/// system; infeasible vectors stay representable so penalty terms can be
/// computed for them.
struct ModelParameters {
  double b0 = 0.0;
  double b0_tau = 0.0;
  double tau0 = 0.0;
  double tau = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double a0_theta = 0.0;
  double theta = 0.0;

  bool all_finite() const;
};

/// The 8 free genes; b0_tau is derived from the static-gain coupling.
/// Order: b0, tau0, tau, a2, a1, a0, a0_theta, theta.
using FreeGenes = Eigen::Matrix<double, 8, 1>;

enum class GeneIndex : int {
  b0 = 0,
  tau0 = 1,
  tau = 2,
  a2 = 3,
  a1 = 4,
  a0 = 5,
  a0_theta = 6,
  theta = 7
};

struct FrequencySample {
  double omega;     // rad/s, strictly positive
  double re_value;  // A_i
  double im_value;  // B_i
};

/// Frequency-response observations plus the known static gain k.
struct ObservationDataset {
  std::vector<FrequencySample> samples;
  double static_gain = 0.0;

  void validate() const;  // throws std::invalid_argument on bad data
};

/// The embedded 20-row observation table, static gain k = 0.0322.
const ObservationDataset& reference_dataset();

ObservationDataset load_dataset_csv(const std::string& path, double static_gain);
void write_dataset_csv(const ObservationDataset& data, const std::string& path);

/// One entry per constraint group; violation 0 means satisfied.
struct ConstraintViolation {
  std::string label;
  double violation;  // >= 0, continuous in the parameters
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<ConstraintViolation> violations;

  double total_violation() const;
};

struct DegenerateDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultEps = 1e-9;
inline constexpr double kDenominatorTolerance = 1e-300;
inline constexpr double kDefaultPenaltyBase = 1e6;
inline constexpr double kDefaultPenaltyWeight = 1.0;

/// Completes the free genes to the full 9-vector using the static-gain
/// coupling b0_tau = k*(a0 + a0_theta) - b0.
ModelParameters complete_parameters(const FreeGenes& genes, double k);

/// (b0 + b0_tau) / (a0 + a0_theta); throws DegenerateDenominator when the
/// denominator magnitude is below tolerance.
double static_gain(const ModelParameters& p);

/// Evaluates G(j*omega) in complex arithmetic.
Complex transfer_value(const ModelParameters& p, double omega);

/// Least-squares cost against the dataset:
///   sum_i (Re G(j w_i) - A_i)^2 + (Im G(j w_i) - B_i)^2
double cost(const ModelParameters& p, const ObservationDataset& data);

/// inf over omega >= 0 of sqrt((a0 - a2 w^2)^2 + w^2 (a1 - w^2)^2),
/// computed from the critical points of the cubic in x = w^2.
double min_denominator_magnitude(double a2, double a1, double a0);

/// Checks every constraint group with strict inequalities relaxed by eps.
FeasibilityReport feasibility(const ModelParameters& p, double eps = kDefaultEps);

/// cost(p) when feasible; penalty_base + penalty_weight * total violation
/// otherwise (the cost is not evaluated for infeasible points).
double penalized_cost(const ModelParameters& p, const ObservationDataset& data,
                      double penalty_base = kDefaultPenaltyBase,
                      double penalty_weight = kDefaultPenaltyWeight,
                      double eps = kDefaultEps);

struct BodePoint {
  double omega;
  double magnitude_db;
  double phase_deg;  // unwrapped along the grid
};

struct NyquistPoint {
  double re;
  double im;
};

std::vector<BodePoint> bode_points(const ModelParameters& p,
                                   const std::vector<double>& omegas);
std::vector<NyquistPoint> nyquist_points(const ModelParameters& p,
                                         const std::vector<double>& omegas);

/// Log-spaced frequency grid, endpoints included.
std::vector<double> log_grid(double omega_min, double omega_max, int points);

inline constexpr double kDefaultGridMin = 1e-4;
inline constexpr double kDefaultGridMax = 1e-1;
inline constexpr int kDefaultGridPoints = 500;

}  // namespace tds
