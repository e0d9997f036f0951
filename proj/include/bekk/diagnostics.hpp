#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bekk/chain_state.hpp"
#include "bekk/model.hpp"
#include "bekk/random.hpp"
#include "bekk/simulate.hpp"

namespace bekk {

enum class DistanceKind { Energy, KolmogorovSmirnov };

const char* to_string(DistanceKind kind);

struct ConvergenceOptions {
  long chains_per_start = 200;  // fewer than 100 is refused
  long horizon = 60;            // lags 1 .. horizon
  long reference_lag = 1000;    // lag at which the reference ensembles are read
  std::uint64_t seed = 0;
  int threads = 0;
  DistanceKind distance = DistanceKind::Energy;
  InnovationSpec innovation = InnovationSpec::gaussian();
  SqrtMode sqrt_mode = SqrtMode::Symmetric;
  double floor_multiplier = 2.0;  // fit stops at the first lag below multiplier * floor
  double constant_tol = 1e-12;    // relative spread under which a coordinate counts as constant
};

/// Least squares fit of log(distance) against lag.
struct DecayFit {
  bool valid = false;
  long first_lag = 0;
  long last_lag = 0;
  long points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double rate = 0.0;     // exp(slope), a proxy for the mixing rate
  double rate_lo = 0.0;  // 95% band
  double rate_hi = 0.0;
};

DecayFit fit_log_linear(const std::vector<double>& distance, double floor, long first_lag = 1);

/// A coordinate that is constant under the reference law. Energy distance
/// ignores it; its distance is tracked separately against the point mass.
struct ConstantCoordinate {
  int state_index = 0;
  double reference_value = 0.0;
  std::vector<double> ks;           // per lag, KS distance to the point mass
  std::vector<double> wasserstein;  // per lag, mean |value - reference_value|
  std::vector<long> hits;           // per lag, chains bitwise equal to the reference value
  double min_ks = 0.0;
  double min_wasserstein = 0.0;
};

struct StartCurve {
  ChainState start;
  bool on_manifold = true;
  double offset_norm = 0.0;
  std::vector<double> distance;  // lags 1 .. horizon
  DecayFit fit;
  std::vector<ConstantCoordinate> constant_coordinates;
};

struct ConvergenceReport {
  ConvergenceOptions options;
  std::string model_hash;
  long horizon = 0;
  int ambient_dim = 0;
  std::vector<int> compared_coordinates;  // state indices entering the distance
  double noise_floor = 0.0;               // distance between two reference ensembles
  std::vector<StartCurve> curves;
  std::vector<std::string> warnings;
};

/// Runs chains_per_start chains from each start and measures how fast their
/// marginals approach a reference ensemble read at reference_lag.
/// DomainError with guidance when chains_per_start < 100.
ConvergenceReport convergence_probe(const BekkModel& model, const std::vector<ChainState>& starts,
                                    const ConvergenceOptions& opts);

/// Energy distance between two samples (rows are observations).
double energy_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct OrbitOptions {
  long n_samples = 200;
  long depth = 20;
  std::uint64_t seed = 0;
  double rank_multiplier = 1e-8;  // threshold = sigma_max * multiplier * ambient_dim
};

struct OrbitDimensionReport {
  int ambient_dim = 0;
  long points = 0;
  int linear_rank = 0;
  int quadratic_features = 0;  // monomials of degree 1 and 2
  int quadratic_rank = 0;
  bool degenerate = false;
  double threshold_multiplier = 0.0;
  std::vector<double> linear_singular_values;
  std::vector<int> constant_coordinates;
};

/// Numerical dimension of the forward orbit of T. DomainError unless rho_B < 1.
OrbitDimensionReport orbit_dimension(const BekkModel& model, const OrbitOptions& opts);

/// Rank of the columns of `m` with threshold sigma_max * multiplier * ambient.
int numerical_rank(const Eigen::MatrixXd& m, double multiplier, int ambient,
                   std::vector<double>* singular_values = nullptr);

struct MomentComponent {
  std::string name;   // e.g. "XX[1,0]" or "Sigma[1,1]"
  double target = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double z = 0.0;
};

struct MomentReport {
  long samples = 0;
  long batch_length = 0;
  long batches = 0;
  double z_threshold = 3.0;
  std::vector<MomentComponent> xx;     // time average of X X^t against Sigma
  std::vector<MomentComponent> sigma;  // time average of Sigma_n against Sigma
  std::vector<MomentComponent> tower;  // X X^t - Sigma_n against 0
  double max_abs_z = 0.0;
  bool ok() const { return max_abs_z <= z_threshold; }
};

/// Batch means with batch length floor(sqrt(n)) over the rows from
/// traj.stats_begin(). DomainError when the trajectory diverged or the model
/// is not stationary.
MomentReport moment_check(const Trajectory& traj, const BekkModel& model,
                          double z_threshold = 3.0);

struct BatchMean {
  double mean = 0.0;
  double std_error = 0.0;
  long batch_length = 0;
  long batches = 0;
};

BatchMean batch_means(const std::vector<double>& series);

}  // namespace bekk
