#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bekk/chain_state.hpp"
#include "bekk/matcore.hpp"
#include "bekk/model.hpp"
#include "bekk/random.hpp"

namespace bekk {

/// How X_n is formed from Sigma_n: X_n = R eps_n with R the symmetric PSD
/// root (default) or the lower Cholesky factor.
enum class SqrtMode { Symmetric, Cholesky };

const char* to_string(SqrtMode mode);

/// Sigma_{n} = C + sum A X X^t A^t + sum B Sigma B^t from the lags stored in y.
SymMatrix next_covariance(const BekkModel& model, const ChainState& y);

/// Shifts y by one lag, inserting (sigma_new, x_new) as the most recent blocks.
ChainState advance(const BekkModel& model, const ChainState& y, const SymMatrix& sigma_new,
                   const Eigen::VectorXd& x_new);

Eigen::MatrixXd volatility_factor(const SymMatrix& sigma, SqrtMode mode);

/// One transition Y_n = F(Y_{n-1}, eps_n). DomainError unless y is in U.
ChainState step(const BekkModel& model, const ChainState& y, const Eigen::VectorXd& eps,
                SqrtMode mode = SqrtMode::Symmetric);

struct RunOptions {
  long n = 1000;        // recorded steps after burn-in
  long burn_in = 0;     // steps excluded from summary statistics
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  InnovationSpec innovation = InnovationSpec::gaussian();
  SqrtMode sqrt_mode = SqrtMode::Symmetric;
  bool keep_burn_in = false;        // also store the burn-in steps
  double divergence_factor = 1e12;  // abort once |Sigma_n|_F > factor * |C|_F
};

/// Simulated path. Row t holds time index first_index + t, where time 1 is
/// the first step after the start state.
struct Trajectory {
  std::string model_hash;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string rng_algorithm;
  std::string innovation;
  double innovation_scaling = 1.0;
  SqrtMode sqrt_mode = SqrtMode::Symmetric;
  ChainState start;
  int d = 0;
  long requested_n = 0;
  long burn_in = 0;
  bool burn_in_retained = false;
  long first_index = 1;
  bool diverged = false;
  long diverged_at = -1;  // time index that exceeded the threshold
  std::vector<std::string> warnings;

  std::vector<double> x_data;      // size() * d, row major
  std::vector<double> sigma_data;  // size() * d(d+1)/2, row major, vech order

  long size() const { return d == 0 ? 0 : static_cast<long>(x_data.size()) / d; }
  /// First row that counts for summary statistics.
  long stats_begin() const { return burn_in_retained ? std::min(burn_in, size()) : 0; }
  long time_index(long row) const { return first_index + row; }

  Eigen::VectorXd x(long row) const;
  Eigen::VectorXd sigma_vech(long row) const;
  SymMatrix sigma(long row) const;
};

/// Runs the chain from `start`, or from the attracting point when start is
/// empty. Non-stationary models and starts off the state-space variety are
/// allowed and recorded in `warnings`. Overflow stops the run and sets
/// `diverged`.
Trajectory run(const BekkModel& model, const std::optional<ChainState>& start,
               const RunOptions& opts);

/// A sigma coordinate that the noise never reaches.
struct DeterministicCoordinate {
  int lag = 0;  // sigma block
  int row = 0;  // matrix entry, row >= col
  int col = 0;
  int state_index = 0;
  double manifold_value = 0.0;  // value on the variety (from T)
  double start_value = 0.0;
  /// Offset to the manifold value hit exactly zero within the tracked span.
  bool offset_vanishes = false;
  long vanished_at = -1;
  double final_log10_offset = 0.0;  // -inf when vanished
  long simulated_equal_steps = 0;   // simulated steps bitwise equal to manifold_value
  double min_simulated_gap = 0.0;
};

struct OffStateReport {
  int sigma_dim = 0;
  int reachable_rank = 0;  // rank of [A, B A, B^2 A, ...]
  int invariant_dim = 0;   // sigma_dim - reachable_rank
  bool coordinate_aligned = false;
  std::vector<DeterministicCoordinate> coordinates;
  bool on_manifold = true;
  double offset_norm = 0.0;      // sup norm of the initial invariant offset
  double offset_rate = 0.0;      // spectral radius of the invariant recursion
  bool injective = true;         // invariant recursion matrix is non-singular
  bool offset_persists = false;  // offset can never reach zero
  long horizon = 0;
  std::vector<double> offset_log10;  // log10 sup norm of the offset, n = 0..tracked
};

/// Finds the affine components of the sigma recursion that the noise never
/// reaches, compares the start with their values on the variety and tracks
/// the offset for `horizon` steps. With horizon > 0 the noisy chain is also
/// simulated and the deterministic coordinates are compared bitwise.
OffStateReport offstate_probe(const BekkModel& model, const ChainState& start, long horizon,
                              std::uint64_t seed = 0);

}  // namespace bekk
