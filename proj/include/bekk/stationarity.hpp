#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bekk/chain_state.hpp"
#include "bekk/matcore.hpp"
#include "bekk/model.hpp"

namespace bekk {

struct StationarityOptions {
  /// Model is reported stationary iff rho_AB < 1 - margin. The default is
  /// the strict condition; a positive margin flags near-unit-root models.
  double margin = 0.0;
};

struct StationarityReport {
  double rho_AB = 0.0;         // spectral radius of sum A_i + sum B_j (vech)
  double rho_B = 0.0;          // spectral radius of sum B_j
  double rho_companion = 0.0;  // spectral radius of the companion block B
  bool stationary = false;
  double margin = 0.0;
  std::optional<SymMatrix> Sigma;        // present iff stationary
  std::optional<SymMatrix> Sigma_tilde;  // present iff rho_B < 1
  std::optional<ChainState> T;           // present iff rho_B < 1
};

StationarityReport check_h3(const BekkModel& model, const StationarityOptions& opts = {});

/// Solves vech(S) = (I - op)^{-1} vech(C) without any spectral precondition.
/// Returns nullopt when I - op is numerically singular. The result need not
/// be positive definite; this is the raw linear route used for equivalence
/// checks.
std::optional<SymMatrix> solve_fixed_point(const Eigen::MatrixXd& vech_operator,
                                           const SymMatrix& C);

/// Unique PD Sigma with Sigma = C + sum A Sigma A^t + sum B Sigma B^t.
/// DomainError if rho_AB >= 1, NumericalError if the solve is not PD.
SymMatrix stationary_covariance(const BekkModel& model);

/// Same fixed point with transposed coefficients (A^t Sigma A terms).
SymMatrix dual_stationary_covariance(const BekkModel& model);

/// Sigma_tilde = C + sum B Sigma_tilde B^t. DomainError if rho_B >= 1.
SymMatrix volatility_fixed_point(const BekkModel& model);

/// Unique solution of T = scrC + Btilde T: p copies of vech(Sigma_tilde)
/// followed by q*d zeros.
ChainState attracting_point(const BekkModel& model);

/// Coefficients of vech(Sigma_n) = intercept + sum_i K_i vech(X_{n-i} X_{n-i}^t).
struct ArchInfinityCoeffs {
  std::vector<Eigen::MatrixXd> K;  // K_1 .. K_n
  Eigen::VectorXd intercept;       // (I - sum B_j)^{-1} vech(C)
  /// Spectral norm of the exact tail operator sum_{i > n} K_i.
  double tail_norm = 0.0;
  /// Spectral norm of unvech(sum_{i > n} K_i vech(I)). If every X in the
  /// truncated part satisfies |X|^2 <= r, the neglected PSD contribution is
  /// bounded by r times this value in spectral norm.
  double tail_identity_bound = 0.0;
  double last_norm = 0.0;  // spectral norm of K_n
};

ArchInfinityCoeffs arch_infinity_coeffs(const BekkModel& model, int n);
/// Truncation chosen by default_arch_truncation.
ArchInfinityCoeffs arch_infinity_coeffs(const BekkModel& model);

/// Smallest n with tail_norm below `tol`, capped at `cap`.
int default_arch_truncation(const BekkModel& model, double tol = 1e-10, int cap = 10000);

/// intercept + sum_{i=1}^{min(n, past.size())} K_i vech(past[i-1] past[i-1]^t),
/// where past[0] = X_{n-1}, past[1] = X_{n-2}, ...
Eigen::VectorXd arch_reconstruct(const ArchInfinityCoeffs& coeffs,
                                 std::span<const Eigen::VectorXd> past);

}  // namespace bekk
