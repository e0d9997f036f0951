#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bekk/chain_state.hpp"
#include "bekk/matcore.hpp"
#include "bekk/model.hpp"
#include "bekk/random.hpp"

namespace bekk {

// Lyapunov function
//   V(y) = sum_k tr(V_k Sigma_{n-k+1}) + sum_k X_{n-k+1}^t V_{p+k} X_{n-k+1} + 1
// with PV <= alpha V + b 1{V <= K_level}.
struct DriftCertificate {
  std::string model_hash;
  int p = 0;
  int q = 0;
  SymMatrix Sigma_dual{1};
  std::vector<SymMatrix> V;     // V_1 .. V_{p+q}
  std::vector<double> alpha_k;  // per-block contraction factors
  double alpha0 = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double K_level = 0.0;
};

/// DomainError unless rho_AB < 1.
DriftCertificate build_certificate(const BekkModel& model);

/// DomainError unless every sigma block is positive definite.
double evaluate_V(const DriftCertificate& cert, const ChainState& y);

/// Exact E[V(Y_n) | Y_{n-1} = y] for innovations with identity covariance.
double conditional_drift(const BekkModel& model, const DriftCertificate& cert,
                         const ChainState& y);

/// Frobenius residuals of the identities
///   B_k^t (V_1 + V_{p+1}) B_k + V_{k+1} = V_k - C/(p+q)
/// (V_{p+1} term absent for k = p) and their mirror images for A.
struct TelescopingResiduals {
  std::vector<double> garch;  // k = 1 .. p
  std::vector<double> arch;   // k = 1 .. q
  double dual_split = 0.0;    // |V_1 + V_{p+1} - Sigma_dual|
  double max() const;
};

TelescopingResiduals telescoping_residuals(const BekkModel& model, const DriftCertificate& cert);

struct MonteCarloDrift {
  double analytic = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  long draws = 0;
  double z() const { return std_error > 0 ? (mean - analytic) / std_error : 0.0; }
};

/// Sample mean of V(Y_n) over `draws` independent innovations at y.
MonteCarloDrift monte_carlo_drift(const BekkModel& model, const DriftCertificate& cert,
                                  const ChainState& y, long draws, std::uint64_t seed,
                                  std::uint64_t stream = 0,
                                  const InnovationSpec& innovation = InnovationSpec::gaussian());

struct DriftSampleSpec {
  long path_states = 1000;      // states read off a simulated path started at T
  long path_burn_in = 100;
  long random_states = 1000;    // random PD blocks over several orders of magnitude
  long boundary_states = 200;   // one sigma block with smallest eigenvalue 1e-8
  double boundary_eigenvalue = 1e-8;
  std::uint64_t seed = 0;
  int threads = 0;
  /// Allowance for rounding when comparing both sides, relative to 1 + |rhs|.
  double rounding = 1e-12;
};

struct DriftCheck {
  std::string source;  // "path", "random" or "boundary"
  double V = 0.0;
  double drift = 0.0;
  double bound = 0.0;  // alpha V + b 1{V <= K_level}
  double slack() const { return bound - drift; }
};

struct DriftVerification {
  DriftSampleSpec spec;
  long checked = 0;
  long violations = 0;
  long outside_level = 0;  // states with V > K_level
  double worst_slack = 0.0;
  double worst_relative_slack = 0.0;  // slack / (1 + |bound|)
  DriftCheck worst;
  std::optional<ChainState> witness;  // first violating state, else worst one
  bool ok() const { return violations == 0; }
};

/// Checks the drift inequality on sampled states; results depend only on spec.
DriftVerification verify_drift(const BekkModel& model, const DriftCertificate& cert,
                               const DriftSampleSpec& spec = {});

}  // namespace bekk
