#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bekk/errors.hpp"
#include "bekk/matcore.hpp"

namespace bekk {

/// Raw BEKK GARCH(p, q) parameters as read from a model file:
///
///   Sigma_n = C + sum_i sum_k A[i][k] X_{n-i} X_{n-i}^t A[i][k]^t
///               + sum_j sum_r B[j][r] Sigma_{n-j} B[j][r]^t
///
/// Each coefficient matrix is stored exactly as the matrix that multiplies
/// from the left. `A` has q lag groups (ARCH part), `B` has p lag groups
/// (GARCH part); group sizes are the l_i and s_j.
struct BekkParameters {
  int d = 0;
  int p = 0;
  int q = 0;
  Eigen::MatrixXd C;
  std::vector<std::vector<Eigen::MatrixXd>> A;
  std::vector<std::vector<Eigen::MatrixXd>> B;
};

/// Every problem found in `params`; empty means valid.
std::vector<ValidationIssue> validation_issues(const BekkParameters& params);

/// vec representation: Atilde[i] = sum_k A[i][k] (x) A[i][k], d^2 x d^2.
struct VecForm {
  std::vector<Eigen::MatrixXd> Atilde;
  std::vector<Eigen::MatrixXd> Btilde;
};

/// vech representation: A[i] = H Atilde[i] K^t, d(d+1)/2 square.
struct VechForm {
  std::vector<Eigen::MatrixXd> A;
  std::vector<Eigen::MatrixXd> B;
};

/// Block matrices of the Markov embedding with m = d(d+1)/2.
struct CompanionBlocks {
  Eigen::MatrixXd B_block;       // p*m square; (B_1 .. B_p) on top, identities below
  Eigen::MatrixXd A_block;       // p*m x q*m; only the first block row is non-zero
  Eigen::MatrixXd Btilde_block;  // full state: diag(B_block, 0_{q d})
  Eigen::VectorXd scrC;          // (vech(C), 0, ..., 0) over the full state
  Eigen::VectorXd scrC1;         // (vech(C), 0, ..., 0) over the p sigma blocks
};

VecForm to_vec_form(const BekkParameters& params);
VechForm to_vech_form(const BekkParameters& params);
CompanionBlocks companion_blocks(const BekkParameters& params);

/// Stable 64-bit FNV-1a digest of dimensions and coefficient bit patterns,
/// as 16 lowercase hex digits.
std::string model_hash(const BekkParameters& params);

/// Validated model with all derived forms computed once. Immutable.
class BekkModel {
 public:
  /// Throws ValidationError listing every failing field.
  static BekkModel validate(BekkParameters params);

  int dim() const { return params_.d; }
  int garch_order() const { return params_.p; }  // p, number of Sigma lags
  int arch_order() const { return params_.q; }   // q, number of X lags
  int half() const { return half_dim(params_.d); }
  int sigma_state_dim() const { return params_.p * half(); }
  int state_dim() const { return sigma_state_dim() + params_.q * params_.d; }

  const BekkParameters& parameters() const { return params_; }
  const SymMatrix& intercept() const { return C_; }
  const VecForm& vec_form() const { return vec_; }
  const VechForm& vech_form() const { return vech_; }
  const CompanionBlocks& companion() const { return companion_; }
  const std::string& hash() const { return hash_; }

  /// sum_i A_i and sum_j B_j in vech coordinates.
  const Eigen::MatrixXd& sum_arch() const { return sum_arch_; }
  const Eigen::MatrixXd& sum_garch() const { return sum_garch_; }

  /// sum_k A[lag][k] M A[lag][k]^t for M = x x^t, computed as a matrix.
  Eigen::MatrixXd arch_action(int lag, const Eigen::VectorXd& x) const;
  /// sum_r B[lag][r] S B[lag][r]^t.
  Eigen::MatrixXd garch_action(int lag, const Eigen::MatrixXd& s) const;

 private:
  BekkModel(BekkParameters params);

  BekkParameters params_;
  SymMatrix C_;
  VecForm vec_;
  VechForm vech_;
  CompanionBlocks companion_;
  Eigen::MatrixXd sum_arch_;
  Eigen::MatrixXd sum_garch_;
  std::string hash_;
};

/// Same model with every coefficient matrix transposed. The vech operator of
/// the transposed model is the adjoint action used by the drift function.
BekkParameters transposed(const BekkParameters& params);

}  // namespace bekk
