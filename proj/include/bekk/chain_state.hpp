#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bekk/matcore.hpp"
#include "bekk/model.hpp"

namespace bekk {

/// Markov state Y_n = (vech(Sigma_n), ..., vech(Sigma_{n-p+1}), X_n, ..., X_{n-q+1}).
/// Blocks are ordered most recent first.
struct ChainState {
  std::vector<Eigen::VectorXd> sigma_blocks;
  std::vector<Eigen::VectorXd> x_blocks;

  SymMatrix sigma(int lag) const { return unvech(sigma_blocks.at(lag)); }

  /// Stacked state vector of length p*d(d+1)/2 + q*d.
  Eigen::VectorXd flatten() const;
  /// Only the stacked sigma blocks, length p*d(d+1)/2.
  Eigen::VectorXd flatten_sigma() const;

  static ChainState unflatten(const BekkModel& model, const Eigen::VectorXd& y);
  /// State with every sigma block equal to `sigma` and zero X blocks.
  static ChainState constant(const BekkModel& model, const SymMatrix& sigma);
};

/// Throws DimensionError when block counts or sizes do not match the model.
void check_shape(const BekkModel& model, const ChainState& y);

/// Shape matches and every sigma block is positive definite (state in U).
bool in_state_space(const BekkModel& model, const ChainState& y);

/// check_shape plus DomainError when a sigma block is not positive definite.
void require_state_space(const BekkModel& model, const ChainState& y, const char* who);

}  // namespace bekk
