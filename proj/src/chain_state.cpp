#include "bekk/chain_state.hpp"

#include <string>

#include "bekk/errors.hpp"

namespace bekk {

Eigen::VectorXd ChainState::flatten() const {
  Eigen::Index n = 0;
  for (const auto& b : sigma_blocks) n += b.size();
  for (const auto& x : x_blocks) n += x.size();
  Eigen::VectorXd y(n);
  Eigen::Index at = 0;
  for (const auto& b : sigma_blocks) {
    y.segment(at, b.size()) = b;
    at += b.size();
  }
  for (const auto& x : x_blocks) {
    y.segment(at, x.size()) = x;
    at += x.size();
  }
  return y;
}

Eigen::VectorXd ChainState::flatten_sigma() const {
  Eigen::Index n = 0;
  for (const auto& b : sigma_blocks) n += b.size();
  Eigen::VectorXd y(n);
  Eigen::Index at = 0;
  for (const auto& b : sigma_blocks) {
    y.segment(at, b.size()) = b;
    at += b.size();
  }
  return y;
}

ChainState ChainState::unflatten(const BekkModel& model, const Eigen::VectorXd& y) {
  if (y.size() != model.state_dim()) {
    throw DimensionError("ChainState: expected state vector of length " +
                         std::to_string(model.state_dim()) + ", got " +
                         std::to_string(y.size()));
  }
  const int m = model.half();
  const int d = model.dim();
  ChainState s;
  Eigen::Index at = 0;
  for (int j = 0; j < model.garch_order(); ++j, at += m) s.sigma_blocks.push_back(y.segment(at, m));
  for (int i = 0; i < model.arch_order(); ++i, at += d) s.x_blocks.push_back(y.segment(at, d));
  return s;
}

ChainState ChainState::constant(const BekkModel& model, const SymMatrix& sigma) {
  if (sigma.dim() != model.dim()) throw DimensionError("ChainState: sigma dimension mismatch");
  ChainState s;
  s.sigma_blocks.assign(model.garch_order(), vech(sigma));
  s.x_blocks.assign(model.arch_order(), Eigen::VectorXd::Zero(model.dim()));
  return s;
}

void check_shape(const BekkModel& model, const ChainState& y) {
  if (static_cast<int>(y.sigma_blocks.size()) != model.garch_order() ||
      static_cast<int>(y.x_blocks.size()) != model.arch_order()) {
    throw DimensionError("ChainState: expected " + std::to_string(model.garch_order()) +
                         " sigma blocks and " + std::to_string(model.arch_order()) +
                         " x blocks");
  }
  for (const auto& b : y.sigma_blocks)
    if (b.size() != model.half()) throw DimensionError("ChainState: sigma block has wrong length");
  for (const auto& x : y.x_blocks)
    if (x.size() != model.dim()) throw DimensionError("ChainState: x block has wrong length");
}

bool in_state_space(const BekkModel& model, const ChainState& y) {
  check_shape(model, y);
  for (const auto& b : y.sigma_blocks)
    if (!is_positive_definite(unvech(b))) return false;
  for (const auto& x : y.x_blocks)
    if (!x.allFinite()) return false;
  return true;
}

void require_state_space(const BekkModel& model, const ChainState& y, const char* who) {
  if (!in_state_space(model, y)) {
    throw DomainError(std::string(who) + ": state has a sigma block that is not positive definite");
  }
}

}  // namespace bekk
