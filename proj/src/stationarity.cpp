#include "bekk/stationarity.hpp"

#include <algorithm>
#include <string>

#include "bekk/errors.hpp"

namespace bekk {
namespace {

std::string rho_message(const char* who, const char* what, double rho) {
  return std::string(who) + ": spectral radius of " + what + " is " + std::to_string(rho) +
         " (must be < 1)";
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXd dual_vech_operator(const BekkModel& model) {
  const VechForm vf = to_vech_form(transposed(model.parameters()));
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(model.half(), model.half());
  for (const auto& a : vf.A) op += a;
  for (const auto& b : vf.B) op += b;
  return op;
}

SymMatrix require_pd(std::optional<SymMatrix> s, const char* who) {
  if (!s) throw NumericalError(std::string(who) + ": linear system is singular");
  if (!is_positive_definite(*s)) {
    throw NumericalError(std::string(who) +
                         ": fixed point solve returned a matrix that is not positive definite");
  }
  return *std::move(s);
}

// First block row of B^k for k = 0 .. count-1 (m x p*m each).
std::vector<Eigen::MatrixXd> companion_first_rows(const Eigen::MatrixXd& B, int m, int count) {
  std::vector<Eigen::MatrixXd> rows;
  rows.reserve(count);
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(B.rows(), B.cols()).topRows(m);
  for (int k = 0; k < count; ++k) {
    rows.push_back(r);
    r = r * B;
  }
  return rows;
}

struct TailOperator {
  Eigen::MatrixXd B;
  Eigen::MatrixXd A;
  Eigen::MatrixXd resolvent;  // (I - B)^{-1}
  int m;
  int q;

  // sum_{i > n} K_i = sum_j [B^{max(0, n+1-j)} (I - B)^{-1}]_{1,1} A_j
  Eigen::MatrixXd tail(int n, const std::vector<Eigen::MatrixXd>& first_rows) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (int j = 1; j <= q; ++j) {
      const int k = std::max(0, n + 1 - j);
      const Eigen::MatrixXd g = first_rows[k] * resolvent.leftCols(m);
      out += g * A.block(0, (j - 1) * m, m, m);
    }
    return out;
  }
};

TailOperator make_tail(const BekkModel& model) {
  const auto& cb = model.companion();
  const Eigen::Index n = cb.B_block.rows();
  Eigen::MatrixXd resolvent =
      (Eigen::MatrixXd::Identity(n, n) - cb.B_block).fullPivLu().inverse();
  return {cb.B_block, cb.A_block, std::move(resolvent), model.half(), model.arch_order()};
}

}  // namespace

std::optional<SymMatrix> solve_fixed_point(const Eigen::MatrixXd& vech_operator,
                                           const SymMatrix& C) {
  const Eigen::Index m = vech_operator.rows();
  if (vech_operator.cols() != m || m != half_dim(C.dim())) {
    throw DimensionError("solve_fixed_point: operator does not match C");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(m, m) - vech_operator);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd x = lu.solve(vech(C));
  if (!x.allFinite()) return std::nullopt;
  return unvech(x);
}

StationarityReport check_h3(const BekkModel& model, const StationarityOptions& opts) {
  StationarityReport r;
  r.margin = opts.margin;
  r.rho_AB = spectral_radius(model.sum_arch() + model.sum_garch());
  r.rho_B = spectral_radius(model.sum_garch());
  r.rho_companion = spectral_radius(model.companion().B_block);
  r.stationary = r.rho_AB < 1.0 - opts.margin;
  if (r.rho_AB < 1.0 && r.stationary) r.Sigma = stationary_covariance(model);
  if (r.rho_B < 1.0) {
    r.Sigma_tilde = volatility_fixed_point(model);
    r.T = attracting_point(model);
  }
  return r;
}

SymMatrix stationary_covariance(const BekkModel& model) {
  const Eigen::MatrixXd op = model.sum_arch() + model.sum_garch();
  const double rho = spectral_radius(op);
  if (rho >= 1.0) throw DomainError(rho_message("stationary_covariance", "sum A_i + sum B_j", rho));
  return require_pd(solve_fixed_point(op, model.intercept()), "stationary_covariance");
}

SymMatrix dual_stationary_covariance(const BekkModel& model) {
  const double rho = spectral_radius(model.sum_arch() + model.sum_garch());
  if (rho >= 1.0) {
    throw DomainError(rho_message("dual_stationary_covariance", "sum A_i + sum B_j", rho));
  }
  return require_pd(solve_fixed_point(dual_vech_operator(model), model.intercept()),
                    "dual_stationary_covariance");
}

SymMatrix volatility_fixed_point(const BekkModel& model) {
  const double rho = spectral_radius(model.sum_garch());
  if (rho >= 1.0) throw DomainError(rho_message("volatility_fixed_point", "sum B_j", rho));
  return require_pd(solve_fixed_point(model.sum_garch(), model.intercept()),
                    "volatility_fixed_point");
}

ChainState attracting_point(const BekkModel& model) {
  const ChainState T = ChainState::constant(model, volatility_fixed_point(model));
  const auto& cb = model.companion();
  const Eigen::VectorXd t = T.flatten();
  const double residual = (t - cb.scrC - cb.Btilde_block * t).norm();
  if (residual > 1e-10 * (1.0 + t.norm())) {
    throw NumericalError("attracting_point: fixed point residual " + std::to_string(residual));
  }
  return T;
}

ArchInfinityCoeffs arch_infinity_coeffs(const BekkModel& model, int n) {
  if (n < 1) throw DomainError("arch_infinity_coeffs: truncation must be >= 1");
  const double rho = spectral_radius(model.sum_garch());
  if (rho >= 1.0) throw DomainError(rho_message("arch_infinity_coeffs", "sum B_j", rho));

  const auto& cb = model.companion();
  const int m = model.half();
  const int q = model.arch_order();
  const auto first_rows = companion_first_rows(cb.B_block, m, n + 1);

  ArchInfinityCoeffs out;
  out.intercept = vech(volatility_fixed_point(model));
  out.K.reserve(n);
  for (int i = 1; i <= n; ++i) {
    // K_i = [B^{i-1} A]_{1,1} + ... + [B^{i-q} A]_{1,q}, B^k = 0 for k < 0.
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
    for (int j = 1; j <= std::min(i, q); ++j) {
      const Eigen::MatrixXd row = first_rows[i - j] * cb.A_block;
      k += row.block(0, (j - 1) * m, m, m);
    }
    out.K.push_back(std::move(k));
  }
  const TailOperator tail_op = make_tail(model);
  const Eigen::MatrixXd tail = tail_op.tail(n, first_rows);
  out.tail_norm = spectral_norm(tail);
  out.tail_identity_bound =
      spectral_norm(unvech(tail * vech(SymMatrix::identity(model.dim()))).matrix());
  out.last_norm = spectral_norm(out.K.back());
  return out;
}

int default_arch_truncation(const BekkModel& model, double tol, int cap) {
  const double rho = spectral_radius(model.sum_garch());
  if (rho >= 1.0) throw DomainError(rho_message("default_arch_truncation", "sum B_j", rho));
  const TailOperator tail_op = make_tail(model);
  auto first_rows = companion_first_rows(tail_op.B, tail_op.m, 2);
  for (int n = 1; n <= cap; ++n) {
    while (static_cast<int>(first_rows.size()) <= n) {
      first_rows.push_back(first_rows.back() * tail_op.B);
    }
    if (spectral_norm(tail_op.tail(n, first_rows)) < tol) return n;
  }
  return cap;
}

ArchInfinityCoeffs arch_infinity_coeffs(const BekkModel& model) {
  return arch_infinity_coeffs(model, default_arch_truncation(model));
}

Eigen::VectorXd arch_reconstruct(const ArchInfinityCoeffs& coeffs,
                                 std::span<const Eigen::VectorXd> past) {
  Eigen::VectorXd out = coeffs.intercept;
  const std::size_t n = std::min(coeffs.K.size(), past.size());
  for (std::size_t i = 0; i < n; ++i) out += coeffs.K[i] * vech_outer(past[i]);
  return out;
}

}  // namespace bekk
