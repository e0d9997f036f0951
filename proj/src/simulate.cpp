#include "bekk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bekk/errors.hpp"
#include "bekk/stationarity.hpp"

namespace bekk {
namespace {

// Chain iteration on full matrices; vech only at the boundaries.
class Engine {
 public:
  Engine(const BekkModel& model, const ChainState& y, SqrtMode mode)
      : model_(model), mode_(mode) {
    for (const auto& b : y.sigma_blocks) sig_.push_back(unvech(b).matrix());
    xs_ = y.x_blocks;
  }

  const Eigen::MatrixXd& propose() {
    next_ = model_.intercept().matrix();
    for (int i = 0; i < model_.arch_order(); ++i) next_ += model_.arch_action(i, xs_[i]);
    for (int j = 0; j < model_.garch_order(); ++j) next_ += model_.garch_action(j, sig_[j]);
    // Products like B S B^t are symmetric only up to rounding.
    next_ = next_.triangularView<Eigen::Lower>();
    next_.triangularView<Eigen::StrictlyUpper>() =
        next_.triangularView<Eigen::StrictlyLower>().transpose();
    return next_;
  }

  Eigen::VectorXd draw_x(const Eigen::VectorXd& eps) const {
    if (next_.rows() == 1) return Eigen::VectorXd::Constant(1, std::sqrt(next_(0, 0)) * eps(0));
    return volatility_factor(SymMatrix::from_lower(next_), mode_) * eps;
  }

  void commit(const Eigen::VectorXd& x) {
    std::rotate(sig_.rbegin(), sig_.rbegin() + 1, sig_.rend());
    sig_.front() = next_;
    std::rotate(xs_.rbegin(), xs_.rbegin() + 1, xs_.rend());
    xs_.front() = x;
  }

  const Eigen::MatrixXd& sigma(int lag) const { return sig_[lag]; }
  const Eigen::VectorXd& x(int lag) const { return xs_[lag]; }

 private:
  const BekkModel& model_;
  SqrtMode mode_;
  std::vector<Eigen::MatrixXd> sig_;
  std::vector<Eigen::VectorXd> xs_;
  Eigen::MatrixXd next_;
};

Eigen::MatrixXd krylov(const Eigen::MatrixXd& B, const Eigen::MatrixXd& A) {
  const Eigen::Index n = B.rows();
  Eigen::MatrixXd out(n, n * A.cols());
  Eigen::MatrixXd block = A;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.middleCols(k * A.cols(), A.cols()) = block;
    block = B * block;
  }
  return out;
}

}  // namespace

const char* to_string(SqrtMode mode) {
  return mode == SqrtMode::Symmetric ? "symmetric" : "cholesky";
}

SymMatrix next_covariance(const BekkModel& model, const ChainState& y) {
  check_shape(model, y);
  Engine e(model, y, SqrtMode::Symmetric);
  return SymMatrix::from_lower(e.propose());
}

ChainState advance(const BekkModel& model, const ChainState& y, const SymMatrix& sigma_new,
                   const Eigen::VectorXd& x_new) {
  check_shape(model, y);
  if (sigma_new.dim() != model.dim() || x_new.size() != model.dim()) {
    throw DimensionError("advance: new blocks do not match the model dimension");
  }
  ChainState out;
  out.sigma_blocks.reserve(y.sigma_blocks.size());
  out.sigma_blocks.push_back(vech(sigma_new));
  out.sigma_blocks.insert(out.sigma_blocks.end(), y.sigma_blocks.begin(),
                          y.sigma_blocks.end() - 1);
  out.x_blocks.reserve(y.x_blocks.size());
  out.x_blocks.push_back(x_new);
  out.x_blocks.insert(out.x_blocks.end(), y.x_blocks.begin(), y.x_blocks.end() - 1);
  return out;
}

Eigen::MatrixXd volatility_factor(const SymMatrix& sigma, SqrtMode mode) {
  return mode == SqrtMode::Symmetric ? psd_sqrt(sigma).matrix() : cholesky_factor(sigma);
}

ChainState step(const BekkModel& model, const ChainState& y, const Eigen::VectorXd& eps,
                SqrtMode mode) {
  require_state_space(model, y, "step");
  if (eps.size() != model.dim()) throw DimensionError("step: innovation has wrong length");
  const SymMatrix next = next_covariance(model, y);
  return advance(model, y, next, volatility_factor(next, mode) * eps);
}

Eigen::VectorXd Trajectory::x(long row) const {
  return Eigen::Map<const Eigen::VectorXd>(x_data.data() + row * d, d);
}

Eigen::VectorXd Trajectory::sigma_vech(long row) const {
  const int m = half_dim(d);
  return Eigen::Map<const Eigen::VectorXd>(sigma_data.data() + row * m, m);
}

SymMatrix Trajectory::sigma(long row) const { return unvech(sigma_vech(row)); }

Trajectory run(const BekkModel& model, const std::optional<ChainState>& start,
               const RunOptions& opts) {
  if (opts.n < 0 || opts.burn_in < 0) throw DomainError("run: n and burn_in must be >= 0");

  Trajectory t;
  t.model_hash = model.hash();
  t.seed = opts.seed;
  t.stream = opts.stream;
  t.rng_algorithm = kRngAlgorithm;
  t.innovation = opts.innovation.label();
  t.innovation_scaling = opts.innovation.scaling();
  t.sqrt_mode = opts.sqrt_mode;
  t.d = model.dim();
  t.requested_n = opts.n;
  t.burn_in = opts.burn_in;
  t.burn_in_retained = opts.keep_burn_in;
  t.first_index = opts.keep_burn_in ? 1 : opts.burn_in + 1;

  const StationarityReport h3 = check_h3(model);
  if (!h3.stationary) {
    std::ostringstream msg;
    msg << "model is not stationary (rho_AB = " << h3.rho_AB << ")";
    t.warnings.push_back(msg.str());
  }
  if (start) {
    require_state_space(model, *start, "run");
    t.start = *start;
    if (h3.rho_B < 1.0) {
      const OffStateReport probe = offstate_probe(model, *start, 0);
      if (!probe.on_manifold) {
        std::ostringstream msg;
        msg << "start not on state-space variety (invariant offset " << probe.offset_norm
            << ")";
        t.warnings.push_back(msg.str());
      }
    }
  } else {
    if (!h3.T) throw DomainError("run: attracting point requires rho_B < 1");
    t.start = *h3.T;
  }

  const int d = model.dim();
  const int m = model.half();
  const long total = opts.burn_in + opts.n;
  const long stored = opts.keep_burn_in ? total : opts.n;
  t.x_data.reserve(static_cast<std::size_t>(stored) * d);
  t.sigma_data.reserve(static_cast<std::size_t>(stored) * m);

  const double limit = opts.divergence_factor * model.intercept().frobenius_norm();
  Engine engine(model, t.start, opts.sqrt_mode);
  InnovationStream noise(opts.innovation, opts.seed, opts.stream);
  Eigen::VectorXd eps(d);
  for (long n = 1; n <= total; ++n) {
    const Eigen::MatrixXd& next = engine.propose();
    const double norm = next.norm();
    if (!std::isfinite(norm) || norm > limit) {
      t.diverged = true;
      t.diverged_at = n;
      break;
    }
    noise.draw({eps.data(), static_cast<std::size_t>(d)});
    const Eigen::VectorXd x = engine.draw_x(eps);
    engine.commit(x);
    if (opts.keep_burn_in || n > opts.burn_in) {
      t.x_data.insert(t.x_data.end(), x.data(), x.data() + d);
      for (int j = 0; j < d; ++j)
        for (int i = j; i < d; ++i) t.sigma_data.push_back(next(i, j));
    }
  }
  return t;
}

OffStateReport offstate_probe(const BekkModel& model, const ChainState& start, long horizon,
                              std::uint64_t seed) {
  check_shape(model, start);
  if (horizon < 0) throw DomainError("offstate_probe: horizon must be >= 0");
  const auto& cb = model.companion();
  const ChainState T = attracting_point(model);  // DomainError unless rho_B < 1
  const int N = model.sigma_state_dim();
  const int m = model.half();

  OffStateReport r;
  r.sigma_dim = N;
  r.horizon = horizon;

  const Eigen::MatrixXd ctrl = krylov(cb.B_block, cb.A_block);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ctrl, Eigen::ComputeFullU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double tol = smax * 1e-10 * std::max<Eigen::Index>(ctrl.rows(), ctrl.cols());
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  r.reachable_rank = rank;
  r.invariant_dim = N - rank;

  std::vector<int> det;
  for (int i = 0; i < N; ++i)
    if (ctrl.row(i).cwiseAbs().maxCoeff() <= tol) det.push_back(i);

  // Functionals z = Q^t sigma with z' = Q^t scrC1 + M z, independent of noise.
  Eigen::MatrixXd Q;
  r.coordinate_aligned = static_cast<int>(det.size()) == r.invariant_dim;
  if (r.coordinate_aligned) {
    Q = Eigen::MatrixXd::Zero(N, det.size());
    for (std::size_t k = 0; k < det.size(); ++k) Q(det[k], static_cast<Eigen::Index>(k)) = 1.0;
  } else {
    Q = svd.matrixU().rightCols(r.invariant_dim);
  }
  Eigen::MatrixXd M;
  if (r.coordinate_aligned) {
    M.resize(det.size(), det.size());
    for (std::size_t a = 0; a < det.size(); ++a)
      for (std::size_t b = 0; b < det.size(); ++b) M(a, b) = cb.B_block(det[a], det[b]);
  } else {
    M = Q.transpose() * cb.B_block * Q;
  }
  if (r.invariant_dim == 0) return r;

  const Eigen::VectorXd sig_T = T.flatten_sigma();
  const Eigen::VectorXd sig_0 = start.flatten_sigma();
  const Eigen::VectorXd z_star = Q.transpose() * sig_T;
  const Eigen::VectorXd offset0 = Q.transpose() * (sig_0 - sig_T);
  r.offset_norm = offset0.cwiseAbs().maxCoeff();
  r.on_manifold = r.offset_norm <= 1e-10 * (1.0 + z_star.cwiseAbs().maxCoeff());
  r.offset_rate = spectral_radius(M);
  r.injective = Eigen::FullPivLU<Eigen::MatrixXd>(M).isInvertible();

  for (int idx : det) {
    DeterministicCoordinate c;
    c.lag = idx / m;
    const int within = idx % m;
    for (int j = 0, k = 0; j < model.dim(); ++j)
      for (int i = j; i < model.dim(); ++i, ++k)
        if (k == within) {
          c.row = i;
          c.col = j;
        }
    c.state_index = idx;
    c.manifold_value = sig_T(idx);
    c.start_value = sig_0(idx);
    c.min_simulated_gap = std::numeric_limits<double>::infinity();
    r.coordinates.push_back(c);
  }

  // Offset e_n = M^n e_0 kept as (unit vector, log10 scale); never underflows.
  // The kernel of M^n stabilises after invariant_dim steps, so tracking that
  // far decides whether the offset can ever vanish.
  const long tracked = std::max<long>(horizon, r.invariant_dim);
  const double zero_tol = r.coordinate_aligned ? 0.0 : 1e-14 * std::max(1.0, M.norm());
  Eigen::VectorXd u = offset0;
  double scale = -std::numeric_limits<double>::infinity();
  bool vanished = r.offset_norm == 0.0;
  if (!vanished) {
    scale = std::log10(r.offset_norm);
    u /= r.offset_norm;
  }
  std::vector<long> last_nonzero(det.size(), -1);
  auto mark = [&](long n) {
    if (!r.coordinate_aligned || vanished) return;
    for (std::size_t k = 0; k < det.size(); ++k)
      if (u(static_cast<Eigen::Index>(k)) != 0.0) last_nonzero[k] = n;
  };
  r.offset_log10.push_back(scale);
  mark(0);
  for (long n = 1; n <= tracked && !vanished; ++n) {
    Eigen::VectorXd v = M * u;
    const double nv = v.cwiseAbs().maxCoeff();
    if (nv <= zero_tol) {
      vanished = true;
      scale = -std::numeric_limits<double>::infinity();
    } else {
      scale += std::log10(nv);
      u = v / nv;
    }
    if (n <= horizon) r.offset_log10.push_back(scale);
    mark(n);
  }
  r.offset_persists = !r.on_manifold && !vanished;

  for (std::size_t k = 0; k < r.coordinates.size(); ++k) {
    auto& c = r.coordinates[k];
    const double uk = vanished ? 0.0 : u(static_cast<Eigen::Index>(k));
    c.offset_vanishes = uk == 0.0;
    c.vanished_at = c.offset_vanishes ? last_nonzero[k] + 1 : -1;
    c.final_log10_offset = c.offset_vanishes ? -std::numeric_limits<double>::infinity()
                                             : scale + std::log10(std::abs(uk));
  }

  if (horizon > 0 && !r.coordinates.empty()) {
    require_state_space(model, start, "offstate_probe");
    Engine engine(model, start, SqrtMode::Symmetric);
    InnovationStream noise(InnovationSpec::gaussian(), seed, 0);
    Eigen::VectorXd eps(model.dim());
    for (long n = 1; n <= horizon; ++n) {
      engine.propose();
      noise.draw({eps.data(), static_cast<std::size_t>(model.dim())});
      engine.commit(engine.draw_x(eps));
      for (auto& c : r.coordinates) {
        const double v = engine.sigma(c.lag)(c.row, c.col);
        if (v == c.manifold_value) ++c.simulated_equal_steps;
        c.min_simulated_gap = std::min(c.min_simulated_gap, std::abs(v - c.manifold_value));
      }
    }
  }
  return r;
}

}  // namespace bekk
