#include "bekk/drift.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "bekk/errors.hpp"
#include "bekk/parallel.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"

namespace bekk {
namespace {

Eigen::MatrixXd sandwich_t(const std::vector<Eigen::MatrixXd>& mats, const Eigen::MatrixXd& s) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s.rows(), s.cols());
  for (const auto& m : mats) out.noalias() += m.transpose() * s * m;
  return out;
}

Eigen::MatrixXd sym(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest lambda with (V - D) x = lambda V x.
double contraction_factor(const Eigen::MatrixXd& V, const Eigen::MatrixXd& D) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(V - D, V);
  if (es.info() != Eigen::Success) {
    throw NumericalError("build_certificate: generalized eigenproblem failed");
  }
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

Eigen::MatrixXd random_pd(Rng& rng, int d, double scale) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  return scale * (g * g.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d));
}

Eigen::MatrixXd near_singular_pd(Rng& rng, int d, double smallest) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.1, 10.0);
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd lambda(d);
  lambda(0) = smallest;
  for (int i = 1; i < d; ++i) lambda(i) = unif(rng);
  return sym(Q * lambda.asDiagonal() * Q.transpose());
}

ChainState state_from_path(const BekkModel& model, const Trajectory& t, long row) {
  ChainState y;
  for (int k = 0; k < model.garch_order(); ++k) y.sigma_blocks.push_back(t.sigma_vech(row - k));
  for (int k = 0; k < model.arch_order(); ++k) y.x_blocks.push_back(t.x(row - k));
  return y;
}

}  // namespace

double TelescopingResiduals::max() const {
  double m = dual_split;
  for (double v : garch) m = std::max(m, v);
  for (double v : arch) m = std::max(m, v);
  return m;
}

DriftCertificate build_certificate(const BekkModel& model) {
  const auto& par = model.parameters();
  const int p = par.p;
  const int q = par.q;
  const double share = 1.0 / (p + q);
  const Eigen::MatrixXd& C = model.intercept().matrix();

  DriftCertificate cert;
  cert.model_hash = model.hash();
  cert.p = p;
  cert.q = q;
  cert.Sigma_dual = dual_stationary_covariance(model);
  const Eigen::MatrixXd& S = cert.Sigma_dual.matrix();

  // V_k = (p-k+1)/(p+q) C + sum_{j>=k} B_j^t S B_j, built from the last lag down.
  std::vector<Eigen::MatrixXd> garch(p), arch(q);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(C.rows(), C.cols());
  for (int k = p; k >= 1; --k) {
    acc += sandwich_t(par.B[k - 1], S);
    garch[k - 1] = (p - k + 1) * share * C + acc;
  }
  acc.setZero();
  for (int k = q; k >= 1; --k) {
    acc += sandwich_t(par.A[k - 1], S);
    arch[k - 1] = (q - k + 1) * share * C + acc;
  }
  for (auto& v : garch) cert.V.push_back(SymMatrix::from_lower(sym(v)));
  for (auto& v : arch) cert.V.push_back(SymMatrix::from_lower(sym(v)));

  const Eigen::MatrixXd D = share * C;
  for (const auto& v : cert.V) {
    if (!is_positive_definite(v)) throw NumericalError("build_certificate: V_k not positive definite");
    cert.alpha_k.push_back(contraction_factor(v.matrix(), D));
  }
  cert.alpha0 = *std::max_element(cert.alpha_k.begin(), cert.alpha_k.end());
  cert.alpha = 0.5 * (cert.alpha0 + 1.0);
  cert.b = (S * C).trace() + 1.0 - cert.alpha0;
  cert.K_level = cert.b / (cert.alpha - cert.alpha0);
  return cert;
}

double evaluate_V(const DriftCertificate& cert, const ChainState& y) {
  if (static_cast<int>(y.sigma_blocks.size()) != cert.p ||
      static_cast<int>(y.x_blocks.size()) != cert.q) {
    throw DimensionError("evaluate_V: state does not match the certificate");
  }
  double v = 1.0;
  for (int k = 0; k < cert.p; ++k) {
    const SymMatrix s = y.sigma(k);
    if (!is_positive_definite(s)) throw DomainError("evaluate_V: sigma block not positive definite");
    v += (cert.V[k].matrix() * s.matrix()).trace();
  }
  for (int k = 0; k < cert.q; ++k) {
    const Eigen::VectorXd& x = y.x_blocks[k];
    v += x.dot(cert.V[cert.p + k].matrix() * x);
  }
  return v;
}

double conditional_drift(const BekkModel& model, const DriftCertificate& cert,
                         const ChainState& y) {
  require_state_space(model, y, "conditional_drift");
  const int p = cert.p;
  const int q = cert.q;
  const Eigen::MatrixXd next = next_covariance(model, y).matrix();
  // E[X^t V_{p+1} X] = tr(V_{p+1} Sigma_n) since E[eps eps^t] = I.
  double v = 1.0 + ((cert.V[0].matrix() + cert.V[p].matrix()) * next).trace();
  for (int k = 1; k < p; ++k) v += (cert.V[k].matrix() * y.sigma(k - 1).matrix()).trace();
  for (int k = 1; k < q; ++k) {
    const Eigen::VectorXd& x = y.x_blocks[k - 1];
    v += x.dot(cert.V[p + k].matrix() * x);
  }
  return v;
}

TelescopingResiduals telescoping_residuals(const BekkModel& model, const DriftCertificate& cert) {
  const auto& par = model.parameters();
  const int p = cert.p;
  const int q = cert.q;
  const Eigen::MatrixXd D = model.intercept().matrix() / (p + q);
  const Eigen::MatrixXd W = cert.V[0].matrix() + cert.V[p].matrix();

  TelescopingResiduals r;
  r.dual_split = (W - cert.Sigma_dual.matrix()).norm();
  for (int k = 1; k <= p; ++k) {
    Eigen::MatrixXd lhs = sandwich_t(par.B[k - 1], W);
    if (k < p) lhs += cert.V[k].matrix();
    r.garch.push_back((lhs - (cert.V[k - 1].matrix() - D)).norm());
  }
  for (int k = 1; k <= q; ++k) {
    Eigen::MatrixXd lhs = sandwich_t(par.A[k - 1], W);
    if (k < q) lhs += cert.V[p + k].matrix();
    r.arch.push_back((lhs - (cert.V[p + k - 1].matrix() - D)).norm());
  }
  return r;
}

MonteCarloDrift monte_carlo_drift(const BekkModel& model, const DriftCertificate& cert,
                                  const ChainState& y, long draws, std::uint64_t seed,
                                  std::uint64_t stream, const InnovationSpec& innovation) {
  if (draws < 2) throw DomainError("monte_carlo_drift: need at least 2 draws");
  require_state_space(model, y, "monte_carlo_drift");
  const int d = model.dim();
  const SymMatrix next = next_covariance(model, y);
  const Eigen::MatrixXd R = psd_sqrt(next).matrix();
  // V is additive over blocks: only the new X block depends on the draw.
  const double base = evaluate_V(cert, advance(model, y, next, Eigen::VectorXd::Zero(d)));
  const Eigen::MatrixXd& Vx = cert.V[cert.p].matrix();

  InnovationStream noise(innovation, seed, stream);
  Eigen::VectorXd eps(d);
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 1; i <= draws; ++i) {
    noise.draw({eps.data(), static_cast<std::size_t>(d)});
    const Eigen::VectorXd x = R * eps;
    const double v = base + x.dot(Vx * x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }
  MonteCarloDrift out;
  out.analytic = conditional_drift(model, cert, y);
  out.mean = mean;
  out.draws = draws;
  out.std_error = std::sqrt(m2 / static_cast<double>(draws - 1) / static_cast<double>(draws));
  return out;
}

DriftVerification verify_drift(const BekkModel& model, const DriftCertificate& cert,
                               const DriftSampleSpec& spec) {
  if (cert.model_hash != model.hash()) {
    throw DomainError("verify_drift: certificate was built for a different model");
  }
  const int d = model.dim();
  std::vector<ChainState> states;
  std::vector<std::string> sources;

  if (spec.path_states > 0) {
    RunOptions opts;
    opts.n = spec.path_states;
    opts.burn_in = std::max<long>(spec.path_burn_in, std::max(model.garch_order(), model.arch_order()));
    opts.keep_burn_in = true;
    opts.seed = spec.seed;
    opts.stream = 0;
    const Trajectory t = run(model, std::nullopt, opts);
    for (long row = t.stats_begin(); row < t.size(); ++row) {
      states.push_back(state_from_path(model, t, row));
      sources.emplace_back("path");
    }
  }

  Rng rng = make_stream(spec.seed, 1);
  std::uniform_real_distribution<double> log_scale(-3.0, 4.0);
  std::normal_distribution<double> normal;
  auto random_x = [&](double scale) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = std::sqrt(scale) * normal(rng);
    return x;
  };
  for (long i = 0; i < spec.random_states; ++i) {
    ChainState y;
    for (int k = 0; k < model.garch_order(); ++k)
      y.sigma_blocks.push_back(vech_lower(random_pd(rng, d, std::pow(10.0, log_scale(rng)))));
    for (int k = 0; k < model.arch_order(); ++k)
      y.x_blocks.push_back(random_x(std::pow(10.0, log_scale(rng))));
    states.push_back(std::move(y));
    sources.emplace_back("random");
  }
  std::uniform_int_distribution<int> pick(0, model.garch_order() - 1);
  for (long i = 0; i < spec.boundary_states; ++i) {
    ChainState y;
    const int thin = pick(rng);
    for (int k = 0; k < model.garch_order(); ++k) {
      y.sigma_blocks.push_back(vech_lower(k == thin ? near_singular_pd(rng, d, spec.boundary_eigenvalue)
                                                    : random_pd(rng, d, 1.0)));
    }
    for (int k = 0; k < model.arch_order(); ++k) y.x_blocks.push_back(random_x(1.0));
    states.push_back(std::move(y));
    sources.emplace_back("boundary");
  }

  std::vector<DriftCheck> checks(states.size());
  parallel_for(states.size(), spec.threads, [&](std::size_t i) {
    DriftCheck c;
    c.source = sources[i];
    c.V = evaluate_V(cert, states[i]);
    c.drift = conditional_drift(model, cert, states[i]);
    c.bound = cert.alpha * c.V + (c.V <= cert.K_level ? cert.b : 0.0);
    checks[i] = c;
  });

  DriftVerification out;
  out.spec = spec;
  out.checked = static_cast<long>(checks.size());
  std::size_t worst = 0;
  std::optional<std::size_t> first_violation;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (c.V > cert.K_level) ++out.outside_level;
    if (c.drift > c.bound + spec.rounding * (1.0 + std::abs(c.bound))) {
      ++out.violations;
      if (!first_violation) first_violation = i;
    }
    const double rel = c.slack() / (1.0 + std::abs(c.bound));
    if (i == 0 || rel < out.worst_relative_slack) {
      out.worst_relative_slack = rel;
      worst = i;
    }
  }
  if (!checks.empty()) {
    out.worst = checks[worst];
    out.worst_slack = checks[worst].slack();
    out.witness = states[first_violation.value_or(worst)];
  }
  return out;
}

}  // namespace bekk
