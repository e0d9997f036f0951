#pragma once

// Independent reference implementations used only by the tests. None of them
// calls the library routine it checks.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bekk/chain_state.hpp"
#include "bekk/drift.hpp"
#include "bekk/model.hpp"
#include "bekk/simulate.hpp"

namespace oracle {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n(rng);
  return m;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int d) {
  const Eigen::MatrixXd g = random_matrix(rng, d, d);
  return 0.5 * (g + g.transpose());
}

inline Eigen::MatrixXd random_pd(std::mt19937_64& rng, int d, double ridge = 0.5) {
  const Eigen::MatrixXd g = random_matrix(rng, d, d);
  return g * g.transpose() / d + ridge * Eigen::MatrixXd::Identity(d, d);
}

// Column stacking by loops.
inline Eigen::VectorXd vec_loop(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  int k = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
  return v;
}

inline Eigen::VectorXd vech_loop(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(d * (d + 1) / 2);
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) v(k++) = m(i, j);
  return v;
}

inline Eigen::MatrixXd unvech_loop(const Eigen::VectorXd& v) {
  int d = 0;
  while (d * (d + 1) / 2 < v.size()) ++d;
  Eigen::MatrixXd m(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = j; i < d; ++i) m(i, j) = m(j, i) = v(k++);
  return m;
}

inline Eigen::MatrixXd kron_loop(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// sum_k A_k M A_k^t over every lag of a coefficient family.
inline Eigen::MatrixXd bekk_action(const std::vector<std::vector<Eigen::MatrixXd>>& fam,
                                   const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (const auto& lag : fam)
    for (const auto& a : lag) out += a * m * a.transpose();
  return out;
}

// Sigma = sum_{n < terms} xi^n(C) with xi(M) = sum A M A^t + sum B M B^t.
inline Eigen::MatrixXd neumann_fixed_point(const bekk::BekkParameters& p, int terms) {
  Eigen::MatrixXd term = p.C;
  Eigen::MatrixXd sum = p.C;
  for (int n = 1; n < terms; ++n) {
    term = bekk_action(p.A, term) + bekk_action(p.B, term);
    sum += term;
  }
  return sum;
}

// Spectral radius by Gelfand's formula, rho = lim |M^N|^(1/N), with
// N = 2^squarings reached by repeated normalised squaring.
inline double gelfand_radius(const Eigen::MatrixXd& m, int squarings = 60) {
  Eigen::MatrixXd x = m;
  double log_rho = 0.0;
  double weight = 1.0;
  for (int k = 0; k < squarings; ++k) {
    const double s = x.norm();
    if (s == 0.0) return 0.0;
    log_rho += weight * std::log(s);
    x /= s;
    x = x * x;
    weight *= 0.5;
  }
  const double s = x.norm();
  if (s == 0.0) return 0.0;
  return std::exp(log_rho + weight * std::log(s));
}

// max over random directions of x^t (V - D) x / x^t V x.
inline double brute_force_alpha(const Eigen::MatrixXd& V, const Eigen::MatrixXd& D, long draws,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  double best = -1.0;
  Eigen::VectorXd x(V.rows());
  for (long i = 0; i < draws; ++i) {
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = n(rng);
    best = std::max(best, x.dot((V - D) * x) / x.dot(V * x));
  }
  return best;
}

// Mean of V(step(y, eps)) through the public transition, plus its standard error.
inline std::pair<double, double> stepped_drift(const bekk::BekkModel& model,
                                               const bekk::DriftCertificate& cert,
                                               const bekk::ChainState& y, long draws,
                                               std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::VectorXd eps(model.dim());
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < draws; ++i) {
    for (Eigen::Index k = 0; k < eps.size(); ++k) eps(k) = n(rng);
    const double v = bekk::evaluate_V(cert, bekk::step(model, y, eps));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = (sum2 - draws * mean * mean) / (draws - 1);
  return {mean, std::sqrt(var / draws)};
}

// Monte Carlo mean of V(Y_n) at y with the Cholesky root and a plain engine.
// Only the new X block is random, so the remaining terms are evaluated once.
inline std::pair<double, double> cholesky_drift(const bekk::BekkParameters& par,
                                                const bekk::DriftCertificate& cert,
                                                const bekk::ChainState& y, long draws,
                                                std::mt19937_64& rng) {
  const int d = par.d;
  Eigen::MatrixXd s = par.C;
  for (int i = 0; i < par.q; ++i) {
    const Eigen::VectorXd& x = y.x_blocks[i];
    s += bekk_action({par.A[i]}, x * x.transpose());
  }
  for (int j = 0; j < par.p; ++j) s += bekk_action({par.B[j]}, unvech_loop(y.sigma_blocks[j]));
  const Eigen::MatrixXd L = s.llt().matrixL();
  double base = 1.0 + (cert.V[0].matrix() * s).trace();
  for (int j = 1; j < par.p; ++j)
    base += (cert.V[j].matrix() * unvech_loop(y.sigma_blocks[j - 1])).trace();
  for (int i = 1; i < par.q; ++i) {
    const Eigen::VectorXd& x = y.x_blocks[i - 1];
    base += x.dot(cert.V[par.p + i].matrix() * x);
  }
  const Eigen::MatrixXd W = L.transpose() * cert.V[par.p].matrix() * L;
  std::normal_distribution<double> n;
  Eigen::VectorXd e(d);
  double sum = 0.0, sum2 = 0.0;
  for (long k = 0; k < draws; ++k) {
    for (int i = 0; i < d; ++i) e(i) = n(rng);
    const double v = base + e.dot(W * e);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = (sum2 - draws * mean * mean) / (draws - 1);
  return {mean, std::sqrt(std::max(0.0, var) / draws)};
}

// Random BEKK parameters scaled so that rho(sum A_i + sum B_j) = target.
// The spectral radius is homogeneous of degree 2 in the coefficients, so a
// single rescaling hits the target exactly.
inline bekk::BekkParameters random_parameters(std::mt19937_64& rng, int d, int p, int q,
                                              int max_terms, double target_rho,
                                              double arch_share = -1.0) {
  std::uniform_int_distribution<int> terms(1, max_terms);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  const double share = arch_share > 0 ? arch_share : unif(rng);
  bekk::BekkParameters par;
  par.d = d;
  par.p = p;
  par.q = q;
  par.C = random_pd(rng, d);
  par.A.resize(q);
  par.B.resize(p);
  for (auto& lag : par.A) {
    const int l = terms(rng);
    for (int k = 0; k < l; ++k) lag.push_back(std::sqrt(share) * random_matrix(rng, d, d));
  }
  for (auto& lag : par.B) {
    const int s = terms(rng);
    for (int k = 0; k < s; ++k) lag.push_back(std::sqrt(1.0 - share) * random_matrix(rng, d, d));
  }
  const bekk::BekkModel raw = bekk::BekkModel::validate(par);
  const double rho = gelfand_radius(raw.sum_arch() + raw.sum_garch());
  const double scale = std::sqrt(target_rho / rho);
  for (auto& lag : par.A)
    for (auto& a : lag) a *= scale;
  for (auto& lag : par.B)
    for (auto& b : lag) b *= scale;
  return par;
}

inline bekk::ChainState random_state(std::mt19937_64& rng, const bekk::BekkModel& model,
                                     double scale = 1.0) {
  bekk::ChainState y;
  for (int k = 0; k < model.garch_order(); ++k)
    y.sigma_blocks.push_back(vech_loop(scale * random_pd(rng, model.dim(), 0.2)));
  for (int k = 0; k < model.arch_order(); ++k)
    y.x_blocks.push_back(std::sqrt(scale) * random_matrix(rng, model.dim(), 1));
  return y;
}

}  // namespace oracle
