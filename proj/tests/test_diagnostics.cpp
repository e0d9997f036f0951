#include <doctest.h>

#include <random>

#include "bekk/diagnostics.hpp"
#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/stationarity.hpp"
#include "oracles.hpp"

using namespace bekk;

namespace {

double naive_energy(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  auto mean_dist = [](const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    double s = 0.0;
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < v.rows(); ++j) s += (u.row(i) - v.row(j)).norm();
    return s / (u.rows() * static_cast<double>(v.rows()));
  };
  return std::sqrt(2 * mean_dist(a, b) - mean_dist(a, a) - mean_dist(b, b));
}

// Trajectory whose rows are iid N(0, Sigma) with Sigma_n frozen at Sigma.
Trajectory iid_surrogate(const BekkModel& m, long n, std::uint64_t seed, double shift = 0.0) {
  const SymMatrix s = stationary_covariance(m);
  const Eigen::MatrixXd r = volatility_factor(s, SqrtMode::Cholesky);
  Trajectory t;
  t.d = m.dim();
  t.model_hash = m.hash();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const Eigen::VectorXd v = vech(s);
  Eigen::VectorXd e(t.d);
  for (long i = 0; i < n; ++i) {
    for (int k = 0; k < t.d; ++k) e(k) = nd(rng);
    const Eigen::VectorXd x = r * e + Eigen::VectorXd::Constant(t.d, shift);
    t.x_data.insert(t.x_data.end(), x.data(), x.data() + t.d);
    t.sigma_data.insert(t.sigma_data.end(), v.data(), v.data() + v.size());
  }
  return t;
}

}  // namespace

TEST_CASE("energy distance matches the pairwise definition") {
  std::mt19937_64 rng(61);
  const Eigen::MatrixXd a = oracle::random_matrix(rng, 40, 3);
  Eigen::MatrixXd b = oracle::random_matrix(rng, 30, 3);
  b.col(0).array() += 1.0;
  CHECK(energy_distance(a, b) == doctest::Approx(naive_energy(a, b)).epsilon(1e-12));
  CHECK(energy_distance(a, b) == doctest::Approx(energy_distance(b, a)).epsilon(1e-12));
  CHECK(energy_distance(a, a) < 1e-7);
}

TEST_CASE("KS statistic on hand-made samples") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_statistic({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("log-linear fit recovers an exact geometric decay") {
  std::vector<double> d;
  for (int k = 1; k <= 20; ++k) d.push_back(3.0 * std::pow(0.8, k));
  const DecayFit f = fit_log_linear(d, 1e-3);
  REQUIRE(f.valid);
  CHECK(f.rate == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.last_lag == 20);
  const DecayFit cut = fit_log_linear(d, 0.1);
  CHECK(cut.points < 20);
  CHECK_FALSE(fit_log_linear({1.0, 0.5}, 0.0).valid);
}

TEST_CASE("numerical rank of a quadratic point cloud") {
  std::mt19937_64 rng(62);
  Eigen::MatrixXd pts(3, 100);
  const Eigen::MatrixXd basis = oracle::random_matrix(rng, 3, 2);
  pts = basis * oracle::random_matrix(rng, 2, 100);
  CHECK(numerical_rank(pts, 1e-8, 3) == 2);
  std::vector<double> sv;
  CHECK(numerical_rank(oracle::random_matrix(rng, 4, 50), 1e-8, 4, &sv) == 4);
  CHECK(sv.size() == 4);
}

TEST_CASE("orbit dimension detects the degenerate example") {
  OrbitOptions o;
  o.n_samples = 60;
  o.depth = 10;
  const auto deg = orbit_dimension(BekkModel::validate(builtin_example("ex-3.3.10").params), o);
  CHECK(deg.ambient_dim == 5);
  CHECK(deg.linear_rank <= 4);
  CHECK(deg.degenerate);
  const auto full = orbit_dimension(BekkModel::validate(builtin_example("ex-2x2").params), o);
  CHECK(full.linear_rank == 5);
}

TEST_CASE("batch means on an iid series") {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> nd(2.0, 1.0);
  std::vector<double> s(10000);
  for (double& v : s) v = nd(rng);
  const BatchMean b = batch_means(s);
  CHECK(b.batch_length == 100);
  CHECK(b.batches == 100);
  CHECK(b.std_error == doctest::Approx(0.01).epsilon(0.25));
  CHECK(std::abs(b.mean - 2.0) < 4 * b.std_error);
}

TEST_CASE("moment check is calibrated on an iid surrogate") {
  const BekkModel m = BekkModel::validate(builtin_example("ex-2x2").params);
  int passes = 0;
  for (std::uint64_t s = 0; s < 20; ++s) passes += moment_check(iid_surrogate(m, 20000, s), m, 3.5).ok();
  CHECK(passes >= 17);
  const MomentReport shifted = moment_check(iid_surrogate(m, 20000, 1, 0.3), m);
  CHECK_FALSE(shifted.ok());
}

TEST_CASE("moment check on a simulated stationary path") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  RunOptions o;
  o.n = 200000;
  o.burn_in = 1000;
  o.seed = 5;
  const MomentReport r = moment_check(run(m, std::nullopt, o), m, 4.0);
  CHECK(r.xx.size() == 1);
  CHECK(r.ok());
}

TEST_CASE("convergence probe separates on and off variety starts") {
  const auto ex = builtin_example("ex-3.3.11");
  const BekkModel m = BekkModel::validate(ex.params);
  ConvergenceOptions o;
  o.chains_per_start = 100;
  o.horizon = 15;
  o.reference_lag = 200;
  o.threads = 1;
  o.seed = 3;
  const auto r = convergence_probe(m, {attracting_point(m), *ex.off_start}, o);
  REQUIRE(r.curves.size() == 2);
  CHECK(r.noise_floor > 0.0);
  CHECK(r.curves[0].on_manifold);
  CHECK_FALSE(r.curves[1].on_manifold);
  bool found = false;
  for (const auto& c : r.curves[1].constant_coordinates) {
    if (c.state_index != 2) continue;
    found = true;
    CHECK(c.reference_value == doctest::Approx(4.0 / 3.0));
    CHECK(c.min_ks == 1.0);
  }
  CHECK(found);
  o.chains_per_start = 50;
  CHECK_THROWS_AS(convergence_probe(m, {attracting_point(m)}, o), DomainError);
}
