#include <doctest.h>

#include <random>

#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"
#include "oracles.hpp"

using namespace bekk;

TEST_CASE("scalar model has the closed form moments") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  const auto r = check_h3(m);
  CHECK(r.stationary);
  CHECK(r.rho_AB == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(r.rho_B == doctest::Approx(0.7).epsilon(1e-14));
  REQUIRE(r.Sigma);
  CHECK((*r.Sigma)(0, 0) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK((*r.Sigma_tilde)(0, 0) == doctest::Approx(1.0 / 0.3).epsilon(1e-13));
}

TEST_CASE("fixed point agrees with the Neumann series") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 3;
    const auto par = oracle::random_parameters(rng, d, 1 + t % 2, 1 + (t / 2) % 2, 2, 0.8);
    const BekkModel m = BekkModel::validate(par);
    const SymMatrix s = stationary_covariance(m);
    const Eigen::MatrixXd ref = oracle::neumann_fixed_point(par, 400);
    CHECK((s.matrix() - ref).norm() <= 1e-10 * ref.norm());
    CHECK(is_positive_definite(s));
  }
}

TEST_CASE("implication chain between the three spectral radii") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> target(0.2, 1.3);
  for (int t = 0; t < 40; ++t) {
    const auto par = oracle::random_parameters(rng, 2, 2, 1, 2, target(rng));
    const auto r = check_h3(BekkModel::validate(par));
    if (r.rho_AB < 1.0) {
      CHECK(r.rho_B < 1.0);
    }
    if (r.rho_B < 1.0) {
      CHECK(r.rho_companion < 1.0);
    }
    CHECK(r.stationary == (r.rho_AB < 1.0));
    CHECK(r.Sigma.has_value() == r.stationary);
  }
}

TEST_CASE("unit root and explosive models are not stationary") {
  for (double rho : {1.0, 1.2}) {
    BekkParameters p = builtin_example("scalar").params;
    p.A[0][0](0, 0) = std::sqrt(0.5 * rho);
    p.B[0][0](0, 0) = std::sqrt(0.5 * rho);
    const BekkModel m = BekkModel::validate(p);
    CHECK_FALSE(check_h3(m).stationary);
    CHECK_THROWS_AS(stationary_covariance(m), DomainError);
  }
}

TEST_CASE("margin flags near unit roots") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  StationarityOptions o;
  o.margin = 0.2;
  const auto r = check_h3(m, o);
  CHECK_FALSE(r.stationary);
  CHECK_FALSE(r.Sigma.has_value());
  CHECK(r.T.has_value());
}

TEST_CASE("attracting point is fixed by the noiseless map") {
  std::mt19937_64 rng(33);
  const auto par = oracle::random_parameters(rng, 2, 2, 2, 1, 0.6);
  const BekkModel m = BekkModel::validate(par);
  const ChainState T = attracting_point(m);
  const auto& cb = m.companion();
  const Eigen::VectorXd t = T.flatten();
  CHECK((cb.scrC + cb.Btilde_block * t - t).norm() < 1e-12 * (1 + t.norm()));
  // Starting at T with zero innovations stays at T.
  const ChainState y = step(m, T, Eigen::VectorXd::Zero(2));
  CHECK((y.flatten() - t).norm() < 1e-12 * (1 + t.norm()));
}

TEST_CASE("dual covariance solves the transposed equation") {
  std::mt19937_64 rng(34);
  const auto par = oracle::random_parameters(rng, 3, 1, 1, 2, 0.7);
  const BekkModel m = BekkModel::validate(par);
  const SymMatrix s = dual_stationary_covariance(m);
  const auto tp = transposed(par);
  const Eigen::MatrixXd rhs = par.C + oracle::bekk_action(tp.A, s.matrix()) +
                              oracle::bekk_action(tp.B, s.matrix());
  CHECK((rhs - s.matrix()).norm() < 1e-11 * s.frobenius_norm());
}

TEST_CASE("ARCH infinity coefficients and tail bound") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  const auto k = arch_infinity_coeffs(m, 30);
  // K_i = 0.2 * 0.7^(i-1) in the scalar case.
  for (int i = 1; i <= 30; ++i) {
    CHECK(k.K[i - 1](0, 0) == doctest::Approx(0.2 * std::pow(0.7, i - 1)).epsilon(1e-12));
  }
  CHECK(k.tail_norm == doctest::Approx(0.2 * std::pow(0.7, 30) / 0.3).epsilon(1e-10));
  const int n = default_arch_truncation(m);
  CHECK(arch_infinity_coeffs(m, n).tail_norm < 1e-10);
  CHECK(arch_infinity_coeffs(m, n - 1).tail_norm >= 1e-10);
}

TEST_CASE("raw linear solve reports singular operators") {
  const SymMatrix c = SymMatrix::identity(1);
  CHECK_FALSE(solve_fixed_point(Eigen::MatrixXd::Identity(1, 1), c).has_value());
  const auto s = solve_fixed_point(Eigen::MatrixXd::Constant(1, 1, 1.5), c);
  REQUIRE(s);
  CHECK((*s)(0, 0) == doctest::Approx(-2.0));
}

TEST_CASE("noiseless iteration converges to T at the companion rate") {
  std::mt19937_64 rng(35);
  const auto par = oracle::random_parameters(rng, 2, 2, 1, 1, 0.8, 0.3);
  const BekkModel m = BekkModel::validate(par);
  const auto r = check_h3(m);
  const auto& cb = m.companion();
  const Eigen::VectorXd t = r.T->flatten();
  Eigen::VectorXd y = oracle::random_state(rng, m, 5.0).flatten();
  std::vector<double> err;
  for (int n = 0; n < 400; ++n) {
    y = cb.scrC + cb.Btilde_block * y;
    err.push_back((y - t).norm());
  }
  CHECK(err.back() < 1e-12 * t.norm());
  // Geometric rate, read off before the error reaches rounding level.
  const double rate = std::pow(err[60] / err[20], 1.0 / 40.0);
  CHECK(rate == doctest::Approx(r.rho_companion).epsilon(0.02));
}
