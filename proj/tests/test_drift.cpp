#include <doctest.h>

#include <random>

#include "bekk/drift.hpp"
#include "bekk/errors.hpp"
#include "bekk/examples.hpp"
#include "bekk/simulate.hpp"
#include "bekk/stationarity.hpp"
#include "oracles.hpp"

using namespace bekk;

TEST_CASE("scalar certificate has the closed form constants") {
  const BekkModel m = BekkModel::validate(builtin_example("scalar").params);
  const DriftCertificate c = build_certificate(m);
  CHECK(std::abs(c.alpha0 - 14.0 / 15.0) < 1e-12);
  CHECK(std::abs(c.alpha - 29.0 / 30.0) < 1e-12);
  CHECK(std::abs(c.b - 151.0 / 15.0) < 1e-12);
  CHECK(c.K_level == doctest::Approx(c.b / (c.alpha - c.alpha0)));
  CHECK(telescoping_residuals(m, c).max() < 1e-12);
}

TEST_CASE("telescoping identities hold for higher orders") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t) {
    const auto par = oracle::random_parameters(rng, 1 + t % 3, 1 + t % 2, 1 + (t / 2) % 2, 2, 0.9);
    const BekkModel m = BekkModel::validate(par);
    const DriftCertificate c = build_certificate(m);
    CHECK(telescoping_residuals(m, c).max() < 1e-10);
    CHECK(c.alpha0 >= 0.0);
    CHECK(c.alpha0 < 1.0);
    CHECK(c.V.size() == static_cast<std::size_t>(m.garch_order() + m.arch_order()));
  }
}

TEST_CASE("contraction factors match a brute force search") {
  std::mt19937_64 rng(52);
  const auto par = oracle::random_parameters(rng, 2, 2, 1, 1, 0.8);
  const BekkModel m = BekkModel::validate(par);
  const DriftCertificate c = build_certificate(m);
  const double share = 1.0 / (m.garch_order() + m.arch_order());
  for (std::size_t k = 0; k < c.V.size(); ++k) {
    const double brute =
        oracle::brute_force_alpha(c.V[k].matrix(), share * par.C, 100000, rng);
    CHECK(brute <= c.alpha_k[k] + 1e-12);
    CHECK(brute >= c.alpha_k[k] - 1e-4);
  }
}

TEST_CASE("analytic drift equals the stepped Monte Carlo mean") {
  std::mt19937_64 rng(53);
  const auto par = oracle::random_parameters(rng, 2, 2, 2, 1, 0.85);
  const BekkModel m = BekkModel::validate(par);
  const DriftCertificate c = build_certificate(m);
  for (int t = 0; t < 3; ++t) {
    const ChainState y = oracle::random_state(rng, m, std::pow(10.0, t));
    const double exact = conditional_drift(m, c, y);
    const auto [mean, se] = oracle::stepped_drift(m, c, y, 40000, rng);
    CHECK(std::abs(mean - exact) < 4.0 * se);
    const MonteCarloDrift mc = monte_carlo_drift(m, c, y, 40000, 9, t);
    CHECK(mc.analytic == exact);
    CHECK(std::abs(mc.z()) < 4.0);
  }
}

TEST_CASE("drift inequality holds on sampled states") {
  std::mt19937_64 rng(54);
  const auto par = oracle::random_parameters(rng, 2, 1, 2, 2, 0.95);
  const BekkModel m = BekkModel::validate(par);
  const DriftCertificate c = build_certificate(m);
  DriftSampleSpec spec;
  spec.path_states = 300;
  spec.random_states = 300;
  spec.boundary_states = 100;
  spec.threads = 1;
  const DriftVerification v = verify_drift(m, c, spec);
  CHECK(v.checked == 700);
  CHECK(v.ok());
  CHECK(v.worst_slack >= 0.0);
  CHECK(v.outside_level > 0);
  // Same spec, same answer.
  CHECK(verify_drift(m, c, spec).worst_slack == v.worst_slack);
}

TEST_CASE("drift function is bounded below by one and grows with the state") {
  const BekkModel m = BekkModel::validate(builtin_example("ex-2x2").params);
  const DriftCertificate c = build_certificate(m);
  const ChainState T = attracting_point(m);
  const double v1 = evaluate_V(c, T);
  CHECK(v1 > 1.0);
  const ChainState big = ChainState::constant(m, T.sigma(0) * 100.0);
  CHECK(evaluate_V(c, big) > v1);
  ChainState bad = T;
  bad.sigma_blocks[0] *= -1.0;
  CHECK_THROWS_AS(evaluate_V(c, bad), DomainError);
}

TEST_CASE("certificate refuses non-stationary models") {
  BekkParameters p = builtin_example("scalar").params;
  p.A[0][0](0, 0) = 0.8;
  p.B[0][0](0, 0) = 0.8;
  CHECK_THROWS_AS(build_certificate(BekkModel::validate(p)), DomainError);
}
