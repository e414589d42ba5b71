#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "l0ksvm/error.hpp"
#include "l0ksvm/prox.hpp"
#include "l0ksvm/stationarity.hpp"

using namespace l0ksvm;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// v is a regular subgradient of f(t) = 1[t > 0] at u when
// f(u + h) - f(u) - v h >= -o(|h|), checked on a discretized neighbourhood.
bool regular_subgradient(double u, double v) {
  auto f = [](double t) { return t > 0 ? 1.0 : 0.0; };
  for (int k = 1; k <= 200; ++k) {
    const double h = 1e-6 * k;
    for (double step : {h, -h}) {
      const double q = (f(u + step) - f(u) - v * step) / std::abs(step);
      if (q < -1e-3) return false;
    }
  }
  return true;
}

Eigen::MatrixXd gaussian_gram(Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  KernelSpec spec;
  spec.rho = 0.5;
  return gram_matrix(spec, fixtures::random_points(m, 2, rng)).entries();
}

Eigen::VectorXd alternating(Eigen::Index m) {
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
  return y;
}

}  // namespace

TEST_CASE("subdiff_l01_contains examples") {
  CHECK(subdiff_l01_contains(vec({0, 3}), vec({2, 0})));
  CHECK_FALSE(subdiff_l01_contains(vec({0}), vec({-1})));
  CHECK_FALSE(subdiff_l01_contains(vec({5}), vec({0.1})));
}

TEST_CASE("subdiff_l01_contains agrees with the definitional oracle on a grid") {
  for (int a = -200; a <= 200; ++a) {
    for (int b = -200; b <= 200; ++b) {
      const double u = a * 0.01, v = b * 0.01;
      // The limiting subdifferential of the step at 0 is [0, inf), the closure of the
      // regular ones nearby; away from 0 both are {0}.
      const bool oracle = u == 0.0 ? (regular_subgradient(0.0, v)) : (regular_subgradient(u, v) && v == 0.0);
      REQUIRE(subdiff_l01_contains(vec({u}), vec({v})) == oracle);
    }
  }
}

TEST_CASE("check_kkt examples") {
  const Eigen::MatrixXd K = gaussian_gram(6, 1);
  const Eigen::VectorXd y = alternating(6);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6), ones = Eigen::VectorXd::Ones(6);
  const StationarityReport r = check_kkt(zero, 0.0, ones, zero, K, y, 1.0, 1e-12);
  CHECK(r.is_kkt);
  CHECK(r.res_stationary == 0.0);
  CHECK(r.res_feasibility == 0.0);
  CHECK(r.subdiff_ok.value());

  const StationarityReport bad = check_kkt(zero, 0.0, ones, y, K, y, 1.0, 1e-6);
  CHECK_FALSE(bad.is_kkt);
  CHECK(bad.res_dual_balance == 1.0);
}

TEST_CASE("construct_gamma examples") {
  CHECK(construct_gamma(vec({3, 0, -1}), vec({0, -1, 0}), 2.0) == doctest::Approx(2.25 * (1 - 1e-6)).epsilon(1e-15));
  CHECK(construct_gamma(vec({-1, -2}), vec({0, 0}), 3.0) == 1.0);
  CHECK(construct_gamma(vec({0}), vec({-2}), 2.0) == 1.0);
  CHECK_THROWS_AS(construct_gamma(vec({0}), vec({1}), 1.0), PreconditionError);
  CHECK_THROWS_AS(construct_gamma(vec({2}), vec({-1}), 1.0), PreconditionError);
}

TEST_CASE("check_prox_stationary examples") {
  const Eigen::MatrixXd K = gaussian_gram(4, 2);
  const Eigen::VectorXd y = alternating(4);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4), ones = Eigen::VectorXd::Ones(4);
  const StationarityReport ok = check_prox_stationary(zero, 0.0, ones, zero, K, y, 1.0, 0.1, 1e-12);
  CHECK(ok.is_prox_stationary);
  CHECK(ok.res_prox.value() == 0.0);
  CHECK(ok.gamma_used.value() == 0.1);

  const StationarityReport zeroed = check_prox_stationary(zero, 0.0, ones, zero, K, y, 1.0, 1.0, 1e-6);
  CHECK_FALSE(zeroed.is_prox_stationary);
  CHECK(zeroed.res_prox.value() > 0.5);

  const StationarityReport infeasible = check_prox_stationary(zero, 0.3, ones, zero, K, y, 1.0, 0.1, 1e-6);
  CHECK_FALSE(infeasible.is_prox_stationary);
  CHECK(infeasible.res_feasibility > 0.1);
  CHECK_THROWS_AS(check_prox_stationary(zero, 0.0, ones, zero, K, y, 1.0, 0.0, 1e-6), PreconditionError);
}

TEST_CASE("KKT fixtures are prox-stationary with the constructed gamma") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto q = fixtures::kkt_fixture(seed);
    const StationarityReport kkt = check_kkt(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, 1e-8);
    REQUIRE(kkt.is_kkt);
    const double gamma = construct_gamma(q.u, q.lambda, q.C, 1e-8);
    const StationarityReport prox = check_prox_stationary(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, gamma, 1e-8);
    CHECK(prox.is_prox_stationary);
    CHECK(equivalence_roundtrip(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, 1e-8));
    // monotone in tol
    for (double t : {1e-6, 1e-3, 1.0}) {
      CHECK(check_kkt(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, t).is_kkt);
      CHECK(check_prox_stationary(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, gamma, t).is_prox_stationary);
    }
  }
}

TEST_CASE("violations fail both checks") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 50; ++k) {
    const auto q = fixtures::violate(fixtures::kkt_fixture(1000 + k), k, rng);
    CHECK_FALSE(check_kkt(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, 1e-8).is_kkt);
    CHECK(equivalence_roundtrip(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, 1e-8));
  }
}

TEST_CASE("exact prox-stationary points are KKT points") {
  // Build the point from the prox side: pick gamma, then place u_S = 0 with
  // -gamma lambda_S inside (0, tau] and the remaining u beyond tau or negative.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto q = fixtures::kkt_fixture(500 + seed);
    const double gamma = construct_gamma(q.u, q.lambda, q.C);
    const Eigen::VectorXd fixed = prox_l01(q.u - gamma * q.lambda, ProxParams{gamma, q.C});
    REQUIRE(fixed == q.u);
    CHECK(check_kkt(q.c, q.b, q.u, q.lambda, q.K, q.y, q.C, 1e-8).is_kkt);
  }
}

TEST_CASE("random infeasible quadruples agree vacuously") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd K = gaussian_gram(10, 3);
  const Eigen::VectorXd y = alternating(10);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd c = fixtures::random_points(10, 1, rng).col(0);
    const Eigen::VectorXd u = fixtures::random_points(10, 1, rng).col(0);
    const Eigen::VectorXd lambda = fixtures::random_points(10, 1, rng).col(0);
    CHECK_FALSE(check_kkt(c, 0.1, u, lambda, K, y, 1.0, 1e-6).is_kkt);
    CHECK(equivalence_roundtrip(c, 0.1, u, lambda, K, y, 1.0, 1e-6));
  }
}
