#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fixtures.hpp"
#include "l0ksvm/admm.hpp"
#include "l0ksvm/data.hpp"
#include "l0ksvm/error.hpp"
#include "l0ksvm/model.hpp"
#include "l0ksvm/stationarity.hpp"

using namespace l0ksvm;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TrainedModel constant_model(double b) {
  TrainedModel m;
  m.X_train = Eigen::MatrixXd::Zero(2, 2);
  m.X_train(1, 0) = 1.0;
  m.y_train = vec({1, -1});
  m.c = Eigen::VectorXd::Zero(2);
  m.lambda = Eigen::VectorXd::Zero(2);
  m.u = Eigen::VectorXd::Ones(2);
  m.b = b;
  m.kernel = KernelSpec{}.resolved(2);
  return m;
}

struct Trained {
  Dataset train;
  GramMatrix gram;
  SolveResult res;
  TrainedModel model;
  Hyperparams hp;
};

// Converged l0 model on standardized circles.
Trained converged_circles(std::uint64_t seed) {
  const Dataset raw = gen_double_circles(300, 0.5, 0.05, seed);
  Dataset train = standardize(raw, raw).train;
  Hyperparams hp;
  hp.C = 64;
  hp.sigma = 1;
  hp.kernel = hp.kernel.resolved(train.dim());
  GramMatrix gram = gram_matrix(hp.kernel, train.X);
  SolveResult res = solve(gram, train.y, hp);
  TrainedModel model = make_model(res, train, hp, LossKind::l01);
  return {std::move(train), std::move(gram), std::move(res), std::move(model), hp};
}

}  // namespace

TEST_CASE("accuracy examples and identity") {
  CHECK(accuracy(vec({1, -1, 1}), vec({1, -1, 1})) == 1.0);
  CHECK(accuracy(vec({1, -1, 1}), vec({-1, 1, -1})) == 0.0);
  CHECK(accuracy(vec({1, 1, -1, -1}), vec({1, -1, 1, -1})) == 0.5);
  CHECK_THROWS_AS(accuracy(vec({1}), vec({1, 1})), InputError);

  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 40);
    Eigen::VectorXd p(n), y(n);
    int equal = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      p[i] = rng() % 2 ? 1.0 : -1.0;
      y[i] = rng() % 2 ? 1.0 : -1.0;
      equal += p[i] == y[i];
    }
    CHECK(accuracy(p, y) == doctest::Approx(static_cast<double>(equal) / static_cast<double>(n)).epsilon(1e-15));
  }
}

TEST_CASE("sign rule and constant models") {
  CHECK(sign_labels(vec({0.3, -0.1, 0})) == vec({1, -1, 1}));
  const TrainedModel m = constant_model(0.7);
  Eigen::MatrixXd X(3, 2);
  X << 5, 5, -1, 0, 0.2, 0.3;
  CHECK(predict(m, X) == Eigen::VectorXd::Ones(3));
  CHECK(decision_function(m, X.row(0).transpose(), DecisionForm::dual) == 0.7);
  CHECK(decision_function(m, X.row(1).transpose(), DecisionForm::primal) == 0.7);
  CHECK_THROWS_AS(decision_function(m, vec({1, 2, 3})), InputError);
}

TEST_CASE("support_vectors examples") {
  CHECK(support_vectors(vec({-1, 5}), vec({0, 0}), 1.0, 1.0).empty());
  const double gamma = 0.5, C = 1.0;
  const double tau = std::sqrt(2 * gamma * C);
  const auto S = support_vectors(vec({0, 0, 2 * tau}), vec({-tau / gamma * 0.5, 0, 0}), C, gamma);
  CHECK(S == std::vector<Eigen::Index>{0});
  CHECK(support_vectors_from_multipliers(vec({-tau / gamma * 0.5, 0, 0}), C, gamma, 1e-9) == S);
}

TEST_CASE("converged models: margins, forms and multiplier bounds") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Trained t = converged_circles(seed);
    if (t.res.trace.termination != Termination::tolerance_met) continue;
    ++checked;
    const auto& s = t.res.state;
    const double gamma = 1.0 / t.hp.sigma, tol = 1e-2;
    REQUIRE(check_prox_stationary(s.c, s.b, s.u, s.lambda, t.gram.entries(), t.train.y, t.hp.C, gamma, tol)
                .is_prox_stationary);
    CHECK(accuracy(predict(t.model, t.train.X), t.train.y) >= 0.99);
    CHECK(t.model.nsv() > 0);
    CHECK(t.model.nsv() <= 30);

    const Eigen::VectorXd h = decision_values(t.model, t.train.X);
    std::vector<bool> in(static_cast<std::size_t>(t.train.size()), false);
    for (auto i : t.model.support) {
      in[static_cast<std::size_t>(i)] = true;
      CHECK(std::abs(t.train.y[i] * h[i] - 1.0) <= 50 * tol);
    }
    const double bound = std::sqrt(2 * t.hp.C / gamma);
    for (Eigen::Index i = 0; i < t.train.size(); ++i) {
      CHECK(s.lambda[i] >= -bound - 1e-9);
      CHECK(s.lambda[i] <= 1e-9);
      if (!in[static_cast<std::size_t>(i)]) CHECK(std::abs(s.lambda[i]) <= 1e-9);
    }

    // Both forms differ by sum_i (c_i + y_i lambda_i) K(x_i, x).
    const Eigen::MatrixXd grid = fixtures::random_points(200, 2, *std::make_unique<std::mt19937_64>(seed));
    const Eigen::VectorXd primal = decision_values(t.model, grid, DecisionForm::primal);
    const Eigen::VectorXd dual = decision_values(t.model, grid, DecisionForm::dual);
    const double beta1 = t.res.trace.records.back().betas.beta1;
    const Eigen::MatrixXd Kx = cross_kernel(t.model.kernel, grid, t.train.X);
    const double scale = beta1 * (1 + s.c.norm() + s.lambda.norm());
    for (Eigen::Index j = 0; j < grid.rows(); ++j)
      CHECK(std::abs(primal[j] - dual[j]) <= scale * Kx.row(j).norm() * (1 + 1e-12));
  }
  CHECK(checked > 0);
}

TEST_CASE("model JSON round trip") {
  const Trained t = converged_circles(1);
  const TrainedModel back = model_from_json(model_to_json(t.model));
  CHECK(back.c == t.model.c);
  CHECK(back.b == t.model.b);
  CHECK(back.lambda == t.model.lambda);
  CHECK(back.u == t.model.u);
  CHECK(back.support == t.model.support);
  CHECK(back.kernel == t.model.kernel);
  CHECK(back.X_train == t.model.X_train);
  CHECK(back.y_train == t.model.y_train);
  CHECK(back.iterations == t.model.iterations);
  CHECK(back.termination == t.model.termination);
  CHECK(back.scaling.has_value() == t.model.scaling.has_value());
  CHECK(model_to_json(back) == model_to_json(t.model));
  CHECK(decision_values(back, t.train.X) == decision_values(t.model, t.train.X));
  CHECK_THROWS_AS(model_from_json("{\"format\": \"other\"}"), InputError);
  CHECK_THROWS_AS(model_from_json("not json"), InputError);
}
