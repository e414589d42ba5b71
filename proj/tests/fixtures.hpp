#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "l0ksvm/kernels.hpp"

namespace fixtures {

struct Quadruple {
  Eigen::VectorXd c;
  double b = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd K;
  Eigen::VectorXd y;
  double C = 1.0;
  std::vector<Eigen::Index> support;
};

inline Eigen::MatrixXd random_points(Eigen::Index m, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = g(rng);
  return X;
}

// KKT point on a random Gaussian Gram matrix. A support set S with both classes gets
// u_S = 0 and lambda_S < 0 from
//   [-diag(y_S) K_SS diag(y_S)  y_S] [lambda_S]   [1]
//   [y_S'                        0 ] [b       ] = [0],
// then c = -diag(y) lambda and u = 1 - diag(y) K c - b y off S.
inline Quadruple kkt_fixture(std::uint64_t seed, Eigen::Index m = 24) {
  std::mt19937_64 rng(seed);
  for (;;) {
    const Eigen::MatrixXd X = random_points(m, 2, rng);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;
    l0ksvm::KernelSpec spec;
    spec.rho = 0.5;
    const Eigen::MatrixXd K = l0ksvm::gram_matrix(spec, X).entries();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int attempt = 0; attempt < 50; ++attempt) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto s = static_cast<Eigen::Index>(2 + rng() % 4);
      std::vector<Eigen::Index> S(order.begin(), order.begin() + s);
      bool pos = false, neg = false;
      for (auto i : S) (y[i] > 0 ? pos : neg) = true;
      if (!pos || !neg) continue;

      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s + 1, s + 1);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) A(a, b) = -y[S[a]] * K(S[a], S[b]) * y[S[b]];
        A(a, s) = y[S[a]];
        A(s, a) = y[S[a]];
        rhs[a] = 1.0;
      }
      const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
      if ((A * sol - rhs).norm() > 1e-9) continue;
      if (sol.head(s).maxCoeff() >= -1e-3) continue;

      Quadruple q;
      q.K = K;
      q.y = y;
      q.C = 0.5 + static_cast<double>(rng() % 1000) / 500.0;
      q.lambda = Eigen::VectorXd::Zero(m);
      for (Eigen::Index a = 0; a < s; ++a) q.lambda[S[a]] = sol[a];
      q.b = sol[s];
      q.c = -y.cwiseProduct(q.lambda);
      q.u = Eigen::VectorXd::Ones(m) - y.cwiseProduct(K * q.c) - q.b * y;
      for (auto i : S) q.u[i] = 0.0;
      std::sort(S.begin(), S.end());
      q.support = S;
      return q;
    }
  }
}

// Breaks one condition of a KKT fixture; `which` picks the condition.
inline Quadruple violate(Quadruple q, int which, std::mt19937_64& rng) {
  const Eigen::Index m = q.y.size();
  Eigen::Index off = 0;
  while (std::find(q.support.begin(), q.support.end(), off) != q.support.end()) ++off;
  switch (which % 5) {
    case 0:  // feasibility
      q.b += 1e-3;
      break;
    case 1:  // stationarity and feasibility
      q.c += 1e-3 * random_points(m, 1, rng).col(0);
      break;
    case 2:  // wrong-signed multiplier on a zero coordinate
      q.lambda[q.support[0]] = -q.lambda[q.support[0]];
      break;
    case 3:  // nonzero multiplier on a nonzero coordinate
      q.lambda[off] = -0.5;
      break;
    default:  // dual balance
      q.lambda[q.support[0]] *= 1.5;
      break;
  }
  return q;
}

}  // namespace fixtures
