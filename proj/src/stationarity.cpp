#include "l0ksvm/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l0ksvm/error.hpp"
#include "l0ksvm/prox.hpp"

namespace l0ksvm {

namespace {

void check_dims(const Eigen::VectorXd& c, const Eigen::VectorXd& u, const Eigen::VectorXd& lambda,
                const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
  const auto m = y.size();
  if (c.size() != m || u.size() != m || lambda.size() != m || K.rows() != m || K.cols() != m)
    throw InputError("stationarity: dimension mismatch");
}

// The three linear conditions shared by both definitions.
void fill_common(StationarityReport& r, const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
  const auto m = static_cast<double>(y.size());
  const Eigen::VectorXd Kc = K * c;
  const double knorm = std::max(K.norm(), 1e-300);
  r.res_stationary = (K * (c + y.cwiseProduct(lambda))).norm() / (knorm * (1.0 + c.norm() + lambda.norm()));
  r.res_dual_balance = std::abs(y.dot(lambda)) / m;
  r.res_feasibility = (u + y.cwiseProduct(Kc) + b * y - Eigen::VectorXd::Ones(y.size())).norm() / std::sqrt(m);
}

bool common_ok(const StationarityReport& r) {
  return r.res_stationary <= r.tolerance && r.res_dual_balance <= r.tolerance && r.res_feasibility <= r.tolerance;
}

}  // namespace

bool subdiff_l01_contains(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double tol) {
  if (u.size() != v.size()) throw InputError("subdiff_l01_contains: length mismatch");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) <= tol) {
      if (v[i] < -tol) return false;
    } else if (std::abs(v[i]) > tol) {
      return false;
    }
  }
  return true;
}

StationarityReport check_kkt(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                             double tol) {
  check_dims(c, u, lambda, K, y);
  if (!(C > 0.0)) throw ConfigError("check_kkt: C must be > 0");
  StationarityReport r;
  r.tolerance = tol;
  fill_common(r, c, b, u, lambda, K, y);
  // 0 in C d||u_+||_0 + lambda  <=>  -lambda / C in d||u_+||_0.
  double worst = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double v = std::abs(u[i]) <= tol ? std::max(lambda[i], 0.0) : std::abs(lambda[i]);
    worst = std::max(worst, v);
  }
  r.res_subdiff = worst;
  r.subdiff_ok = worst <= tol;
  r.is_kkt = common_ok(r) && *r.subdiff_ok;
  return r;
}

StationarityReport check_prox_stationary(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K,
                                         const Eigen::VectorXd& y, double C, double gamma, double tol) {
  check_dims(c, u, lambda, K, y);
  if (!(gamma > 0.0)) throw PreconditionError("check_prox_stationary: gamma must be > 0");
  StationarityReport r;
  r.tolerance = tol;
  r.gamma_used = gamma;
  fill_common(r, c, b, u, lambda, K, y);
  const Eigen::VectorXd fixed = prox_l01(u - gamma * lambda, ProxParams{gamma, C});
  r.res_prox = (u - fixed).norm() / (1.0 + u.norm());
  r.is_prox_stationary = common_ok(r) && *r.res_prox <= tol;
  return r;
}

double construct_gamma(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, double C, double tol) {
  if (u.size() != lambda.size()) throw InputError("construct_gamma: length mismatch");
  if (!(C > 0.0)) throw ConfigError("construct_gamma: C must be > 0");
  if (!subdiff_l01_contains(u, -lambda / C, std::max(tol, 0.0)))
    throw PreconditionError("construct_gamma: lambda does not satisfy the KKT sign pattern");
  double min_u_sq = std::numeric_limits<double>::infinity();
  double max_lambda_sq = 0.0;
  bool has_pos = false, has_neg_multiplier = false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > tol) {
      has_pos = true;
      min_u_sq = std::min(min_u_sq, u[i] * u[i]);
    } else if (std::abs(u[i]) <= tol && lambda[i] < 0.0) {
      has_neg_multiplier = true;
      max_lambda_sq = std::max(max_lambda_sq, lambda[i] * lambda[i]);
    }
  }
  if (!has_pos && !has_neg_multiplier) return 1.0;
  const double from_multipliers = has_neg_multiplier ? 2.0 * C / max_lambda_sq : 0.0;
  const double from_positive = has_pos ? (1.0 - 1e-6) * min_u_sq / (2.0 * C) : 0.0;
  double gamma = has_pos && has_neg_multiplier ? std::min(from_multipliers, from_positive)
                 : has_pos                     ? from_positive
                                               : from_multipliers;
  // 2C / lambda^2 puts -gamma lambda_i on the threshold; step down past rounding.
  auto inside = [&](double g) {
    const double t = std::sqrt(2.0 * g * C);
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (std::abs(u[i]) <= tol && lambda[i] < 0.0 && u[i] - g * lambda[i] > t) return false;
    return true;
  };
  for (int k = 0; k < 64 && !inside(gamma); ++k) gamma = std::nextafter(gamma, 0.0);
  return gamma;
}

bool equivalence_roundtrip(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                           double tol) {
  const bool kkt = check_kkt(c, b, u, lambda, K, y, C, tol).is_kkt;
  bool prox = false;
  try {
    const double gamma = construct_gamma(u, lambda, C, tol);
    prox = check_prox_stationary(c, b, u, lambda, K, y, C, gamma, tol).is_prox_stationary;
  } catch (const PreconditionError&) {
    prox = false;
  }
  return kkt == prox;
}

}  // namespace l0ksvm
