#pragma once

#include <optional>

#include <Eigen/Dense>

namespace l0ksvm {

/// Outcome of the KKT / proximal-stationarity checks at a quadruple (c, b, u, lambda).
///
/// Residuals are scaled like the solver's stopping quantities:
///   stationary   ||K c + K diag(y) lambda|| / (||K||_F (1 + ||c|| + ||lambda||))
///   dual balance |<y, lambda>| / m
///   feasibility  ||u + diag(y) K c + b y - 1|| / sqrt(m)
///   prox         ||u - prox_l01(u - gamma lambda)|| / (1 + ||u||)
///   subdiff      largest violation of the sign pattern of -lambda / C in the
///                subdifferential of ||u_+||_0 (zero coordinates: lambda_i <= 0;
///                others: lambda_i = 0)
struct StationarityReport {
  bool is_kkt = false;
  bool is_prox_stationary = false;
  std::optional<double> gamma_used;
  double res_stationary = 0.0;
  double res_dual_balance = 0.0;
  double res_feasibility = 0.0;
  std::optional<double> res_prox;     // set by check_prox_stationary
  std::optional<double> res_subdiff;  // set by check_kkt
  std::optional<bool> subdiff_ok;
  double tolerance = 0.0;
};

/// True iff every coordinate has (u_i = 0 and v_i >= 0) or (u_i != 0 and v_i = 0), with
/// equalities tested to within `tol`.
bool subdiff_l01_contains(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double tol = 1e-9);

StationarityReport check_kkt(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                             double tol);

StationarityReport check_prox_stationary(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K,
                                         const Eigen::VectorXd& y, double C, double gamma, double tol);

/// Step size under which a KKT multiplier makes u a fixed point of the l0/1 prox.
///
/// With I = {u_i > tol}, I0 = {|u_i| <= tol} and I0- = {i in I0 : lambda_i < 0}:
/// the candidates are 2C / max_{I0-} lambda_i^2 and (1 - 1e-6) min_I u_i^2 / (2C);
/// the result is the smaller of the active ones, or 1 if neither set is populated.
/// The second candidate is shrunk so min_I u_i stays strictly above the prox threshold,
/// and the first is stepped down by a few ulps if rounding puts -gamma lambda_i above it.
///
/// Throws PreconditionError if lambda does not have the KKT sign pattern.
double construct_gamma(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, double C, double tol = 0.0);

/// check_kkt(...).is_kkt == check_prox_stationary(..., construct_gamma(...)).is_prox_stationary.
/// A construct_gamma precondition failure counts as "not prox-stationary".
bool equivalence_roundtrip(const Eigen::VectorXd& c, double b, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& lambda, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                           double tol);

}  // namespace l0ksvm
