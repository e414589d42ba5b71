#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l0ksvm/admm.hpp"
#include "l0ksvm/data.hpp"
#include "l0ksvm/kernels.hpp"
#include "l0ksvm/loss.hpp"

namespace l0ksvm {

enum class DecisionForm {
  primal,  // sum_i c_i K(x_i, x) + b, valid for any kernel and iterate
  dual     // -sum_{i in support} y_i lambda_i K(x_i, x) + b
};

/// Deployable classifier together with the solver quantities needed to re-certify it.
struct TrainedModel {
  Eigen::VectorXd c;
  double b = 0.0;
  Eigen::VectorXd lambda;
  Eigen::VectorXd u;
  std::vector<Eigen::Index> support;
  KernelSpec kernel;  // resolved (rho filled in)
  Eigen::MatrixXd X_train;
  Eigen::VectorXd y_train;
  LossKind loss = LossKind::l01;
  double C = 1.0;
  double sigma = 1.0;
  double gamma = 1.0;  // 1 / sigma
  int iterations = 0;
  Termination termination = Termination::max_iter;
  /// Feature scaling the training inputs went through; `eval` applies it to raw inputs.
  std::optional<ScalingStats> scaling;

  /// Apply `scaling` (if any) to raw inputs.
  Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& raw) const;

  std::uint64_t train_fingerprint() const { return fingerprint(X_train, &y_train); }
  std::size_t nsv() const noexcept { return support.size(); }
};

/// Package a solver result. `hp.kernel` must be the resolved spec used for the Gram matrix.
TrainedModel make_model(const SolveResult& result, const Dataset& train, const Hyperparams& hp, LossKind kind);

double decision_function(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                         DecisionForm form = DecisionForm::primal);

/// Decision values for every row of X (parallel over rows).
Eigen::VectorXd decision_values(const TrainedModel& model, const Eigen::MatrixXd& X,
                                DecisionForm form = DecisionForm::primal);

/// +1 where the decision value is >= 0, else -1.
Eigen::VectorXd sign_labels(const Eigen::VectorXd& decision);

Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& X,
                        DecisionForm form = DecisionForm::primal);

/// { i : u_i - gamma lambda_i in (0, sqrt(2 gamma C)] }, right endpoint widened by `slack`.
std::vector<Eigen::Index> support_vectors(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, double C,
                                          double gamma, double slack = 1e-9);

/// Multiplier form of the same set: { i : lambda_i in [-sqrt(2C/gamma) - tol, -tol) }.
std::vector<Eigen::Index> support_vectors_from_multipliers(const Eigen::VectorXd& lambda, double C, double gamma,
                                                           double tol);

/// 1 - (1/2n) sum |pred_j - y_j|.
double accuracy(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

}  // namespace l0ksvm
