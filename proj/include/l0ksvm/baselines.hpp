#pragma once

#include <Eigen/Dense>

#include "l0ksvm/admm.hpp"
#include "l0ksvm/data.hpp"
#include "l0ksvm/loss.hpp"
#include "l0ksvm/model.hpp"

namespace l0ksvm {

/// Per-sample loss on u summed over samples: count of positives, sum of positive parts,
/// or sum of squared positive parts.
double loss_term(LossKind kind, const Eigen::VectorXd& u);

/// 1/2 c'Kc + C * loss_term(kind, u).
double objective(LossKind kind, const Eigen::MatrixXd& K, const Eigen::VectorXd& c, const Eigen::VectorXd& u, double C);

struct BaselineResult {
  AdmmState state;
  SolveTrace trace;
  TrainedModel model;
};

/// Train with the shared ADMM skeleton. For the hinge and squared-hinge kinds the u-step
/// uses the matching prox and the dual step is unmasked; support vectors are the
/// coordinates with |lambda_i| > 1e-6. `LossKind::l01` is routed to `solve`.
BaselineResult solve_baseline(const Dataset& dataset, const Hyperparams& hp, LossKind kind);

/// Same, against a precomputed Gram matrix of `train.X`.
BaselineResult solve_baseline(const GramMatrix& gram, const Dataset& train, const Hyperparams& hp, LossKind kind);

}  // namespace l0ksvm
