#include "l0ksvm/baselines.hpp"

#include "l0ksvm/error.hpp"

namespace l0ksvm {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::l01: return "l01";
    case LossKind::hinge_l1: return "hinge_l1";
    case LossKind::squared_hinge_l2: return "squared_hinge_l2";
  }
  return "unknown";
}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "l01" || name == "l0") return LossKind::l01;
  if (name == "hinge_l1" || name == "hinge" || name == "l1") return LossKind::hinge_l1;
  if (name == "squared_hinge_l2" || name == "sqhinge" || name == "l2") return LossKind::squared_hinge_l2;
  throw ConfigError("unknown loss kind '" + name + "'");
}

double loss_term(LossKind kind, const Eigen::VectorXd& u) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] <= 0.0) continue;
    switch (kind) {
      case LossKind::l01: s += 1.0; break;
      case LossKind::hinge_l1: s += u[i]; break;
      case LossKind::squared_hinge_l2: s += u[i] * u[i]; break;
    }
  }
  return s;
}

double objective(LossKind kind, const Eigen::MatrixXd& K, const Eigen::VectorXd& c, const Eigen::VectorXd& u, double C) {
  if (K.rows() != c.size() || K.cols() != c.size()) throw InputError("objective: dimension mismatch");
  return 0.5 * c.dot(K * c) + C * loss_term(kind, u);
}

BaselineResult solve_baseline(const GramMatrix& gram, const Dataset& train, const Hyperparams& hp, LossKind kind) {
  Hyperparams resolved = hp;
  resolved.kernel = gram.spec();
  SolveResult res = kind == LossKind::l01
                        ? solve(gram, train.y, resolved)
                        : detail::run_admm(gram.entries(), train.y, resolved, kind, std::nullopt, {});
  TrainedModel model = make_model(res, train, resolved, kind);
  return {std::move(res.state), std::move(res.trace), std::move(model)};
}

BaselineResult solve_baseline(const Dataset& dataset, const Hyperparams& hp, LossKind kind) {
  dataset.validate_for_training();
  hp.validate();
  const GramMatrix gram = gram_matrix(hp.kernel, dataset.X);
  return solve_baseline(gram, dataset, hp, kind);
}

}  // namespace l0ksvm
