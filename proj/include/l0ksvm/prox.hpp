#pragma once

#include <Eigen/Dense>

namespace l0ksvm {

/// Step `gamma` and penalty `C` of a proximal map; both strictly positive.
struct ProxParams {
  double gamma = 1.0;
  double C = 1.0;

  /// sqrt(2 * gamma * C): coordinates in (0, threshold] are sent to zero by the l0/1 prox.
  double threshold() const;
  void validate() const;
};

/// Proximal map of C * ||v_+||_0 (single-valued form). Per coordinate the result is 0 when
/// 0 < eta_i <= sqrt(2 gamma C) and eta_i otherwise. Comparisons are exact; the right
/// endpoint itself maps to 0.
Eigen::VectorXd prox_l01(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p);

/// Proximal map of C * sum_i max(v_i, 0).
Eigen::VectorXd prox_hinge(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p);

/// Proximal map of C * sum_i max(v_i, 0)^2.
Eigen::VectorXd prox_sqhinge(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p);

}  // namespace l0ksvm
