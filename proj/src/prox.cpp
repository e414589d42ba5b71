#include "l0ksvm/prox.hpp"

#include <cmath>

#include "l0ksvm/error.hpp"

namespace l0ksvm {

double ProxParams::threshold() const { return std::sqrt(2.0 * gamma * C); }

void ProxParams::validate() const {
  if (!(gamma > 0.0) || !(C > 0.0) || !std::isfinite(gamma) || !std::isfinite(C))
    throw ConfigError("prox: gamma and C must be finite and > 0");
}

Eigen::VectorXd prox_l01(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p) {
  p.validate();
  const double tau = p.threshold();
  Eigen::VectorXd out = eta;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (eta[i] > 0.0 && eta[i] <= tau) out[i] = 0.0;
  return out;
}

Eigen::VectorXd prox_hinge(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p) {
  p.validate();
  const double shift = p.gamma * p.C;
  Eigen::VectorXd out = eta;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (eta[i] > shift) out[i] = eta[i] - shift;
    else if (eta[i] >= 0.0) out[i] = 0.0;
  }
  return out;
}

Eigen::VectorXd prox_sqhinge(const Eigen::Ref<const Eigen::VectorXd>& eta, const ProxParams& p) {
  p.validate();
  const double scale = 1.0 / (1.0 + 2.0 * p.gamma * p.C);
  Eigen::VectorXd out = eta;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (eta[i] > 0.0) out[i] = eta[i] * scale;
  return out;
}

}  // namespace l0ksvm
