#pragma once

#include <string>

namespace l0ksvm {

/// Which loss the ADMM u-step targets: the l0-norm hinge loss, or one of the two
/// classical baselines (sum of hinge losses, sum of squared hinge losses).
enum class LossKind { l01, hinge_l1, squared_hinge_l2 };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& name);

}  // namespace l0ksvm
