#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "l0ksvm/data.hpp"
#include "l0ksvm/kernels.hpp"
#include "l0ksvm/loss.hpp"

namespace l0ksvm {

struct Hyperparams {
  double C = 1.0;
  double sigma = 1.0;  // augmentation penalty
  double iota = 1.0;   // dual step
  double eps = 1e-3;
  int max_iter = 2000;
  KernelSpec kernel{};
  /// Use the reduced system [(1/sigma) I + K] c = diag(y) xi. Only honored for strictly
  /// positive definite kernels; otherwise the full system is solved.
  bool strictly_pd_shortcut = true;

  void validate() const;
};

/// Iterates of the solver plus the intermediate vectors of the last completed iteration.
struct AdmmState {
  Eigen::VectorXd c;
  double b = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  std::vector<Eigen::Index> gamma_k;  // coordinates zeroed by the last u-step
  Eigen::VectorXd eta;
  Eigen::VectorXd xi;
  Eigen::VectorXd r;
  Eigen::VectorXd omega;
  int iter = 0;

  static AdmmState zeros(Eigen::Index m);
};

struct Betas {
  double beta1 = 0.0;
  double beta2 = 0.0;  // signed; the stopping rule uses |beta2|
  double beta3 = 0.0;
  double beta4 = 0.0;
  double stop_value() const;
};

struct TraceRecord {
  int iter = 0;
  Betas betas;
  double objective = 0.0;
  std::size_t gamma_size = 0;
};

enum class Termination { tolerance_met, max_iter };
std::string to_string(Termination t);

struct SolveTrace {
  std::vector<TraceRecord> records;
  Termination termination = Termination::max_iter;

  /// CSV with columns iter,beta1,beta2,beta3,beta4,objective,gamma_size.
  std::string to_csv() const;
};

struct SolveResult {
  AdmmState state;
  SolveTrace trace;
};

/// Called after every completed iteration with the fresh state.
using IterationObserver = std::function<void(const AdmmState&)>;

/// eta = 1 - diag(y) K c - b y - lambda / sigma.
Eigen::VectorXd compute_eta(const AdmmState& state, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double sigma);

struct UStep {
  Eigen::VectorXd u;
  std::vector<Eigen::Index> gamma_k;
};

/// u = prox_l01(eta) with step 1/sigma; gamma_k lists the coordinates in (0, sqrt(2C/sigma)].
UStep update_u(const Eigen::VectorXd& eta, double C, double sigma);

/// Linear solver for the c-step. The system matrix depends only on (K, sigma), so it is
/// factored once and reused across iterations.
class CStepSolver {
 public:
  CStepSolver(const Eigen::MatrixXd& K, double sigma, bool use_shortcut);

  /// Solution of the c-step for the given xi (rhs uses diag(y) xi).
  Eigen::VectorXd solve(const Eigen::VectorXd& y, const Eigen::VectorXd& xi) const;

  bool shortcut() const noexcept { return shortcut_; }
  /// Ridge added to the full system when it was found rank deficient (0 otherwise).
  double ridge() const noexcept { return ridge_; }

 private:
  const Eigen::MatrixXd& K_;
  double sigma_;
  bool shortcut_;
  double ridge_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_ldlt_ = false;
};

/// xi = 1 - u_next - b y - lambda / sigma.
Eigen::VectorXd compute_xi(const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, double b,
                           const Eigen::VectorXd& lambda, double sigma);

/// One-shot c-step: solves [K + sigma K K] c = sigma K diag(y) xi (or the reduced system).
Eigen::VectorXd update_c(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, double b,
                         const Eigen::VectorXd& lambda, double sigma, bool strictly_pd_shortcut);

/// || [K + sigma K K] c - sigma K diag(y) xi ||, the defining residual of the c-step.
double c_step_residual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& xi,
                       const Eigen::VectorXd& c, double sigma);

/// b = <y, r> / m with r = 1 - u_next - diag(y) K c_next - lambda / sigma.
double update_b(const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, const Eigen::MatrixXd& K,
                const Eigen::VectorXd& c_next, const Eigen::VectorXd& lambda, double sigma);

/// lambda + iota sigma omega on gamma_k, exactly zero elsewhere.
Eigen::VectorXd update_lambda(const Eigen::VectorXd& lambda, const Eigen::VectorXd& omega_next,
                              const std::vector<Eigen::Index>& gamma_k, double iota, double sigma);

/// Scaled residuals of the four stationarity conditions at (c, b, u, lambda), with the
/// prox residual taken for `kind`.
Betas betas(const AdmmState& state, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double sigma,
            LossKind kind = LossKind::l01);

/// ADMM for the l0-norm hinge loss: u-step, c-step, b-step, masked dual step, repeated
/// until max(beta1, |beta2|, beta3, beta4) < eps or max_iter iterations. Starts from
/// all zeros unless `init` is given.
SolveResult solve(const Dataset& dataset, const Hyperparams& hp, const std::optional<AdmmState>& init = std::nullopt);

/// Same, against a precomputed Gram matrix (shared read-only across concurrent solves).
SolveResult solve(const GramMatrix& gram, const Eigen::VectorXd& y, const Hyperparams& hp,
                  const std::optional<AdmmState>& init = std::nullopt, const IterationObserver& observer = {});

namespace detail {
/// Shared iteration skeleton; `kind` selects the u-step prox and the dual masking policy.
SolveResult run_admm(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Hyperparams& hp, LossKind kind,
                     const std::optional<AdmmState>& init, const IterationObserver& observer);
}  // namespace detail

}  // namespace l0ksvm
