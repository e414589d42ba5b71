#include "l0ksvm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "l0ksvm/baselines.hpp"
#include "l0ksvm/error.hpp"
#include "l0ksvm/prox.hpp"

namespace l0ksvm {

namespace {

Eigen::VectorXd apply_prox(LossKind kind, const Eigen::VectorXd& v, const ProxParams& p) {
  switch (kind) {
    case LossKind::l01: return prox_l01(v, p);
    case LossKind::hinge_l1: return prox_hinge(v, p);
    case LossKind::squared_hinge_l2: return prox_sqhinge(v, p);
  }
  return v;
}

Betas betas_from(const AdmmState& s, const Eigen::VectorXd& Kc, const Eigen::VectorXd& y, double C, double sigma,
                 LossKind kind) {
  const auto m = static_cast<double>(y.size());
  Betas out;
  out.beta1 = (s.c + y.cwiseProduct(s.lambda)).norm() / (1.0 + s.c.norm() + s.lambda.norm());
  out.beta2 = y.dot(s.lambda) / m;
  out.beta3 = (s.u + y.cwiseProduct(Kc) + s.b * y - Eigen::VectorXd::Ones(y.size())).norm() / std::sqrt(m);
  const Eigen::VectorXd shifted = s.u - s.lambda / sigma;
  out.beta4 = (s.u - apply_prox(kind, shifted, {1.0 / sigma, C})).norm() / (1.0 + s.u.norm());
  return out;
}

void check_problem(const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
  if (K.rows() != K.cols() || K.rows() != y.size()) throw InputError("solve: Gram matrix and labels disagree in size");
  bool pos = false, neg = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) pos = true;
    else if (y[i] == -1.0) neg = true;
    else throw InputError("solve: labels must be +-1");
  }
  if (y.size() < 2 || !pos || !neg) throw InputError("solve: both classes must be present");
}

}  // namespace

void Hyperparams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(C)) throw ConfigError("C must be > 0");
  if (!positive(sigma)) throw ConfigError("sigma must be > 0");
  if (!positive(iota)) throw ConfigError("iota must be > 0");
  if (!positive(eps)) throw ConfigError("eps must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

AdmmState AdmmState::zeros(Eigen::Index m) {
  AdmmState s;
  s.c = Eigen::VectorXd::Zero(m);
  s.u = Eigen::VectorXd::Zero(m);
  s.lambda = Eigen::VectorXd::Zero(m);
  s.eta = Eigen::VectorXd::Zero(m);
  s.xi = Eigen::VectorXd::Zero(m);
  s.r = Eigen::VectorXd::Zero(m);
  s.omega = Eigen::VectorXd::Zero(m);
  return s;
}

double Betas::stop_value() const { return std::max({beta1, std::abs(beta2), beta3, beta4}); }

std::string to_string(Termination t) { return t == Termination::tolerance_met ? "tolerance_met" : "max_iter"; }

std::string SolveTrace::to_csv() const {
  std::string out = "iter,beta1,beta2,beta3,beta4,objective,gamma_size\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%zu\n", r.iter, r.betas.beta1, r.betas.beta2,
                  r.betas.beta3, r.betas.beta4, r.objective, r.gamma_size);
    out += buf;
  }
  return out;
}

Eigen::VectorXd compute_eta(const AdmmState& state, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double sigma) {
  const Eigen::VectorXd Kc = K * state.c;
  return Eigen::VectorXd::Ones(y.size()) - y.cwiseProduct(Kc) - state.b * y - state.lambda / sigma;
}

UStep update_u(const Eigen::VectorXd& eta, double C, double sigma) {
  const ProxParams p{1.0 / sigma, C};
  UStep step{prox_l01(eta, p), {}};
  const double tau = p.threshold();
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    if (eta[i] > 0.0 && eta[i] <= tau) step.gamma_k.push_back(i);
  return step;
}

CStepSolver::CStepSolver(const Eigen::MatrixXd& K, double sigma, bool use_shortcut)
    : K_(K), sigma_(sigma), shortcut_(use_shortcut) {
  const Eigen::Index m = K.rows();
  if (shortcut_) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += 1.0 / sigma;
    llt_.compute(A);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("c-step: Cholesky of (1/sigma) I + K failed", 0.0);
    return;
  }
  Eigen::MatrixXd A = K + sigma * (K * K);
  A = 0.5 * (A + A.transpose());  // K K is symmetric only up to rounding
  ldlt_.compute(A);
  bool deficient = ldlt_.info() != Eigen::Success;
  if (!deficient) {
    const auto d = ldlt_.vectorD().cwiseAbs();
    deficient = d.minCoeff() <= 1e-12 * d.maxCoeff() || !ldlt_.isPositive();
  }
  if (!deficient) {
    use_ldlt_ = true;
    return;
  }
  const double rcond = ldlt_.info() == Eigen::Success ? ldlt_.rcond() : 0.0;
  ridge_ = 1e-10 * K.trace() / static_cast<double>(m);
  if (!(ridge_ > 0.0)) ridge_ = 1e-10;
  A.diagonal().array() += ridge_;
  llt_.compute(A);
  if (llt_.info() != Eigen::Success) throw NumericalError("c-step: factorization failed after ridge fallback", rcond);
}

Eigen::VectorXd CStepSolver::solve(const Eigen::VectorXd& y, const Eigen::VectorXd& xi) const {
  const Eigen::VectorXd yxi = y.cwiseProduct(xi);
  if (shortcut_) return llt_.solve(yxi);
  const Eigen::VectorXd rhs = sigma_ * (K_ * yxi);
  return use_ldlt_ ? Eigen::VectorXd(ldlt_.solve(rhs)) : Eigen::VectorXd(llt_.solve(rhs));
}

Eigen::VectorXd compute_xi(const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, double b,
                           const Eigen::VectorXd& lambda, double sigma) {
  return Eigen::VectorXd::Ones(y.size()) - u_next - b * y - lambda / sigma;
}

Eigen::VectorXd update_c(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, double b,
                         const Eigen::VectorXd& lambda, double sigma, bool strictly_pd_shortcut) {
  const CStepSolver solver(K, sigma, strictly_pd_shortcut);
  return solver.solve(y, compute_xi(y, u_next, b, lambda, sigma));
}

double c_step_residual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Eigen::VectorXd& xi,
                       const Eigen::VectorXd& c, double sigma) {
  const Eigen::VectorXd Kc = K * c;
  return (Kc + sigma * (K * Kc) - sigma * (K * y.cwiseProduct(xi))).norm();
}

double update_b(const Eigen::VectorXd& y, const Eigen::VectorXd& u_next, const Eigen::MatrixXd& K,
                const Eigen::VectorXd& c_next, const Eigen::VectorXd& lambda, double sigma) {
  const Eigen::VectorXd r =
      Eigen::VectorXd::Ones(y.size()) - u_next - y.cwiseProduct(K * c_next) - lambda / sigma;
  return y.dot(r) / static_cast<double>(y.size());
}

Eigen::VectorXd update_lambda(const Eigen::VectorXd& lambda, const Eigen::VectorXd& omega_next,
                              const std::vector<Eigen::Index>& gamma_k, double iota, double sigma) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lambda.size());
  for (const auto i : gamma_k) out[i] = lambda[i] + iota * sigma * omega_next[i];
  return out;
}

Betas betas(const AdmmState& state, const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double sigma,
            LossKind kind) {
  return betas_from(state, K * state.c, y, C, sigma, kind);
}

namespace detail {

SolveResult run_admm(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const Hyperparams& hp, LossKind kind,
                     const std::optional<AdmmState>& init, const IterationObserver& observer) {
  hp.validate();
  check_problem(K, y);
  const Eigen::Index m = y.size();
  const double sigma = hp.sigma;
  const ProxParams prox{1.0 / sigma, hp.C};
  const double tau = prox.threshold();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);

  SolveResult res;
  AdmmState& s = res.state;
  if (init) {
    s = *init;
    if (s.c.size() != m || s.u.size() != m || s.lambda.size() != m)
      throw InputError("solve: initial state has the wrong dimension");
  } else {
    s = AdmmState::zeros(m);
  }
  s.iter = 0;

  const CStepSolver csolver(K, sigma, hp.strictly_pd_shortcut && hp.kernel.strictly_pd());
  Eigen::VectorXd Kc = K * s.c;
  res.trace.records.reserve(static_cast<std::size_t>(hp.max_iter));

  for (int k = 1; k <= hp.max_iter; ++k) {
    // u-step
    s.eta = ones - y.cwiseProduct(Kc) - s.b * y - s.lambda / sigma;
    s.gamma_k.clear();
    if (kind == LossKind::l01) {
      s.u = s.eta;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (s.eta[i] > 0.0 && s.eta[i] <= tau) {
          s.u[i] = 0.0;
          s.gamma_k.push_back(i);
        }
      }
    } else {
      s.u = apply_prox(kind, s.eta, prox);
    }

    // c-step
    s.xi = ones - s.u - s.b * y - s.lambda / sigma;
    s.c = csolver.solve(y, s.xi);
    Kc = K * s.c;

    // b-step
    s.r = ones - s.u - y.cwiseProduct(Kc) - s.lambda / sigma;
    s.b = y.dot(s.r) / static_cast<double>(m);

    // dual step
    s.omega = s.u + y.cwiseProduct(Kc) + s.b * y - ones;
    if (kind == LossKind::l01) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(m);
      for (const auto i : s.gamma_k) next[i] = s.lambda[i] + hp.iota * sigma * s.omega[i];
      s.lambda = std::move(next);
    } else {
      s.lambda += hp.iota * sigma * s.omega;
      // Baselines have no zeroing set; record the current support estimate instead.
      for (Eigen::Index i = 0; i < m; ++i)
        if (std::abs(s.lambda[i]) > 1e-6) s.gamma_k.push_back(i);
    }
    s.iter = k;

    TraceRecord rec;
    rec.iter = k;
    rec.betas = betas_from(s, Kc, y, hp.C, sigma, kind);
    rec.objective = 0.5 * s.c.dot(Kc) + hp.C * loss_term(kind, s.u);
    rec.gamma_size = s.gamma_k.size();
    res.trace.records.push_back(rec);
    if (observer) observer(s);

    if (rec.betas.stop_value() < hp.eps) {
      res.trace.termination = Termination::tolerance_met;
      return res;
    }
  }
  res.trace.termination = Termination::max_iter;
  return res;
}

}  // namespace detail

SolveResult solve(const GramMatrix& gram, const Eigen::VectorXd& y, const Hyperparams& hp,
                  const std::optional<AdmmState>& init, const IterationObserver& observer) {
  Hyperparams resolved = hp;
  resolved.kernel = gram.spec();
  return detail::run_admm(gram.entries(), y, resolved, LossKind::l01, init, observer);
}

SolveResult solve(const Dataset& dataset, const Hyperparams& hp, const std::optional<AdmmState>& init) {
  dataset.validate_for_training();
  hp.validate();
  const GramMatrix gram = gram_matrix(hp.kernel, dataset.X);
  return solve(gram, dataset.y, hp, init);
}

}  // namespace l0ksvm
