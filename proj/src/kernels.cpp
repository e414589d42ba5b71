#include "l0ksvm/kernels.hpp"

#include <cmath>
#include <cstring>

#include "l0ksvm/error.hpp"

namespace l0ksvm {

namespace {

bool uses_rho(KernelFamily f) {
  return f == KernelFamily::gaussian || f == KernelFamily::laplacian || f == KernelFamily::exponential;
}

// Assumes a validated spec and equal dimensions.
double kernel_value(const KernelSpec& spec, const double* a, const double* b, Eigen::Index d) {
  switch (spec.family) {
    case KernelFamily::gaussian: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return std::exp(-*spec.rho * s);
    }
    case KernelFamily::laplacian: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) s += std::abs(a[k] - b[k]);
      return std::exp(-*spec.rho * s);
    }
    case KernelFamily::exponential: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return std::exp(-*spec.rho * std::sqrt(s));
    }
    case KernelFamily::linear: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) s += a[k] * b[k];
      return s;
    }
    case KernelFamily::polynomial: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) s += a[k] * b[k];
      return std::pow(s + spec.offset, spec.degree);
    }
    case KernelFamily::inverse_multiquadric: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return std::pow(s + spec.imq_c * spec.imq_c, -spec.imq_beta);
    }
  }
  return 0.0;
}

void fill_row(const KernelSpec& spec, const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& rows,
              Eigen::MatrixXd& out, Eigen::Index i) {
  const Eigen::Index d = rows.cols();
  for (Eigen::Index j = i; j < rows.rows(); ++j) out(i, j) = kernel_value(spec, rows.row(i).data(), rows.row(j).data(), d);
}

void mirror(Eigen::MatrixXd& out) {
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = j + 1; i < out.rows(); ++i) out(i, j) = out(j, i);
}

KernelSpec prepare(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw InputError("gram_matrix: need at least one sample");
  return spec.resolved(X.cols());
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::linear: return "linear";
    case KernelFamily::laplacian: return "laplacian";
    case KernelFamily::exponential: return "exponential";
    case KernelFamily::polynomial: return "polynomial";
    case KernelFamily::inverse_multiquadric: return "inverse_multiquadric";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  for (auto f : {KernelFamily::gaussian, KernelFamily::linear, KernelFamily::laplacian, KernelFamily::exponential,
                 KernelFamily::polynomial, KernelFamily::inverse_multiquadric})
    if (to_string(f) == name) return f;
  if (name == "rbf") return KernelFamily::gaussian;
  if (name == "imq") return KernelFamily::inverse_multiquadric;
  throw ConfigError("unknown kernel family '" + name + "'");
}

bool KernelSpec::strictly_pd() const noexcept {
  return family != KernelFamily::linear && family != KernelFamily::polynomial;
}

void KernelSpec::validate() const {
  if (uses_rho(family)) {
    if (!rho) throw ConfigError(to_string(family) + " kernel: rho is unset");
    if (!(*rho > 0.0) || !std::isfinite(*rho)) throw ConfigError(to_string(family) + " kernel: rho must be > 0");
  }
  if (family == KernelFamily::polynomial) {
    if (!(degree >= 1.0)) throw ConfigError("polynomial kernel: degree must be >= 1");
    if (!(offset >= 0.0)) throw ConfigError("polynomial kernel: offset must be >= 0");
  }
  if (family == KernelFamily::inverse_multiquadric) {
    if (!(imq_c > 0.0) || !(imq_beta > 0.0))
      throw ConfigError("inverse multiquadric kernel: c and beta must be > 0");
  }
}

KernelSpec KernelSpec::resolved(Eigen::Index dim) const {
  KernelSpec out = *this;
  if (uses_rho(family) && !out.rho) {
    if (dim < 1) throw ConfigError("cannot default rho = 1/d for d = 0");
    out.rho = 1.0 / static_cast<double>(dim);
  }
  out.validate();
  return out;
}

std::map<std::string, double> KernelSpec::params() const {
  std::map<std::string, double> p;
  switch (family) {
    case KernelFamily::gaussian:
    case KernelFamily::laplacian:
    case KernelFamily::exponential:
      if (rho) p["rho"] = *rho;
      break;
    case KernelFamily::polynomial:
      p["degree"] = degree;
      p["offset"] = offset;
      break;
    case KernelFamily::inverse_multiquadric:
      p["c"] = imq_c;
      p["beta"] = imq_beta;
      break;
    case KernelFamily::linear: break;
  }
  return p;
}

KernelSpec KernelSpec::from_params(KernelFamily family, const std::map<std::string, double>& params) {
  KernelSpec s;
  s.family = family;
  for (const auto& [key, value] : params) {
    if (key == "rho") s.rho = value;
    else if (key == "degree") s.degree = value;
    else if (key == "offset") s.offset = value;
    else if (key == "c") s.imq_c = value;
    else if (key == "beta") s.imq_beta = value;
    else throw ConfigError("unknown kernel parameter '" + key + "'");
  }
  return s;
}

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z,
                   const Eigen::Ref<const Eigen::VectorXd>& z2) {
  if (z.size() != z2.size())
    throw InputError("eval_kernel: dimension mismatch (" + std::to_string(z.size()) + " vs " +
                     std::to_string(z2.size()) + ")");
  spec.validate();
  const Eigen::VectorXd a = z, b = z2;
  return kernel_value(spec, a.data(), b.data(), a.size());
}

std::uint64_t fingerprint(const Eigen::MatrixXd& X, const Eigen::VectorXd* y) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t shape[3] = {X.rows(), X.cols(), y ? y->size() : -1};
  mix(shape, sizeof(shape));
  mix(X.data(), sizeof(double) * static_cast<std::size_t>(X.size()));
  if (y) mix(y->data(), sizeof(double) * static_cast<std::size_t>(y->size()));
  return h;
}

GramMatrix GramMatrix::subset(const std::vector<Eigen::Index>& rows) const {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd sub(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) sub(i, j) = entries_(rows[i], rows[j]);
  return GramMatrix(std::move(sub), spec_, 0);
}

GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  const KernelSpec s = prepare(spec, X);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = X;
  const Eigen::Index m = X.rows();
  Eigen::MatrixXd K(m, m);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < m; ++i) fill_row(s, rows, K, i);
  mirror(K);
  return GramMatrix(std::move(K), s, fingerprint(X));
}

GramMatrix gram_matrix_serial(const KernelSpec& spec, const Eigen::MatrixXd& X) {
  const KernelSpec s = prepare(spec, X);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = X;
  const Eigen::Index m = X.rows();
  Eigen::MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) fill_row(s, rows, K, i);
  mirror(K);
  return GramMatrix(std::move(K), s, fingerprint(X));
}

Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols())
    throw InputError("cross_kernel: dimension mismatch (" + std::to_string(A.cols()) + " vs " +
                     std::to_string(B.cols()) + ")");
  spec.validate();
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> ra = A, rb = B;
  Eigen::MatrixXd out(A.rows(), B.rows());
  const Eigen::Index d = A.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < ra.rows(); ++i)
    for (Eigen::Index j = 0; j < rb.rows(); ++j) out(i, j) = kernel_value(spec, ra.row(i).data(), rb.row(j).data(), d);
  return out;
}

}  // namespace l0ksvm
