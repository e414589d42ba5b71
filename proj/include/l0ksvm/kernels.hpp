#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace l0ksvm {

enum class KernelFamily { gaussian, linear, laplacian, exponential, polynomial, inverse_multiquadric };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Kernel family plus its parameters.
///
/// `rho` is the scale of the gaussian, laplacian and exponential kernels. When it is
/// left unset it resolves to 1/d for d-dimensional inputs (see `resolved`).
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  std::optional<double> rho;
  double degree = 3.0;  // polynomial
  double offset = 1.0;  // polynomial
  double imq_c = 1.0;   // inverse multiquadric: (|z - z'|^2 + c^2)^(-beta)
  double imq_beta = 0.5;

  /// True exactly for the families whose Gram matrix on distinct points is nonsingular.
  bool strictly_pd() const noexcept;

  /// Copy with `rho` filled in for dimension `dim`; throws ConfigError on invalid parameters.
  KernelSpec resolved(Eigen::Index dim) const;

  /// Throws ConfigError if any parameter is out of range. Requires `rho` to be set
  /// for the scaled families.
  void validate() const;

  std::map<std::string, double> params() const;
  static KernelSpec from_params(KernelFamily family, const std::map<std::string, double>& params);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Kernel value K(z, z2). Throws InputError on a dimension mismatch.
double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z,
                   const Eigen::Ref<const Eigen::VectorXd>& z2);

/// 64-bit FNV-1a over the shape and raw bytes of X and (optionally) y.
std::uint64_t fingerprint(const Eigen::MatrixXd& X, const Eigen::VectorXd* y = nullptr);

/// Immutable m x m kernel matrix over the rows of a sample matrix.
class GramMatrix {
 public:
  GramMatrix(Eigen::MatrixXd entries, KernelSpec spec, std::uint64_t source_fingerprint)
      : entries_(std::move(entries)), spec_(std::move(spec)), source_(source_fingerprint) {}

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  const KernelSpec& spec() const noexcept { return spec_; }
  std::uint64_t source_fingerprint() const noexcept { return source_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

  /// Principal submatrix on `rows` (used for cross-validation folds).
  GramMatrix subset(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::MatrixXd entries_;
  KernelSpec spec_;
  std::uint64_t source_;
};

/// Gram matrix of the rows of X. Rows of the upper triangle are filled in parallel
/// and mirrored, so the result is exactly symmetric.
GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Single-threaded reference for `gram_matrix`; same entries bit for bit.
GramMatrix gram_matrix_serial(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Rectangular kernel table: result(i, j) = K(A.row(i), B.row(j)). Parallel over rows of A.
Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace l0ksvm
