#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace l0ksvm {

/// Per-feature statistics used by `standardize`, taken from the training split.
struct ScalingStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
  std::vector<bool> constant;  // zero-variance features, passed through untouched
  bool any_constant() const;
};

/// Labeled samples: one row of X per sample, labels in {-1, +1}.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::string name;
  std::optional<ScalingStats> scaling;

  Eigen::Index size() const noexcept { return X.rows(); }
  Eigen::Index dim() const noexcept { return X.cols(); }
  std::uint64_t fingerprint() const;

  /// Throws InputError unless labels are +-1, entries are finite and shapes agree.
  void validate() const;
  /// As `validate`, and additionally requires both classes to be present.
  void validate_for_training() const;

  Dataset subset(const std::vector<Eigen::Index>& rows) const;
};

/// Parse LIBSVM text (`<label> idx:val ...`, 1-based strictly increasing indices).
/// Missing indices are zero. If exactly two distinct raw labels occur, the larger maps
/// to +1 and the smaller to -1. `min_dim` pads the feature count.
Dataset parse_libsvm(const std::string& text, Eigen::Index min_dim = 0);

/// LIBSVM text with 17 significant digits; zero entries are omitted.
std::string write_libsvm(const Dataset& ds);

/// CSV with header `x1,...,xd,label` and 17 significant digits.
std::string write_csv(const Dataset& ds);
Dataset parse_csv(const std::string& text);

/// Load by extension: `.csv` as CSV, anything else as LIBSVM. Throws InputError naming
/// the path when the file cannot be read.
Dataset read_dataset(const std::string& path, Eigen::Index min_dim = 0);
void write_dataset(const std::string& path, const Dataset& ds);

struct Standardized {
  Dataset train;
  Dataset test;
  ScalingStats stats;
};

/// Scale every feature to zero mean and unit (population) standard deviation using the
/// training statistics only; the same affine map is applied to `test`.
Standardized standardize(const Dataset& train, const Dataset& test);

/// Seeded uniform shuffle followed by a prefix split. Both parts must keep both classes.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Two interleaving half circles: ceil(m/2) points on (cos t, sin t) labeled +1 and
/// floor(m/2) on (1 - cos t, 0.5 - sin t) labeled -1, t on a uniform grid of [0, pi].
Dataset gen_double_moons(Eigen::Index m, double noise_std, std::uint64_t seed);

/// Outer unit circle (+1) and inner circle of radius `factor` (-1), angles on a uniform grid.
Dataset gen_double_circles(Eigen::Index m, double factor, double noise_std, std::uint64_t seed);

/// Negate floor(rate * multiplier * n) distinct, uniformly chosen labels.
Dataset flip_labels(const Dataset& ds, double rate, std::uint64_t seed, double multiplier = 1.0);

}  // namespace l0ksvm
