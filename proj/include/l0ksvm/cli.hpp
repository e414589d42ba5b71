#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l0ksvm/admm.hpp"
#include "l0ksvm/data.hpp"
#include "l0ksvm/loss.hpp"
#include "l0ksvm/model.hpp"

namespace l0ksvm::cli {

enum class Command { gen, train, eval, certify, bench, boundary };
enum class ReportFormat { json, csv, table };
enum class NoiseTarget { train, all };

ReportFormat parse_format(const std::string& name);
NoiseTarget parse_noise_target(const std::string& name);

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;      // I/O, parse, configuration and input errors
inline constexpr int kExitNumerical = 3;  // solver factorization failure

/// Synthetic data source. A negative noise picks the per-generator default
/// (0.05 for circles, 0.15 for moons).
struct GeneratorSpec {
  std::string kind = "circles";  // circles | moons
  Eigen::Index m = 500;
  double noise = -1.0;
  double factor = 0.5;

  double effective_noise() const;
  Dataset generate(std::uint64_t seed) const;
};

GeneratorSpec parse_generator(const std::string& kind);

struct RunConfig {
  Command command = Command::train;
  std::string data_path;
  std::string test_path;
  std::optional<GeneratorSpec> generator;

  Hyperparams hp{};
  LossKind loss = LossKind::l01;
  std::vector<double> grid_c{0.5, 1, 2, 4, 8, 16, 32, 64};
  std::vector<double> grid_sigma{1, 2};
  std::vector<LossKind> bench_losses{LossKind::l01, LossKind::hinge_l1, LossKind::squared_hinge_l2};
  int cv_folds = 5;  // 0 or 1 disables cross-validation in bench

  std::uint64_t seed = 0;
  double noise_rate = 0.0;
  NoiseTarget noise_on = NoiseTarget::train;
  double noise_multiplier = 1.0;
  double train_frac = 0.6;
  bool standardize = true;

  ReportFormat format = ReportFormat::json;
  std::string out;         // primary output (model, report, table, grid, dataset)
  std::string trace_out;   // train: per-iteration CSV
  std::string model_path;  // eval / certify / boundary input
  std::string save_train;  // train: processed training set
  std::string points_out;  // boundary: training points with support flags
  int grid_points = 100;   // boundary: g x g
  double tol = 1e-2;       // certify
  int threads = 0;         // 0: ZEROONE_THREADS or the OpenMP default
};

/// Train/test pair after splitting, label noise and standardization.
struct PreparedData {
  Dataset train;
  Dataset test;
};

PreparedData prepare_data(const RunConfig& config);

struct TrainOutcome {
  TrainedModel model;
  SolveTrace trace;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double cpu_seconds = 0.0;
};

TrainOutcome train_once(const PreparedData& data, const Hyperparams& hp, LossKind loss);

struct BenchRow {
  std::string dataset;
  double noise_rate = 0.0;
  LossKind loss = LossKind::l01;
  double C = 0.0;
  double sigma = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  std::optional<double> cv_acc;
  std::size_t nsv = 0;
  double cpu_seconds = 0.0;
  int iters = 0;
  std::string termination;
  bool selected_paper = false;  // best test accuracy (uses the test split for selection)
  bool selected_cv = false;     // best k-fold accuracy on the training split
  std::string error;            // non-empty when the run failed
};

struct BenchTable {
  std::vector<BenchRow> rows;

  /// Row marked for `kind` under the given policy, if any.
  const BenchRow* selected(LossKind kind, bool cv) const;
};

BenchTable run_bench(const RunConfig& config);
std::string bench_to_json(const BenchTable& table);
BenchTable bench_from_json(const std::string& text);
std::string bench_to_csv(const BenchTable& table);
std::string bench_to_text(const BenchTable& table);

struct BoundaryGrid {
  Eigen::MatrixXd points;  // g*g rows of (x1, x2)
  Eigen::VectorXd decision;
};

/// Regular g x g grid over the bounding box of the model's training inputs, padded by
/// 10% of the extent on each side.
BoundaryGrid boundary_grid(const TrainedModel& model, int g);

std::string certify_json(const TrainedModel& model, double tol);

int cmd_gen(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_certify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_boundary(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatch on `config.command`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace l0ksvm::cli
