// Command-line front end: l0ksvm {gen,train,eval,certify,bench,boundary} [flags]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l0ksvm/cli.hpp"
#include "l0ksvm/error.hpp"
#include "l0ksvm/kernels.hpp"

namespace {

using l0ksvm::cli::Command;
using l0ksvm::cli::RunConfig;

struct Flags {
  std::string kernel = "gaussian";
  double rho = -1.0;
  double degree = 3.0, offset = 1.0, imq_c = 1.0, imq_beta = 0.5;
  std::string loss = "l01";
  std::vector<std::string> losses;
  std::string generator;
  long long m = 500;
  double noise = -1.0;
  double factor = 0.5;
  std::string noise_on = "train";
  std::string format = "json";
  bool no_standardize = false;
  bool no_shortcut = false;
};

void add_data_flags(CLI::App* app, RunConfig& cfg, Flags& f) {
  app->add_option("--data", cfg.data_path, "Dataset file (LIBSVM, or CSV by .csv extension)");
  app->add_option("--test", cfg.test_path, "Separate test file; disables the random split");
  app->add_option("--generator", f.generator, "Synthetic data: circles | moons");
  app->add_option("--m", f.m, "Generated sample count");
  app->add_option("--noise", f.noise, "Generator noise std (default 0.05 circles, 0.15 moons)");
  app->add_option("--factor", f.factor, "Inner circle radius for circles");
  app->add_option("--seed", cfg.seed, "Seed for generation, split, label noise and CV folds");
  app->add_option("--noise-rate", cfg.noise_rate, "Label noise rate r");
  app->add_option("--noise-on", f.noise_on, "Where label noise is applied: train | all");
  app->add_option("--noise-multiplier", cfg.noise_multiplier, "Flip floor(r * multiplier * n) labels");
  app->add_option("--train-frac", cfg.train_frac, "Training fraction of the random split");
  app->add_flag("--no-standardize", f.no_standardize, "Skip feature standardization");
}

void add_solver_flags(CLI::App* app, RunConfig& cfg, Flags& f) {
  app->add_option("--kernel", f.kernel, "gaussian | linear | laplacian | exponential | polynomial | inverse_multiquadric");
  app->add_option("--rho", f.rho, "Kernel scale (default 1/d)");
  app->add_option("--degree", f.degree, "Polynomial degree");
  app->add_option("--offset", f.offset, "Polynomial offset");
  app->add_option("--imq-c", f.imq_c, "Inverse multiquadric c");
  app->add_option("--imq-beta", f.imq_beta, "Inverse multiquadric beta");
  app->add_option("--C", cfg.hp.C, "Penalty C");
  app->add_option("--sigma", cfg.hp.sigma, "Augmentation penalty sigma");
  app->add_option("--iota", cfg.hp.iota, "Dual step iota");
  app->add_option("--eps", cfg.hp.eps, "Stopping tolerance");
  app->add_option("--max-iter", cfg.hp.max_iter, "Iteration cap");
  app->add_flag("--no-shortcut", f.no_shortcut, "Always solve the full c-step system");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel SVM with the l0-norm hinge loss, trained by ADMM"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags f;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  add_data_flags(gen, cfg, f);
  gen->add_option("--format", f.format, "libsvm | csv (stdout only; files use the extension)");
  gen->add_option("--out", cfg.out, "Output file");

  auto* train = app.add_subcommand("train", "Train one model");
  add_data_flags(train, cfg, f);
  add_solver_flags(train, cfg, f);
  train->add_option("--loss", f.loss, "l01 | hinge_l1 | squared_hinge_l2");
  train->add_option("--out", cfg.out, "Model JSON output");
  train->add_option("--trace", cfg.trace_out, "Per-iteration trace CSV");
  train->add_option("--save-train", cfg.save_train, "Write the processed training set (for certify)");

  auto* eval = app.add_subcommand("eval", "Accuracy of a saved model on a dataset");
  eval->add_option("--model", cfg.model_path, "Model JSON")->required();
  add_data_flags(eval, cfg, f);

  auto* certify = app.add_subcommand("certify", "KKT / proximal stationarity report for a saved model");
  certify->add_option("--model", cfg.model_path, "Model JSON")->required();
  certify->add_option("--data", cfg.data_path, "Processed training set to match against the model");
  certify->add_option("--tol", cfg.tol, "Certification tolerance");
  certify->add_option("--out", cfg.out, "Report JSON output");

  auto* bench = app.add_subcommand("bench", "Grid benchmark over C, sigma and loss kind");
  add_data_flags(bench, cfg, f);
  add_solver_flags(bench, cfg, f);
  bench->add_option("--grid-c", cfg.grid_c, "C grid")->delimiter(',');
  bench->add_option("--grid-sigma", cfg.grid_sigma, "sigma grid")->delimiter(',');
  bench->add_option("--losses", f.losses, "Loss kinds to run")->delimiter(',');
  bench->add_option("--cv-folds", cfg.cv_folds, "Folds for CV selection (0 disables)");
  bench->add_option("--threads", cfg.threads, "Worker count (overrides ZEROONE_THREADS)");
  bench->add_option("--format", f.format, "json | csv | table");
  bench->add_option("--out", cfg.out, "Output file");

  auto* boundary = app.add_subcommand("boundary", "Export the decision function on a grid");
  boundary->add_option("--model", cfg.model_path, "Model JSON")->required();
  boundary->add_option("--grid", cfg.grid_points, "Grid points per axis");
  boundary->add_option("--out", cfg.out, "Grid CSV output");
  boundary->add_option("--points-out", cfg.points_out, "Training points CSV with support flags");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) cfg.command = Command::gen;
    else if (*train) cfg.command = Command::train;
    else if (*eval) cfg.command = Command::eval;
    else if (*certify) cfg.command = Command::certify;
    else if (*bench) cfg.command = Command::bench;
    else cfg.command = Command::boundary;

    cfg.hp.kernel.family = l0ksvm::parse_kernel_family(f.kernel);
    if (f.rho > 0.0) cfg.hp.kernel.rho = f.rho;
    cfg.hp.kernel.degree = f.degree;
    cfg.hp.kernel.offset = f.offset;
    cfg.hp.kernel.imq_c = f.imq_c;
    cfg.hp.kernel.imq_beta = f.imq_beta;
    cfg.hp.strictly_pd_shortcut = !f.no_shortcut;
    cfg.loss = l0ksvm::parse_loss_kind(f.loss);
    if (!f.losses.empty()) {
      cfg.bench_losses.clear();
      for (const auto& name : f.losses) cfg.bench_losses.push_back(l0ksvm::parse_loss_kind(name));
    }
    if (!f.generator.empty()) {
      auto g = l0ksvm::cli::parse_generator(f.generator);
      g.m = static_cast<Eigen::Index>(f.m);
      g.noise = f.noise;
      g.factor = f.factor;
      cfg.generator = g;
    }
    cfg.noise_on = l0ksvm::cli::parse_noise_target(f.noise_on);
    cfg.format = f.format == "libsvm" ? l0ksvm::cli::ReportFormat::json : l0ksvm::cli::parse_format(f.format);
    cfg.standardize = !f.no_standardize;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return l0ksvm::cli::kExitInput;
  }
  return l0ksvm::cli::run(cfg, std::cout, std::cerr);
}
