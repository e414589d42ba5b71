#include "l0ksvm/cli.hpp"

#include <omp.h>
#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "l0ksvm/baselines.hpp"
#include "l0ksvm/error.hpp"
#include "l0ksvm/kernels.hpp"
#include "l0ksvm/stationarity.hpp"

namespace l0ksvm::cli {

using nlohmann::json;

namespace {

// Independent streams for the generator, the split, label noise and CV folds.
constexpr std::uint64_t kSplitStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseStream = 0xC2B2AE3D27D4EB4FULL;
constexpr std::uint64_t kTestNoiseStream = 0x165667B19E3779F9ULL;
constexpr std::uint64_t kFoldStream = 0x27D4EB2F165667C5ULL;

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

int worker_count(const RunConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("ZEROONE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, omp_get_max_threads());
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

std::string fmt(double v, int digits = 17) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::runtime_error& e) {  // InputError, ConfigError, ParseError
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

Eigen::VectorXd train_predictions(const GramMatrix& gram, const TrainedModel& model) {
  return sign_labels((gram.entries() * model.c).array() + model.b);
}

json report_to_json(const StationarityReport& r) {
  json j;
  j["res_stationary"] = r.res_stationary;
  j["res_dual_balance"] = r.res_dual_balance;
  j["res_feasibility"] = r.res_feasibility;
  j["tolerance"] = r.tolerance;
  if (r.gamma_used) {
    j["is_prox_stationary"] = r.is_prox_stationary;
    j["gamma_used"] = *r.gamma_used;
    j["res_prox"] = r.res_prox.value_or(0.0);
  }
  if (r.subdiff_ok) {
    j["is_kkt"] = r.is_kkt;
    j["res_subdiff"] = r.res_subdiff.value_or(0.0);
    j["subdiff_ok"] = *r.subdiff_ok;
  }
  return j;
}

struct Job {
  LossKind loss;
  double C;
  double sigma;
};

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "table" || name == "text" || name == "text-table") return ReportFormat::table;
  throw ConfigError("unknown format '" + name + "'");
}

NoiseTarget parse_noise_target(const std::string& name) {
  if (name == "train") return NoiseTarget::train;
  if (name == "all") return NoiseTarget::all;
  throw ConfigError("unknown noise target '" + name + "' (expected train or all)");
}

double GeneratorSpec::effective_noise() const {
  if (noise >= 0.0) return noise;
  return kind == "moons" ? 0.15 : 0.05;
}

Dataset GeneratorSpec::generate(std::uint64_t seed) const {
  if (kind == "circles") return gen_double_circles(m, factor, effective_noise(), seed);
  if (kind == "moons") return gen_double_moons(m, effective_noise(), seed);
  throw ConfigError("unknown generator '" + kind + "'");
}

GeneratorSpec parse_generator(const std::string& kind) {
  GeneratorSpec g;
  if (kind == "circles" || kind == "double_circles") g.kind = "circles";
  else if (kind == "moons" || kind == "double_moons") g.kind = "moons";
  else throw ConfigError("unknown generator '" + kind + "'");
  return g;
}

PreparedData prepare_data(const RunConfig& config) {
  Dataset full;
  std::optional<Dataset> test_file;
  if (config.generator) {
    full = config.generator->generate(config.seed);
  } else {
    if (config.data_path.empty()) throw InputError("no dataset given (use --data or --generator)");
    full = read_dataset(config.data_path);
    if (!config.test_path.empty()) {
      test_file = read_dataset(config.test_path, full.dim());
      if (test_file->dim() > full.dim()) {
        const std::string name = full.name;
        full = read_dataset(config.data_path, test_file->dim());
        full.name = name;
      }
    }
  }
  full.validate();

  PreparedData out;
  if (config.noise_on == NoiseTarget::all && config.noise_rate > 0.0) {
    full = flip_labels(full, config.noise_rate, config.seed ^ kNoiseStream, config.noise_multiplier);
    if (test_file)
      *test_file = flip_labels(*test_file, config.noise_rate, config.seed ^ kTestNoiseStream, config.noise_multiplier);
  }
  if (test_file) {
    out.train = std::move(full);
    out.test = std::move(*test_file);
  } else {
    auto parts = split(full, config.train_frac, config.seed ^ kSplitStream);
    out.train = std::move(parts.first);
    out.test = std::move(parts.second);
  }
  if (config.noise_on == NoiseTarget::train && config.noise_rate > 0.0)
    out.train = flip_labels(out.train, config.noise_rate, config.seed ^ kNoiseStream, config.noise_multiplier);
  if (config.standardize) {
    auto s = standardize(out.train, out.test);
    out.train = std::move(s.train);
    out.test = std::move(s.test);
  }
  out.train.validate_for_training();
  return out;
}

TrainOutcome train_once(const PreparedData& data, const Hyperparams& hp, LossKind loss) {
  const double t0 = thread_cpu_seconds();
  const GramMatrix gram = gram_matrix(hp.kernel, data.train.X);
  BaselineResult res = solve_baseline(gram, data.train, hp, loss);
  TrainOutcome out;
  out.cpu_seconds = thread_cpu_seconds() - t0;
  out.train_acc = accuracy(train_predictions(gram, res.model), data.train.y);
  out.test_acc = data.test.size() > 0 ? accuracy(predict(res.model, data.test.X), data.test.y) : 0.0;
  out.model = std::move(res.model);
  out.trace = std::move(res.trace);
  return out;
}

const BenchRow* BenchTable::selected(LossKind kind, bool cv) const {
  for (const auto& r : rows)
    if (r.loss == kind && (cv ? r.selected_cv : r.selected_paper)) return &r;
  return nullptr;
}

BenchTable run_bench(const RunConfig& config) {
  if (config.grid_c.empty() || config.grid_sigma.empty() || config.bench_losses.empty())
    throw ConfigError("bench: grids and loss list must be nonempty");
  const PreparedData data = prepare_data(config);
  Hyperparams base = config.hp;
  base.kernel = base.kernel.resolved(data.train.dim());
  const GramMatrix gram = gram_matrix(base.kernel, data.train.X);
  const Eigen::MatrixXd K_test = cross_kernel(base.kernel, data.test.X, data.train.X);

  std::vector<Job> jobs;
  for (const auto kind : config.bench_losses)
    for (const double C : config.grid_c)
      for (const double sigma : config.grid_sigma) jobs.push_back({kind, C, sigma});

  // CV folds over the training split, shared by every job.
  std::vector<std::vector<Eigen::Index>> folds;
  if (config.cv_folds >= 2) {
    const Eigen::Index n = data.train.size();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::mt19937_64 rng(config.seed ^ kFoldStream);
    std::shuffle(perm.begin(), perm.end(), rng);
    folds.resize(static_cast<std::size_t>(config.cv_folds));
    for (std::size_t k = 0; k < perm.size(); ++k) folds[k % folds.size()].push_back(perm[k]);
  }

  BenchTable table;
  table.rows.resize(jobs.size());
  const std::string name = data.train.name.empty() ? "dataset" : data.train.name;

#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(config))
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    BenchRow& row = table.rows[k];
    row.dataset = name;
    row.noise_rate = config.noise_rate;
    row.loss = job.loss;
    row.C = job.C;
    row.sigma = job.sigma;
    try {
      Hyperparams hp = base;
      hp.C = job.C;
      hp.sigma = job.sigma;
      const double t0 = thread_cpu_seconds();
      const BaselineResult res = solve_baseline(gram, data.train, hp, job.loss);
      row.cpu_seconds = thread_cpu_seconds() - t0;
      row.train_acc = accuracy(train_predictions(gram, res.model), data.train.y);
      row.test_acc = accuracy(sign_labels((K_test * res.model.c).array() + res.model.b), data.test.y);
      row.nsv = res.model.nsv();
      row.iters = res.state.iter;
      row.termination = to_string(res.trace.termination);
      if (!folds.empty()) {
        double correct = 0.0;
        for (std::size_t f = 0; f < folds.size(); ++f) {
          std::vector<Eigen::Index> fit;
          for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) fit.insert(fit.end(), folds[g].begin(), folds[g].end());
          std::sort(fit.begin(), fit.end());
          const Dataset fit_set = data.train.subset(fit);
          const BaselineResult cvres = solve_baseline(gram.subset(fit), fit_set, hp, job.loss);
          for (const auto i : folds[f]) {
            double h = cvres.model.b;
            for (std::size_t a = 0; a < fit.size(); ++a) h += gram.entries()(i, fit[a]) * cvres.model.c[static_cast<Eigen::Index>(a)];
            if ((h >= 0.0 ? 1.0 : -1.0) == data.train.y[i]) correct += 1.0;
          }
        }
        row.cv_acc = correct / static_cast<double>(data.train.size());
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }

  // Selection: highest score, then fewer support vectors, then grid order.
  for (const auto kind : config.bench_losses) {
    for (const bool cv : {false, true}) {
      BenchRow* best = nullptr;
      for (auto& r : table.rows) {
        if (r.loss != kind || !r.error.empty()) continue;
        if (cv && !r.cv_acc) continue;
        const double score = cv ? *r.cv_acc : r.test_acc;
        if (!best) {
          best = &r;
          continue;
        }
        const double best_score = cv ? *best->cv_acc : best->test_acc;
        if (score > best_score || (score == best_score && r.nsv < best->nsv)) best = &r;
      }
      if (best) (cv ? best->selected_cv : best->selected_paper) = true;
    }
  }
  return table;
}

std::string bench_to_json(const BenchTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json j;
    j["dataset"] = r.dataset;
    j["noise_rate"] = r.noise_rate;
    j["loss"] = to_string(r.loss);
    j["C"] = r.C;
    j["sigma"] = r.sigma;
    j["train_acc"] = r.train_acc;
    j["test_acc"] = r.test_acc;
    j["cv_acc"] = r.cv_acc ? json(*r.cv_acc) : json(nullptr);
    j["nsv"] = r.nsv;
    j["cpu_seconds"] = r.cpu_seconds;
    j["iters"] = r.iters;
    j["termination"] = r.termination;
    j["selected_paper"] = r.selected_paper;
    j["selected_cv"] = r.selected_cv;
    j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  return json{{"rows", rows}}.dump(1) + "\n";
}

BenchTable bench_from_json(const std::string& text) {
  BenchTable t;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("rows")) {
      BenchRow r;
      r.dataset = j.at("dataset").get<std::string>();
      r.noise_rate = j.at("noise_rate").get<double>();
      r.loss = parse_loss_kind(j.at("loss").get<std::string>());
      r.C = j.at("C").get<double>();
      r.sigma = j.at("sigma").get<double>();
      r.train_acc = j.at("train_acc").get<double>();
      r.test_acc = j.at("test_acc").get<double>();
      if (!j.at("cv_acc").is_null()) r.cv_acc = j.at("cv_acc").get<double>();
      r.nsv = j.at("nsv").get<std::size_t>();
      r.cpu_seconds = j.at("cpu_seconds").get<double>();
      r.iters = j.at("iters").get<int>();
      r.termination = j.at("termination").get<std::string>();
      r.selected_paper = j.at("selected_paper").get<bool>();
      r.selected_cv = j.at("selected_cv").get<bool>();
      r.error = j.at("error").get<std::string>();
      t.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bench JSON: ") + e.what());
  }
  return t;
}

std::string bench_to_csv(const BenchTable& table) {
  std::string out =
      "dataset,noise_rate,loss,C,sigma,train_acc,test_acc,cv_acc,nsv,cpu_seconds,iters,termination,selection,error\n";
  for (const auto& r : table.rows) {
    std::string sel;
    if (r.selected_paper) sel += "paper";
    if (r.selected_cv) sel += sel.empty() ? "cv" : "+cv";
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    out += r.dataset + "," + fmt(r.noise_rate) + "," + to_string(r.loss) + "," + fmt(r.C) + "," + fmt(r.sigma) + "," +
           fmt(r.train_acc) + "," + fmt(r.test_acc) + "," + (r.cv_acc ? fmt(*r.cv_acc) : "") + "," +
           std::to_string(r.nsv) + "," + fmt(r.cpu_seconds, 6) + "," + std::to_string(r.iters) + "," + r.termination +
           "," + sel + "," + error + "\n";
  }
  return out;
}

std::string bench_to_text(const BenchTable& table) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "loss" << std::right << std::setw(6) << "r" << std::setw(7) << "C"
     << std::setw(6) << "sigma" << std::setw(10) << "TrainAcc" << std::setw(10) << "TestAcc" << std::setw(9) << "CVAcc"
     << std::setw(6) << "NSV" << std::setw(10) << "CPU(s)" << std::setw(6) << "Iter" << "  selection\n";
  os << std::fixed;
  for (const auto& r : table.rows) {
    os << std::left << std::setw(18) << to_string(r.loss) << std::right << std::setprecision(2) << std::setw(6)
       << r.noise_rate << std::setw(7) << r.C << std::setw(6) << r.sigma;
    if (!r.error.empty()) {
      os << "  failed: " << r.error << '\n';
      continue;
    }
    os << std::setw(9) << 100.0 * r.train_acc << "%" << std::setw(9) << 100.0 * r.test_acc << "%";
    if (r.cv_acc) os << std::setw(8) << 100.0 * *r.cv_acc << "%";
    else os << std::setw(9) << "-";
    os << std::setw(6) << r.nsv << std::setprecision(3) << std::setw(10) << r.cpu_seconds << std::setw(6) << r.iters
       << "  " << (r.selected_paper ? "paper " : "") << (r.selected_cv ? "cv" : "") << '\n';
  }
  return os.str();
}

BoundaryGrid boundary_grid(const TrainedModel& model, int g) {
  if (model.X_train.cols() != 2)
    throw InputError("boundary: model inputs are " + std::to_string(model.X_train.cols()) + "-dimensional, need 2");
  if (g < 1) throw ConfigError("boundary: grid size must be >= 1");
  if (model.X_train.rows() == 0) throw InputError("boundary: model has no training inputs");
  const Eigen::Vector2d lo = model.X_train.colwise().minCoeff().transpose();
  const Eigen::Vector2d hi = model.X_train.colwise().maxCoeff().transpose();
  const Eigen::Vector2d pad = 0.1 * (hi - lo);
  const Eigen::Vector2d a = lo - pad, b = hi + pad;
  BoundaryGrid out;
  out.points.resize(static_cast<Eigen::Index>(g) * g, 2);
  auto coord = [g](double from, double to, int k) {
    return g == 1 ? 0.5 * (from + to) : from + (to - from) * static_cast<double>(k) / static_cast<double>(g - 1);
  };
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * g + j;
      out.points(row, 0) = coord(a[0], b[0], j);
      out.points(row, 1) = coord(a[1], b[1], i);
    }
  out.decision = decision_values(model, out.points);
  return out;
}

std::string certify_json(const TrainedModel& model, double tol) {
  const Eigen::MatrixXd K = gram_matrix(model.kernel, model.X_train).entries();
  const auto kkt = check_kkt(model.c, model.b, model.u, model.lambda, K, model.y_train, model.C, tol);
  const auto prox =
      check_prox_stationary(model.c, model.b, model.u, model.lambda, K, model.y_train, model.C, model.gamma, tol);
  json j;
  j["tolerance"] = tol;
  j["C"] = model.C;
  j["sigma"] = model.sigma;
  j["kkt"] = report_to_json(kkt);
  j["prox_stationary"] = report_to_json(prox);
  try {
    j["gamma_constructed"] = construct_gamma(model.u, model.lambda, model.C, tol);
  } catch (const PreconditionError&) {
    j["gamma_constructed"] = nullptr;
  }
  j["equivalence"] = equivalence_roundtrip(model.c, model.b, model.u, model.lambda, K, model.y_train, model.C, tol);
  return j.dump(1) + "\n";
}

int cmd_gen(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.generator) throw ConfigError("gen: --generator is required");
    Dataset ds = config.generator->generate(config.seed);
    if (config.noise_rate > 0.0)
      ds = flip_labels(ds, config.noise_rate, config.seed ^ kNoiseStream, config.noise_multiplier);
    if (config.out.empty()) out << (config.format == ReportFormat::csv ? write_csv(ds) : write_libsvm(ds));
    else write_dataset(config.out, ds);
    return kExitOk;
  });
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PreparedData data = prepare_data(config);
    const TrainOutcome res = train_once(data, config.hp, config.loss);
    if (!config.out.empty()) save_model(config.out, res.model);
    if (!config.trace_out.empty()) write_text(config.trace_out, res.trace.to_csv(), out);
    if (!config.save_train.empty()) write_dataset(config.save_train, data.train);
    char line[200];
    std::snprintf(line, sizeof(line), "train_acc=%.6f test_acc=%.6f nsv=%zu cpu_seconds=%.4f iters=%d\n", res.train_acc,
                  res.test_acc, res.model.nsv(), res.cpu_seconds, res.model.iterations);
    out << line;
    return kExitOk;
  });
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.model_path.empty()) throw ConfigError("eval: --model is required");
    const TrainedModel model = load_model(config.model_path);
    Dataset ds = config.generator ? config.generator->generate(config.seed) : read_dataset(config.data_path);
    ds.validate();
    const Eigen::VectorXd pred = predict(model, model.scale_inputs(ds.X));
    char line[120];
    std::snprintf(line, sizeof(line), "accuracy=%.6f n=%lld\n", accuracy(pred, ds.y), static_cast<long long>(ds.size()));
    out << line;
    return kExitOk;
  });
}

int cmd_certify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.model_path.empty()) throw ConfigError("certify: --model is required");
    const TrainedModel model = load_model(config.model_path);
    if (!config.data_path.empty()) {
      const Dataset ds = read_dataset(config.data_path);
      if (ds.fingerprint() != model.train_fingerprint())
        throw InputError("certify: dataset '" + config.data_path + "' does not match the model's training set");
    }
    write_text(config.out, certify_json(model, config.tol), out);
    return kExitOk;
  });
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BenchTable table = run_bench(config);
    std::string text;
    switch (config.format) {
      case ReportFormat::json: text = bench_to_json(table); break;
      case ReportFormat::csv: text = bench_to_csv(table); break;
      case ReportFormat::table: text = bench_to_text(table); break;
    }
    write_text(config.out, text, out);
    for (const auto& r : table.rows)
      if (!r.error.empty()) err << "run " << to_string(r.loss) << " C=" << r.C << " sigma=" << r.sigma << " failed: " << r.error << '\n';
    return kExitOk;
  });
}

int cmd_boundary(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.model_path.empty()) throw ConfigError("boundary: --model is required");
    const TrainedModel model = load_model(config.model_path);
    const BoundaryGrid grid = boundary_grid(model, config.grid_points);
    std::string text = "x1,x2,decision,label\n";
    for (Eigen::Index i = 0; i < grid.points.rows(); ++i)
      text += fmt(grid.points(i, 0)) + "," + fmt(grid.points(i, 1)) + "," + fmt(grid.decision[i]) + "," +
              (grid.decision[i] >= 0.0 ? "1" : "-1") + "\n";
    write_text(config.out, text, out);
    if (!config.points_out.empty()) {
      std::vector<bool> is_sv(static_cast<std::size_t>(model.X_train.rows()), false);
      for (const auto i : model.support) is_sv[static_cast<std::size_t>(i)] = true;
      std::string pts = "x1,x2,label,support\n";
      for (Eigen::Index i = 0; i < model.X_train.rows(); ++i)
        pts += fmt(model.X_train(i, 0)) + "," + fmt(model.X_train(i, 1)) + "," + (model.y_train[i] > 0 ? "1" : "-1") +
               "," + (is_sv[static_cast<std::size_t>(i)] ? "true" : "false") + "\n";
      write_text(config.points_out, pts, out);
    }
    return kExitOk;
  });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::gen: return cmd_gen(config, out, err);
    case Command::train: return cmd_train(config, out, err);
    case Command::eval: return cmd_eval(config, out, err);
    case Command::certify: return cmd_certify(config, out, err);
    case Command::bench: return cmd_bench(config, out, err);
    case Command::boundary: return cmd_boundary(config, out, err);
  }
  return kExitInput;
}

}  // namespace l0ksvm::cli
