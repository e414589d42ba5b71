#include "l0ksvm/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "l0ksvm/error.hpp"

namespace l0ksvm {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

TrainedModel make_model(const SolveResult& result, const Dataset& train, const Hyperparams& hp, LossKind kind) {
  TrainedModel m;
  m.c = result.state.c;
  m.b = result.state.b;
  m.lambda = result.state.lambda;
  m.u = result.state.u;
  m.kernel = hp.kernel.resolved(train.dim());
  m.X_train = train.X;
  m.y_train = train.y;
  m.loss = kind;
  m.C = hp.C;
  m.sigma = hp.sigma;
  m.gamma = 1.0 / hp.sigma;
  m.iterations = result.state.iter;
  m.termination = result.trace.termination;
  m.scaling = train.scaling;
  if (kind == LossKind::l01) {
    m.support = support_vectors(m.u, m.lambda, m.C, m.gamma);
  } else {
    for (Eigen::Index i = 0; i < m.lambda.size(); ++i)
      if (std::abs(m.lambda[i]) > 1e-6) m.support.push_back(i);
  }
  return m;
}

Eigen::MatrixXd TrainedModel::scale_inputs(const Eigen::MatrixXd& raw) const {
  if (!scaling) return raw;
  if (raw.cols() != scaling->mean.size()) throw InputError("scale_inputs: dimension mismatch");
  Eigen::MatrixXd out = raw;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    if (scaling->constant[static_cast<std::size_t>(j)]) continue;
    out.col(j) = (raw.col(j).array() - scaling->mean[j]) / scaling->stddev[j];
  }
  return out;
}

Eigen::VectorXd decision_values(const TrainedModel& model, const Eigen::MatrixXd& X, DecisionForm form) {
  if (X.cols() != model.X_train.cols())
    throw InputError("decision function: expected " + std::to_string(model.X_train.cols()) + " features, got " +
                     std::to_string(X.cols()));
  if (form == DecisionForm::primal) {
    const Eigen::MatrixXd Kx = cross_kernel(model.kernel, X, model.X_train);
    return (Kx * model.c).array() + model.b;
  }
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), model.b);
  if (model.support.empty()) return out;
  Eigen::MatrixXd sv(static_cast<Eigen::Index>(model.support.size()), model.X_train.cols());
  Eigen::VectorXd weight(sv.rows());
  for (std::size_t k = 0; k < model.support.size(); ++k) {
    const auto i = model.support[k];
    sv.row(static_cast<Eigen::Index>(k)) = model.X_train.row(i);
    weight[static_cast<Eigen::Index>(k)] = -model.y_train[i] * model.lambda[i];
  }
  out += cross_kernel(model.kernel, X, sv) * weight;
  return out;
}

double decision_function(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, DecisionForm form) {
  const Eigen::MatrixXd row = x.transpose();
  return decision_values(model, row, form)[0];
}

Eigen::VectorXd sign_labels(const Eigen::VectorXd& decision) {
  return decision.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& X, DecisionForm form) {
  return sign_labels(decision_values(model, X, form));
}

std::vector<Eigen::Index> support_vectors(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, double C,
                                          double gamma, double slack) {
  if (u.size() != lambda.size()) throw InputError("support_vectors: length mismatch");
  const double tau = std::sqrt(2.0 * gamma * C);
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double v = u[i] - gamma * lambda[i];
    if (v > 0.0 && v <= tau + slack) out.push_back(i);
  }
  return out;
}

std::vector<Eigen::Index> support_vectors_from_multipliers(const Eigen::VectorXd& lambda, double C, double gamma,
                                                           double tol) {
  const double lo = -std::sqrt(2.0 * C / gamma) - tol;
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] >= lo && lambda[i] < -tol) out.push_back(i);
  return out;
}

double accuracy(const Eigen::VectorXd& predictions, const Eigen::VectorXd& labels) {
  if (predictions.size() != labels.size()) throw InputError("accuracy: length mismatch");
  if (labels.size() == 0) throw InputError("accuracy: empty input");
  return 1.0 - (predictions - labels).cwiseAbs().sum() / (2.0 * static_cast<double>(labels.size()));
}

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = "l0ksvm-model";
  j["version"] = kModelVersion;
  j["kernel"] = {{"family", to_string(model.kernel.family)}, {"params", model.kernel.params()}};
  j["loss"] = to_string(model.loss);
  j["C"] = model.C;
  j["sigma"] = model.sigma;
  j["gamma"] = model.gamma;
  j["b"] = model.b;
  j["c"] = vec_to_json(model.c);
  j["lambda"] = vec_to_json(model.lambda);
  j["u"] = vec_to_json(model.u);
  j["support"] = model.support;
  json rows = json::array();
  for (Eigen::Index i = 0; i < model.X_train.rows(); ++i) rows.push_back(vec_to_json(model.X_train.row(i).transpose()));
  j["train"] = {{"X", rows}, {"y", vec_to_json(model.y_train)}, {"fingerprint", hex64(model.train_fingerprint())}};
  if (model.scaling) j["scaling"] = {{"mean", vec_to_json(model.scaling->mean)}, {"stddev", vec_to_json(model.scaling->stddev)}};
  j["metadata"] = {{"iterations", model.iterations},
                   {"termination", to_string(model.termination)},
                   {"nsv", model.nsv()}};
  return j.dump(1);
}

TrainedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
  if (j.value("format", "") != "l0ksvm-model") throw InputError("model JSON: not an l0ksvm model");
  if (j.value("version", 0) != kModelVersion)
    throw InputError("model JSON: unsupported version " + std::to_string(j.value("version", 0)));
  try {
    TrainedModel m;
    m.kernel = KernelSpec::from_params(parse_kernel_family(j.at("kernel").at("family").get<std::string>()),
                                       j.at("kernel").at("params").get<std::map<std::string, double>>());
    m.loss = parse_loss_kind(j.at("loss").get<std::string>());
    m.C = j.at("C").get<double>();
    m.sigma = j.at("sigma").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.b = j.at("b").get<double>();
    m.c = vec_from_json(j.at("c"));
    m.lambda = vec_from_json(j.at("lambda"));
    m.u = vec_from_json(j.at("u"));
    m.support = j.at("support").get<std::vector<Eigen::Index>>();
    const auto& rows = j.at("train").at("X");
    m.y_train = vec_from_json(j.at("train").at("y"));
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : Eigen::Index{0};
    m.X_train.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = vec_from_json(rows[static_cast<std::size_t>(i)]);
      if (r.size() != d) throw InputError("model JSON: ragged training rows");
      m.X_train.row(i) = r.transpose();
    }
    if (j.contains("scaling")) {
      ScalingStats st;
      st.mean = vec_from_json(j.at("scaling").at("mean"));
      st.stddev = vec_from_json(j.at("scaling").at("stddev"));
      if (st.mean.size() != d || st.stddev.size() != d) throw InputError("model JSON: scaling has the wrong dimension");
      for (Eigen::Index k = 0; k < d; ++k) st.constant.push_back(!(st.stddev[k] > 0.0));
      m.scaling = std::move(st);
    }
    const auto& meta = j.at("metadata");
    m.iterations = meta.at("iterations").get<int>();
    m.termination = meta.at("termination").get<std::string>() == "tolerance_met" ? Termination::tolerance_met
                                                                                 : Termination::max_iter;
    const auto m_size = m.y_train.size();
    if (m.c.size() != m_size || m.lambda.size() != m_size || m.u.size() != m_size)
      throw InputError("model JSON: coefficient vectors do not match the training set size");
    m.kernel.validate();
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
}

void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace l0ksvm
