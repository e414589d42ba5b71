#include "l0ksvm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "l0ksvm/error.hpp"
#include "l0ksvm/kernels.hpp"

namespace l0ksvm {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, long& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> lines_of(const std::string& text) {
  std::vector<std::string_view> out;
  std::string_view v(text);
  while (!v.empty()) {
    const auto nl = v.find('\n');
    auto line = v.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    v.remove_prefix(nl + 1);
  }
  return out;
}

Eigen::VectorXd map_labels(const std::vector<double>& raw) {
  std::set<double> distinct(raw.begin(), raw.end());
  if (distinct.size() > 2) throw InputError("expected binary labels, found " + std::to_string(distinct.size()) + " distinct values");
  Eigen::VectorXd y(static_cast<Eigen::Index>(raw.size()));
  if (distinct.size() == 2) {
    const double hi = *distinct.rbegin();
    for (std::size_t i = 0; i < raw.size(); ++i) y[static_cast<Eigen::Index>(i)] = raw[i] == hi ? 1.0 : -1.0;
  } else if (distinct.size() == 1) {
    const double v = *distinct.begin();
    if (v != 1.0 && v != -1.0) throw InputError("single label value " + fmt17(v) + " cannot be mapped to +-1");
    y.setConstant(v);
  }
  return y;
}

std::vector<Eigen::Index> permutation(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

bool has_both_classes(const Eigen::VectorXd& y) {
  return (y.array() > 0).any() && (y.array() < 0).any();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool ScalingStats::any_constant() const { return std::any_of(constant.begin(), constant.end(), [](bool b) { return b; }); }

std::uint64_t Dataset::fingerprint() const { return l0ksvm::fingerprint(X, &y); }

void Dataset::validate() const {
  if (X.rows() != y.size()) throw InputError("dataset: " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  if (!X.allFinite()) throw InputError("dataset: non-finite feature value");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0) throw InputError("dataset: label at row " + std::to_string(i) + " is not +-1");
}

void Dataset::validate_for_training() const {
  validate();
  if (size() < 2 || !has_both_classes(y)) throw InputError("dataset: training requires both classes");
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.name = name;
  out.scaling = scaling;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.X.row(static_cast<Eigen::Index>(k)) = X.row(rows[k]);
    out.y[static_cast<Eigen::Index>(k)] = y[rows[k]];
  }
  return out;
}

Dataset parse_libsvm(const std::string& text, Eigen::Index min_dim) {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<long, double>>> rows;
  long dim = static_cast<long>(min_dim);
  std::size_t lineno = 0;
  for (auto line : lines_of(text)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    double label = 0.0;
    if (!parse_double(tokens[0], label)) throw ParseError(lineno, "bad label '" + std::string(tokens[0]) + "'");
    std::vector<std::pair<long, double>> entries;
    long prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) throw ParseError(lineno, "expected idx:val, got '" + std::string(tokens[t]) + "'");
      long idx = 0;
      double val = 0.0;
      if (!parse_index(tokens[t].substr(0, colon), idx) || idx < 1)
        throw ParseError(lineno, "bad feature index in '" + std::string(tokens[t]) + "'");
      if (!parse_double(tokens[t].substr(colon + 1), val))
        throw ParseError(lineno, "bad feature value in '" + std::string(tokens[t]) + "'");
      if (idx <= prev) throw ParseError(lineno, "feature indices must be strictly increasing");
      prev = idx;
      entries.emplace_back(idx, val);
    }
    dim = std::max(dim, prev);
    labels.push_back(label);
    rows.push_back(std::move(entries));
  }
  Dataset ds;
  ds.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [idx, val] : rows[i]) ds.X(static_cast<Eigen::Index>(i), idx - 1) = val;
  ds.y = map_labels(labels);
  return ds;
}

std::string write_libsvm(const Dataset& ds) {
  std::string out;
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    out += ds.y[i] > 0 ? "+1" : "-1";
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      // Row 0 always carries the last feature.
      if (ds.X(i, j) != 0.0 || (i == 0 && j + 1 == ds.dim()))
        out += " " + std::to_string(j + 1) + ":" + fmt17(ds.X(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string write_csv(const Dataset& ds) {
  std::string out;
  for (Eigen::Index j = 0; j < ds.dim(); ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "label\n";
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) out += fmt17(ds.X(i, j)) + ",";
    out += ds.y[i] > 0 ? "1\n" : "-1\n";
  }
  return out;
}

Dataset parse_csv(const std::string& text) {
  const auto lines = lines_of(text);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::size_t width = 0;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    if (line.empty()) continue;
    std::vector<double> fields;
    std::size_t start = 0;
    bool numeric = true;
    while (true) {
      const auto comma = line.find(',', start);
      const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      double v = 0.0;
      if (!parse_double(field, v)) numeric = false;
      fields.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!numeric) {
      if (n == 0) {  // header
        width = fields.size();
        continue;
      }
      throw ParseError(n + 1, "non-numeric CSV field");
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width || width < 2) throw ParseError(n + 1, "expected " + std::to_string(width) + " fields");
    labels.push_back(fields.back());
    fields.pop_back();
    rows.push_back(std::move(fields));
  }
  Dataset ds;
  const auto d = width == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(width - 1);
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) ds.X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  ds.y = map_labels(labels);
  return ds;
}

Dataset read_dataset(const std::string& path, Eigen::Index min_dim) {
  const std::string text = read_file(path);
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  Dataset ds = csv ? parse_csv(text) : parse_libsvm(text, min_dim);
  const auto slash = path.find_last_of('/');
  ds.name = slash == std::string::npos ? path : path.substr(slash + 1);
  return ds;
}

void write_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  out << (csv ? write_csv(ds) : write_libsvm(ds));
}

Standardized standardize(const Dataset& train, const Dataset& test) {
  if (train.size() == 0) throw InputError("standardize: empty training set");
  if (test.size() > 0 && test.dim() != train.dim()) throw InputError("standardize: train/test dimension mismatch");
  const Eigen::Index d = train.dim();
  const double n = static_cast<double>(train.size());
  ScalingStats st;
  st.mean = train.X.colwise().sum().transpose() / n;
  st.stddev.resize(d);
  st.constant.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (train.X.col(j).array() - st.mean[j]).square().sum() / n;
    st.stddev[j] = std::sqrt(var);
    if (!(st.stddev[j] > 0.0)) st.constant[static_cast<std::size_t>(j)] = true;
  }
  auto apply = [&](const Dataset& in) {
    Dataset out = in;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (st.constant[static_cast<std::size_t>(j)]) continue;
      out.X.col(j) = (in.X.col(j).array() - st.mean[j]) / st.stddev[j];
    }
    out.scaling = st;
    return out;
  };
  return {apply(train), apply(test), st};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("split: train fraction must lie in (0, 1)");
  const Eigen::Index n = ds.size();
  const auto n_train = static_cast<Eigen::Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) throw InputError("split: dataset too small for fraction");
  const auto perm = permutation(n, seed);
  std::vector<Eigen::Index> a(perm.begin(), perm.begin() + n_train), b(perm.begin() + n_train, perm.end());
  Dataset train = ds.subset(a), test = ds.subset(b);
  if (!has_both_classes(train.y) || !has_both_classes(test.y)) throw InputError("split: a part lost one of the classes");
  return {std::move(train), std::move(test)};
}

Dataset gen_double_moons(Eigen::Index m, double noise_std, std::uint64_t seed) {
  if (m < 2) throw ConfigError("double moons: m must be >= 2");
  if (!(noise_std >= 0.0)) throw ConfigError("double moons: noise must be >= 0");
  const Eigen::Index n_out = (m + 1) / 2, n_in = m / 2;
  Dataset ds;
  ds.name = "double_moons";
  ds.X.resize(m, 2);
  ds.y.resize(m);
  auto t_at = [](Eigen::Index k, Eigen::Index n) {
    return n > 1 ? M_PI * static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
  };
  for (Eigen::Index k = 0; k < n_out; ++k) {
    const double t = t_at(k, n_out);
    ds.X.row(k) << std::cos(t), std::sin(t);
    ds.y[k] = 1.0;
  }
  for (Eigen::Index k = 0; k < n_in; ++k) {
    const double t = t_at(k, n_in);
    ds.X.row(n_out + k) << 1.0 - std::cos(t), 0.5 - std::sin(t);
    ds.y[n_out + k] = -1.0;
  }
  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_std);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) ds.X(i, j) += noise(rng);
  }
  return ds;
}

Dataset gen_double_circles(Eigen::Index m, double factor, double noise_std, std::uint64_t seed) {
  if (m < 2) throw ConfigError("double circles: m must be >= 2");
  if (!(factor > 0.0 && factor < 1.0)) throw ConfigError("double circles: factor must lie in (0, 1)");
  if (!(noise_std >= 0.0)) throw ConfigError("double circles: noise must be >= 0");
  const Eigen::Index n_out = (m + 1) / 2, n_in = m / 2;
  Dataset ds;
  ds.name = "double_circles";
  ds.X.resize(m, 2);
  ds.y.resize(m);
  for (Eigen::Index k = 0; k < n_out; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_out);
    ds.X.row(k) << std::cos(t), std::sin(t);
    ds.y[k] = 1.0;
  }
  for (Eigen::Index k = 0; k < n_in; ++k) {
    const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_in);
    ds.X.row(n_out + k) << factor * std::cos(t), factor * std::sin(t);
    ds.y[n_out + k] = -1.0;
  }
  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_std);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) ds.X(i, j) += noise(rng);
  }
  return ds;
}

Dataset flip_labels(const Dataset& ds, double rate, std::uint64_t seed, double multiplier) {
  if (!(rate >= 0.0 && rate < 0.5)) throw ConfigError("flip_labels: rate must lie in [0, 0.5)");
  if (!(multiplier > 0.0)) throw ConfigError("flip_labels: multiplier must be > 0");
  const Eigen::Index n = ds.size();
  // The small offset keeps products like 0.29 * 100 from rounding down a whole count.
  const auto count = static_cast<Eigen::Index>(std::floor(rate * multiplier * static_cast<double>(n) + 1e-9));
  if (count > n) throw ConfigError("flip_labels: rate * multiplier exceeds the sample count");
  Dataset out = ds;
  if (count == 0) return out;
  const auto perm = permutation(n, seed);
  for (Eigen::Index k = 0; k < count; ++k) out.y[perm[static_cast<std::size_t>(k)]] *= -1.0;
  return out;
}

}  // namespace l0ksvm
