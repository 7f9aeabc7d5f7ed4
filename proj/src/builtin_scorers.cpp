#include "cfa/builtin_scorers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cfa/csv.hpp"
#include "cfa/error.hpp"
#include "cfa/kernels.hpp"

namespace cfa {

namespace {

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

void require_features(const GameSet& games, std::string_view who) {
  if (games.empty()) {
    throw DataError(std::string(who) + ": no games to train on");
  }
  if (games.feature_dimension() == 0) {
    throw DataError(std::string(who) + ": games carry no features");
  }
}

void require_both_classes(const GameSet& games, std::string_view who) {
  bool zero = false;
  bool one = false;
  for (const auto& r : games.records()) {
    (r.label == 1 ? one : zero) = true;
  }
  if (!zero || !one) {
    throw DataError(std::string(who) + ": training data contains a single class");
  }
}

void require_dimension(std::size_t expected, const GameSet& games, const std::string& name) {
  if (games.feature_dimension() != expected) {
    throw DataError("builtin_scorers: model '" + name + "' expects " + std::to_string(expected) +
                    " features, games carry " + std::to_string(games.feature_dimension()));
  }
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += csv::format_double(values[i]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& text, const std::filesystem::path& path) {
  std::vector<double> out;
  if (text.empty()) {
    return out;
  }
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v)) {
      throw DataError("builtin_scorers: " + path.string() + ": bad number '" + cell + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::istringstream in(csv::read_text(path));
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("builtin_scorers: " + path.string() + ": expected key=value, got '" + line +
                      "'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key,
                               const std::filesystem::path& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw DataError("builtin_scorers: " + path.string() + " is missing '" + key + "'");
  }
  return it->second;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("builtin_scorers: cannot write " + path.string());
  }
  out << text;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticObjective::LogisticObjective(const GameSet& games, double l2, bool with_intercept)
    : rows_(games.size()),
      dimension_(games.feature_dimension()),
      l2_(l2),
      with_intercept_(with_intercept) {
  design_.reserve(rows_ * dimension_);
  labels_.reserve(rows_);
  for (const auto& r : games.records()) {
    design_.insert(design_.end(), r.features.begin(), r.features.end());
    labels_.push_back(static_cast<double>(r.label));
  }
}

double LogisticObjective::logit(std::span<const double> params, std::size_t row) const {
  const std::span<const double> x(design_.data() + row * dimension_, dimension_);
  double z = kernels::dot(x, params.first(dimension_));
  if (with_intercept_) {
    z += params[dimension_];
  }
  return z;
}

double LogisticObjective::loss(std::span<const double> params) const {
  double nll = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double p = clamp_probability(sigmoid(logit(params, i)));
    nll -= labels_[i] * std::log(p) + (1.0 - labels_[i]) * std::log(1.0 - p);
  }
  const auto beta = params.first(dimension_);
  return nll / static_cast<double>(rows_) + 0.5 * l2_ * kernels::dot(beta, beta);
}

std::vector<double> LogisticObjective::gradient(std::span<const double> params) const {
  std::vector<double> grad(parameter_count(), 0.0);
  const std::span<double> beta_grad(grad.data(), dimension_);
  double intercept_grad = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double residual = sigmoid(logit(params, i)) - labels_[i];
    kernels::scaled_add(beta_grad,
                        std::span<const double>(design_.data() + i * dimension_, dimension_),
                        residual);
    intercept_grad += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(rows_);
  for (std::size_t j = 0; j < dimension_; ++j) {
    grad[j] = grad[j] * inv_n + l2_ * params[j];
  }
  if (with_intercept_) {
    grad[dimension_] = intercept_grad * inv_n;
  }
  return grad;
}

LogisticModel train_logistic(const GameSet& games, const LogisticConfig& config, std::string name) {
  require_features(games, "builtin_scorers");
  require_both_classes(games, "builtin_scorers");
  if (!(config.learning_rate > 0.0) || !(config.l2 >= 0.0)) {
    throw ConfigError("builtin_scorers: learning rate must be positive and l2 nonnegative");
  }
  const bool with_intercept = config.intercept == InterceptMode::on ||
                              (config.intercept == InterceptMode::automatic && !games.has_mirrors());
  const LogisticObjective objective(games, config.l2, with_intercept);
  std::vector<double> params(objective.parameter_count(), 0.0);
  for (std::size_t step = 0; step < config.iterations; ++step) {
    const auto grad = objective.gradient(params);
    kernels::scaled_add(params, grad, -config.learning_rate);
  }
  for (double p : params) {
    if (!std::isfinite(p)) {
      throw NumericError("builtin_scorers: logistic training diverged; lower the learning rate");
    }
  }
  LogisticModel model;
  model.name = std::move(name);
  model.config = config;
  const std::size_t dim = games.feature_dimension();
  model.coefficients.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(dim));
  if (with_intercept) {
    model.intercept = params[dim];
  }
  return model;
}

ScoringSystem score(const LogisticModel& model, const GameSet& games) {
  require_dimension(model.coefficients.size(), games, model.name);
  std::vector<double> probs(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    double z = kernels::dot(games[i].features, model.coefficients);
    if (model.intercept) {
      z += *model.intercept;
    }
    probs[i] = clamp_probability(sigmoid(z));
  }
  return ScoringSystem(model.name, std::move(probs), Orientation::higher_better);
}

CentroidModel train_centroid(const GameSet& games, double scale, std::string name) {
  require_features(games, "builtin_scorers");
  require_both_classes(games, "builtin_scorers");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("builtin_scorers: centroid scale must be positive");
  }
  const std::size_t dim = games.feature_dimension();
  CentroidModel model;
  model.name = std::move(name);
  model.scale = scale;
  model.mean0.assign(dim, 0.0);
  model.mean1.assign(dim, 0.0);
  double n0 = 0.0;
  double n1 = 0.0;
  for (const auto& r : games.records()) {
    if (r.label == 1) {
      kernels::scaled_add(model.mean1, r.features, 1.0);
      n1 += 1.0;
    } else {
      kernels::scaled_add(model.mean0, r.features, 1.0);
      n0 += 1.0;
    }
  }
  kernels::divide(model.mean0, n0);
  kernels::divide(model.mean1, n1);
  return model;
}

ScoringSystem score(const CentroidModel& model, const GameSet& games) {
  require_dimension(model.mean0.size(), games, model.name);
  const std::size_t dim = model.mean0.size();
  std::vector<double> direction(dim);
  std::vector<double> midpoint(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    direction[k] = model.mean1[k] - model.mean0[k];
    midpoint[k] = 0.5 * (model.mean1[k] + model.mean0[k]);
  }
  const double offset = kernels::dot(midpoint, direction);
  std::vector<double> probs(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    const double projection = kernels::dot(games[i].features, direction) - offset;
    probs[i] = clamp_probability(sigmoid(model.scale * projection));
  }
  return ScoringSystem(model.name, std::move(probs), Orientation::higher_better);
}

void save_model(const LogisticModel& model, const std::filesystem::path& path) {
  std::string text = "kind=logistic\n";
  text += "name=" + model.name + "\n";
  text += "dimension=" + std::to_string(model.coefficients.size()) + "\n";
  text += "coefficients=" + join(model.coefficients) + "\n";
  text += "intercept=" + (model.intercept ? csv::format_double(*model.intercept) : "none") + "\n";
  text += "learning_rate=" + csv::format_double(model.config.learning_rate) + "\n";
  text += "iterations=" + std::to_string(model.config.iterations) + "\n";
  text += "l2=" + csv::format_double(model.config.l2) + "\n";
  write_text(path, text);
}

void save_model(const CentroidModel& model, const std::filesystem::path& path) {
  std::string text = "kind=centroid\n";
  text += "name=" + model.name + "\n";
  text += "dimension=" + std::to_string(model.mean0.size()) + "\n";
  text += "mean0=" + join(model.mean0) + "\n";
  text += "mean1=" + join(model.mean1) + "\n";
  text += "scale=" + csv::format_double(model.scale) + "\n";
  write_text(path, text);
}

LogisticModel load_logistic_model(const std::filesystem::path& path) {
  const auto kv = read_key_values(path);
  if (require_key(kv, "kind", path) != "logistic") {
    throw DataError("builtin_scorers: " + path.string() + " is not a logistic model");
  }
  LogisticModel model;
  model.name = require_key(kv, "name", path);
  model.coefficients = split_doubles(require_key(kv, "coefficients", path), path);
  if (std::to_string(model.coefficients.size()) != require_key(kv, "dimension", path)) {
    throw DataError("builtin_scorers: " + path.string() + ": dimension does not match coefficients");
  }
  const auto& intercept = require_key(kv, "intercept", path);
  if (intercept != "none") {
    model.intercept = split_doubles(intercept, path).at(0);
  }
  if (kv.count("learning_rate")) {
    model.config.learning_rate = split_doubles(kv.at("learning_rate"), path).at(0);
  }
  if (kv.count("iterations")) {
    model.config.iterations = static_cast<std::size_t>(std::stoull(kv.at("iterations")));
  }
  if (kv.count("l2")) {
    model.config.l2 = split_doubles(kv.at("l2"), path).at(0);
  }
  return model;
}

CentroidModel load_centroid_model(const std::filesystem::path& path) {
  const auto kv = read_key_values(path);
  if (require_key(kv, "kind", path) != "centroid") {
    throw DataError("builtin_scorers: " + path.string() + " is not a centroid model");
  }
  CentroidModel model;
  model.name = require_key(kv, "name", path);
  model.mean0 = split_doubles(require_key(kv, "mean0", path), path);
  model.mean1 = split_doubles(require_key(kv, "mean1", path), path);
  model.scale = split_doubles(require_key(kv, "scale", path), path).at(0);
  if (model.mean0.size() != model.mean1.size() ||
      std::to_string(model.mean0.size()) != require_key(kv, "dimension", path)) {
    throw DataError("builtin_scorers: " + path.string() + ": inconsistent dimensions");
  }
  return model;
}

}  // namespace cfa
