#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfa/dataset.hpp"
#include "cfa/scoring.hpp"

namespace cfa {

/// Probabilities are kept this far from 0 and 1.
inline constexpr double kProbabilityClamp = 1e-12;

enum class InterceptMode { automatic, on, off };

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t iterations = 5000;
  double l2 = 1e-3;
  /// automatic: no intercept on mirrored games (keeps pair scores
  /// complementary), an intercept otherwise.
  InterceptMode intercept = InterceptMode::automatic;
};

struct LogisticModel {
  std::string name = "logistic";
  std::vector<double> coefficients;
  std::optional<double> intercept;
  LogisticConfig config;
};

/// Mean L2-regularized negative log-likelihood over a game set and its
/// gradient. Parameters are laid out as [coefficients..., intercept?]; the
/// intercept is not penalized.
class LogisticObjective {
 public:
  LogisticObjective(const GameSet& games, double l2, bool with_intercept);

  std::size_t parameter_count() const noexcept { return dimension_ + (with_intercept_ ? 1 : 0); }
  double loss(std::span<const double> params) const;
  std::vector<double> gradient(std::span<const double> params) const;

 private:
  double logit(std::span<const double> params, std::size_t row) const;

  std::size_t rows_;
  std::size_t dimension_;
  std::vector<double> design_;  // row-major rows_ x dimension_
  std::vector<double> labels_;
  double l2_;
  bool with_intercept_;
};

double sigmoid(double z);

/// Full-batch gradient descent from zero for config.iterations steps.
LogisticModel train_logistic(const GameSet& games, const LogisticConfig& config = {},
                             std::string name = "logistic");

ScoringSystem score(const LogisticModel& model, const GameSet& games);

/// Scores by the projection of (x - midpoint) onto (mean1 - mean0), squashed
/// through a sigmoid with slope `scale`. Equivalent to comparing squared
/// distances to the two class means.
struct CentroidModel {
  std::string name = "centroid";
  std::vector<double> mean0;
  std::vector<double> mean1;
  double scale = 1.0;
};

CentroidModel train_centroid(const GameSet& games, double scale = 1.0,
                             std::string name = "centroid");

ScoringSystem score(const CentroidModel& model, const GameSet& games);

void save_model(const LogisticModel& model, const std::filesystem::path& path);
void save_model(const CentroidModel& model, const std::filesystem::path& path);
LogisticModel load_logistic_model(const std::filesystem::path& path);
CentroidModel load_centroid_model(const std::filesystem::path& path);

}  // namespace cfa
