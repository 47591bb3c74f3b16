#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alperf/synth_data.hpp"

namespace alperf {

/// Kernel bandwidth and per-class pseudo-member weight of the Beta prior.
struct ClassifierConfig {
  double bandwidth = 0.2;
  double prior_weight = 0.01;
  int class_count = 2;
};

/// Unnormalized Gaussian kernel exp(-(a - b)^2 / (2 sigma^2)); the exponent is
/// clamped at -700 so distant points keep a tiny positive weight.
double gaussian_kernel(double a, double b, double bandwidth);

/// Kernel-weight sums at one query point.
struct KernelStats {
  std::vector<double> per_class_mass;
  double total_mass = 0.0;
};

struct Posterior {
  std::vector<double> probabilities;
  /// Set when prior_weight is 0 and no kernel mass reaches the query point.
  bool degenerate = false;
};

/// Parzen window classifier with a Beta prior: every class carries one extra
/// member of kernel weight prior_weight, so the posterior
///
///   p(y | x) = (sum_{i: y_i = y} k(x, x_i) + eps) / (sum_i k(x, x_i) + C eps)
///
/// stays close to uniform away from the training data.
class ParzenModel {
 public:
  const std::vector<LabeledSample>& training() const { return training_; }
  const ClassifierConfig& config() const { return config_; }

  KernelStats kernel_stats(double x) const;
  Posterior posterior(double x) const;
  /// Argmax of the posterior; ties go to the smallest class index.
  int predict(double x) const;

 private:
  friend ParzenModel fit(std::vector<LabeledSample> training, const ClassifierConfig& config);
  ParzenModel(std::vector<LabeledSample> training, ClassifierConfig config)
      : training_(std::move(training)), config_(config) {}

  std::vector<LabeledSample> training_;
  ClassifierConfig config_;
};

/// Throws std::invalid_argument for a bad configuration or a label outside
/// 1..class_count (the message names the offending index).
ParzenModel fit(std::vector<LabeledSample> training, const ClassifierConfig& config);

/// Argmax with ties broken toward the lowest index, returned as class 1..C.
int argmax_class(std::span<const double> scores);

/// Fraction (or weighted fraction) of eval samples the model classifies correctly.
/// Throws std::invalid_argument on an empty eval set or mismatched/invalid weights.
double accuracy_on(const ParzenModel& model, std::span<const LabeledSample> eval,
                   std::optional<std::span<const double>> weights = std::nullopt);

/// Same, from precomputed correctness indicators (nonzero = correct).
double weighted_accuracy(std::span<const std::uint8_t> correct, std::optional<std::span<const double>> weights);

}  // namespace alperf
