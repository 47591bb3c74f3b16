#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "alperf/random.hpp"

namespace alperf {

/// One Gaussian component of a class-conditional density.
struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double std = 1.0;
};

/// Data-generating distribution over a 1-D feature: class priors and a
/// Gaussian mixture per class. Classes are numbered 1..C; vectors indexed by
/// class hold class c at position c - 1.
class TaskModel {
 public:
  static constexpr int kDimension = 1;

  /// Throws std::invalid_argument when priors or components are malformed.
  TaskModel(std::vector<double> class_priors,
            std::vector<std::vector<GaussianComponent>> class_components);

  /// Two classes, unit-variance Gaussians at -1.5 and +1.5, equal priors.
  static TaskModel default_task();
  /// Two classes, unit-variance Gaussians at -separation and +separation.
  static TaskModel symmetric_pair(double separation, double std = 1.0);

  int class_count() const { return static_cast<int>(priors_.size()); }
  const std::vector<double>& class_priors() const { return priors_; }
  const std::vector<std::vector<GaussianComponent>>& class_components() const { return components_; }

  /// p(x | y) for class y in 1..C.
  double class_density(int y, double x) const;
  /// sum_y p(y) p(x | y).
  double marginal_density(double x) const;

  /// Draws a class index from the priors, then x from that class.
  double sample_feature(RandomStream& rng) const;

 private:
  std::vector<double> priors_;
  std::vector<std::vector<GaussianComponent>> components_;
};

/// Acquisition distribution q(x) standing in for a selection strategy.
struct SamplingDistribution {
  enum class Kind { DataMarginal, SymmetricMixture };

  Kind kind = Kind::DataMarginal;
  double d = 0.0;
  double component_std = 0.25;
  std::array<double, 2> component_priors = {0.5, 0.5};

  static SamplingDistribution data_marginal();
  /// Two Gaussians at -d and +d with the given width and mixing priors.
  static SamplingDistribution symmetric_mixture(double d, double component_std = 0.25,
                                                double prior_negative = 0.5);

  /// Throws std::invalid_argument on a non-positive width or bad priors.
  void validate() const;
  std::string describe() const;
};

struct UnlabeledSample {
  double x = 0.0;
};

struct LabeledSample {
  double x = 0.0;
  int y = 1;                      // class in 1..C
  double sampling_density = 1.0;  // q(x) at acquisition time
};

/// Bayes posterior p(y | x), length C. Falls back to the prior vector when every
/// class-conditional density underflows at x.
std::vector<double> bayes_posterior(const TaskModel& model, double x);

/// q(x). The task model is consulted only for the data-marginal kind.
double sampling_density(const SamplingDistribution& s, const TaskModel& model, double x);

/// Draws x ~ q, then labels it with the true posterior of the task.
std::vector<LabeledSample> draw_labeled(const TaskModel& model, const SamplingDistribution& s,
                                        std::size_t n, RandomStream& rng);

/// Unbiased pool draws from the data marginal.
std::vector<UnlabeledSample> draw_unlabeled(const TaskModel& model, std::size_t n, RandomStream& rng);

/// Draws a class label for x from the task's posterior.
int oracle_label(const TaskModel& model, double x, RandomStream& rng);

/// Accuracy of the Bayes decision rule, integrated over the truncated support.
/// Throws std::runtime_error carrying the residual if quadrature fails.
double bayes_accuracy(const TaskModel& model);

/// Integration support for all densities.
inline constexpr double kSupportLow = -10.0;
inline constexpr double kSupportHigh = 10.0;

/// Standard normal pdf and cdf.
double normal_pdf(double z);
double normal_cdf(double z);

}  // namespace alperf
