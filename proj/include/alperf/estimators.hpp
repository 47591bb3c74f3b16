#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alperf/parzen.hpp"
#include "alperf/random.hpp"
#include "alperf/synth_data.hpp"

namespace alperf {

struct BetaComponent {
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const BetaComponent&) const = default;
};

/// Output of every estimator and baseline: a single accuracy, a list of
/// sampled accuracies, or an equal-weight mixture of Beta densities.
class PerformanceEstimate {
 public:
  enum class Kind { Point, Empirical, BetaMixture };

  static PerformanceEstimate point(double value);
  static PerformanceEstimate empirical(std::vector<double> samples);
  static PerformanceEstimate beta_mixture(std::vector<BetaComponent> components);

  Kind kind() const { return kind_; }
  double point_value() const { return point_value_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<BetaComponent>& components() const { return components_; }

  double mean() const;
  /// Point: the value. Empirical: type-7 sample quantile. Beta mixture:
  /// inverse of the averaged component CDFs.
  double quantile(double p) const;

  /// Diagnostics such as "degenerate-pool" or "weight-cap-active".
  const std::vector<std::string>& flags() const { return flags_; }
  void add_flag(std::string flag) { flags_.push_back(std::move(flag)); }

  bool operator==(const PerformanceEstimate&) const = default;

 private:
  Kind kind_ = Kind::Point;
  double point_value_ = 0.0;
  std::vector<double> samples_;
  std::vector<BetaComponent> components_;
  std::vector<std::string> flags_;
};

/// Mean, median and quartiles of an estimate, as stored per run record.
struct EstimateSummary {
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};
EstimateSummary summarize_estimate(const PerformanceEstimate& estimate);

double beta_mixture_cdf(std::span<const BetaComponent> components, double x);
double beta_mixture_quantile(std::span<const BetaComponent> components, double p);

/// Accuracy from the expected-error sum over the evaluation set E:
///   err = sum_{i in E} (1 - max_y p(y | x_i)),  accuracy = 1 - err / |E|.
PerformanceEstimate generalization_error_estimate(const ParzenModel& model,
                                                  std::span<const UnlabeledSample> eval);

/// The same accuracy from the per-instance maximal posteriors. The error terms
/// are summed in sorted order, so the result does not depend on instance order.
double accuracy_from_max_posteriors(std::span<const double> max_posteriors);

struct CvOptions {
  /// Weight each held-out prediction by 1 / q(x).
  bool reweighted = false;
  /// Upper bound on the importance weights; none by default.
  std::optional<double> weight_cap;
};

/// Random unstratified fold index per sample; fold sizes differ by at most one.
/// k == n gives the identity assignment and draws nothing from rng.
std::vector<int> assign_folds(std::size_t n, int k, RandomStream& rng);

/// k-fold cross-validation on the labeled set. Throws std::invalid_argument when
/// k < 2, k > |labeled|, or (reweighted) some sampling density is not positive.
PerformanceEstimate kfold_cv(std::span<const LabeledSample> labeled, int k, const ClassifierConfig& config,
                             RandomStream& rng, const CvOptions& options = {});

/// Cross-validation over `samples` where each fold trains on a fresh uniform
/// subset (without replacement) of at most train_size instances from the
/// other folds.
PerformanceEstimate subsampled_cv(std::span<const LabeledSample> samples, int k, std::size_t train_size,
                                  const ClassifierConfig& config, RandomStream& rng);

/// Labels the pool with a classifier fit on `labeled`, then runs subsampled_cv
/// over the union with training subsets as large as the labeled set. An empty
/// pool falls back to kfold_cv and flags the estimate "empty-pool".
PerformanceEstimate self_label_cv(std::span<const LabeledSample> labeled, std::span<const UnlabeledSample> pool,
                                  int k, const ClassifierConfig& config, RandomStream& rng);

enum class NearbyCount {
  Kernel,  ///< n = kernel mass (soft count)
  Hard,    ///< n = number of labels within one bandwidth
};

struct LocalLabelStatistics {
  double n = 0.0;
  double p_hat = 0.5;  ///< share of class 2 among the nearby labels
};

LocalLabelStatistics local_label_statistics(std::span<const LabeledSample> labeled, double x, double bandwidth,
                                            NearbyCount mode = NearbyCount::Kernel);

/// Beta(1 + max(n p, n (1 - p)), 1 + min(n p, n (1 - p))).
BetaComponent local_accuracy_distribution(const LocalLabelStatistics& stats);

/// One local accuracy distribution per evaluation instance, mixed with equal
/// weights. Two-class tasks only.
PerformanceEstimate probabilistic_performance(std::span<const LabeledSample> labeled,
                                              std::span<const UnlabeledSample> eval, double bandwidth,
                                              NearbyCount mode = NearbyCount::Kernel);

using Predictor = std::function<int(double)>;

/// Accuracy on eval_size fresh oracle-labeled draws from the data marginal.
PerformanceEstimate true_baseline(const Predictor& predict, const TaskModel& task, std::size_t eval_size,
                                  RandomStream& rng);
PerformanceEstimate true_baseline(const ParzenModel& model, const TaskModel& task, std::size_t eval_size,
                                  RandomStream& rng);

/// `reps` accuracies of the fixed predictor, each on its own fresh unbiased
/// evaluation set of `budget` oracle-labeled draws.
PerformanceEstimate subsample_baseline(const Predictor& predict, const TaskModel& task, std::size_t budget,
                                       std::size_t reps, RandomStream& rng);
PerformanceEstimate subsample_baseline(const ParzenModel& model, const TaskModel& task, std::size_t budget,
                                       std::size_t reps, RandomStream& rng);

}  // namespace alperf
