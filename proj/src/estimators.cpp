#include "alperf/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>

#include "alperf/summary.hpp"

namespace alperf {

namespace {

void require_probability(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

std::vector<LabeledSample> gather(std::span<const LabeledSample> samples, std::span<const std::size_t> indices) {
  std::vector<LabeledSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples[i]);
  return out;
}

}  // namespace

// -- PerformanceEstimate ------------------------------------------------------

PerformanceEstimate PerformanceEstimate::point(double value) {
  require_probability(value, "point estimate");
  PerformanceEstimate e;
  e.kind_ = Kind::Point;
  e.point_value_ = value;
  return e;
}

PerformanceEstimate PerformanceEstimate::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical estimate needs at least one sample");
  for (double s : samples) require_probability(s, "empirical sample");
  PerformanceEstimate e;
  e.kind_ = Kind::Empirical;
  e.samples_ = std::move(samples);
  return e;
}

PerformanceEstimate PerformanceEstimate::beta_mixture(std::vector<BetaComponent> components) {
  if (components.empty()) throw std::invalid_argument("beta mixture needs at least one component");
  for (const auto& c : components) {
    if (!(c.alpha > 0.0) || !(c.beta > 0.0) || !std::isfinite(c.alpha) || !std::isfinite(c.beta))
      throw std::invalid_argument("beta mixture parameters must be finite and > 0");
  }
  PerformanceEstimate e;
  e.kind_ = Kind::BetaMixture;
  e.components_ = std::move(components);
  return e;
}

double PerformanceEstimate::mean() const {
  switch (kind_) {
    case Kind::Point:
      return point_value_;
    case Kind::Empirical:
      return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
    case Kind::BetaMixture: {
      double total = 0.0;
      for (const auto& c : components_) total += c.alpha / (c.alpha + c.beta);
      return total / static_cast<double>(components_.size());
    }
  }
  return point_value_;
}

double PerformanceEstimate::quantile(double p) const {
  switch (kind_) {
    case Kind::Point:
      return point_value_;
    case Kind::Empirical: {
      std::vector<double> sorted = samples_;
      std::sort(sorted.begin(), sorted.end());
      return quantile_sorted(sorted, p);
    }
    case Kind::BetaMixture:
      return beta_mixture_quantile(components_, p);
  }
  return point_value_;
}

EstimateSummary summarize_estimate(const PerformanceEstimate& estimate) {
  if (estimate.kind() == PerformanceEstimate::Kind::Empirical) {
    std::vector<double> sorted = estimate.samples();
    std::sort(sorted.begin(), sorted.end());
    return {estimate.mean(), quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.25),
            quantile_sorted(sorted, 0.75)};
  }
  return {estimate.mean(), estimate.quantile(0.5), estimate.quantile(0.25), estimate.quantile(0.75)};
}

double beta_mixture_cdf(std::span<const BetaComponent> components, double x) {
  if (components.empty()) throw std::invalid_argument("beta mixture needs at least one component");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double total = 0.0;
  for (const auto& c : components) total += boost::math::ibeta(c.alpha, c.beta, x);
  return total / static_cast<double>(components.size());
}

double beta_mixture_quantile(std::span<const BetaComponent> components, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  auto residual = [&](double x) { return beta_mixture_cdf(components, x) - p; };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(residual, 0.0, 1.0, -p, 1.0 - p,
                                                          boost::math::tools::eps_tolerance<double>(44), max_iter);
  return 0.5 * (lo + hi);
}

// -- Estimators ---------------------------------------------------------------

PerformanceEstimate generalization_error_estimate(const ParzenModel& model, std::span<const UnlabeledSample> eval) {
  if (eval.empty()) throw std::invalid_argument("no evaluation instances");
  std::vector<double> max_posteriors;
  max_posteriors.reserve(eval.size());
  for (const auto& s : eval) {
    const auto posterior = model.posterior(s.x).probabilities;
    max_posteriors.push_back(*std::max_element(posterior.begin(), posterior.end()));
  }
  return PerformanceEstimate::point(accuracy_from_max_posteriors(max_posteriors));
}

double accuracy_from_max_posteriors(std::span<const double> max_posteriors) {
  if (max_posteriors.empty()) throw std::invalid_argument("no evaluation instances");
  std::vector<double> errors;
  errors.reserve(max_posteriors.size());
  for (double p : max_posteriors) {
    require_probability(p, "maximal posterior");
    errors.push_back(1.0 - p);
  }
  std::sort(errors.begin(), errors.end());
  const double err = std::accumulate(errors.begin(), errors.end(), 0.0);
  return std::clamp(1.0 - err / static_cast<double>(errors.size()), 0.0, 1.0);
}

std::vector<int> assign_folds(std::size_t n, int k, RandomStream& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (static_cast<std::size_t>(k) != n) std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(n);
  for (std::size_t position = 0; position < n; ++position)
    fold[order[position]] = static_cast<int>(position % static_cast<std::size_t>(k));
  return fold;
}

PerformanceEstimate kfold_cv(std::span<const LabeledSample> labeled, int k, const ClassifierConfig& config,
                             RandomStream& rng, const CvOptions& options) {
  if (k < 2) throw std::invalid_argument("cross-validation: k must be >= 2");
  if (static_cast<std::size_t>(k) > labeled.size())
    throw std::invalid_argument("cross-validation: k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(labeled.size()) + " labeled instances");
  if (options.weight_cap && !(*options.weight_cap > 0.0))
    throw std::invalid_argument("cross-validation: weight cap must be > 0");

  std::vector<double> weights;
  bool capped = false;
  if (options.reweighted) {
    weights.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const double q = labeled[i].sampling_density;
      if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("cross-validation: sampling density of instance " + std::to_string(i) +
                                    " is not positive");
      double w = 1.0 / q;
      if (options.weight_cap && w > *options.weight_cap) {
        w = *options.weight_cap;
        capped = true;
      }
      weights.push_back(w);
    }
    // Only ratios matter; scaling by the largest keeps constant densities exactly unweighted.
    const double largest = *std::max_element(weights.begin(), weights.end());
    for (double& w : weights) w /= largest;
  }

  const std::vector<int> fold = assign_folds(labeled.size(), k, rng);
  std::vector<std::uint8_t> correct(labeled.size());
  for (int f = 0; f < k; ++f) {
    std::vector<LabeledSample> train;
    for (std::size_t i = 0; i < labeled.size(); ++i)
      if (fold[i] != f) train.push_back(labeled[i]);
    const ParzenModel model = fit(std::move(train), config);
    for (std::size_t i = 0; i < labeled.size(); ++i)
      if (fold[i] == f) correct[i] = model.predict(labeled[i].x) == labeled[i].y;
  }

  auto estimate = PerformanceEstimate::point(
      options.reweighted ? weighted_accuracy(correct, std::span<const double>(weights))
                         : weighted_accuracy(correct, std::nullopt));
  if (capped) estimate.add_flag("weight-cap-active");
  return estimate;
}

PerformanceEstimate subsampled_cv(std::span<const LabeledSample> samples, int k, std::size_t train_size,
                                  const ClassifierConfig& config, RandomStream& rng) {
  if (k < 2) throw std::invalid_argument("cross-validation: k must be >= 2");
  if (static_cast<std::size_t>(k) > samples.size())
    throw std::invalid_argument("cross-validation: k exceeds the number of instances");

  const std::vector<int> fold = assign_folds(samples.size(), k, rng);
  std::vector<std::uint8_t> correct(samples.size());
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (fold[i] != f) rest.push_back(i);
    std::vector<std::size_t> chosen;
    std::sample(rest.begin(), rest.end(), std::back_inserter(chosen), std::min(train_size, rest.size()), rng);
    const ParzenModel model = fit(gather(samples, chosen), config);
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (fold[i] == f) correct[i] = model.predict(samples[i].x) == samples[i].y;
  }
  return PerformanceEstimate::point(weighted_accuracy(correct, std::nullopt));
}

PerformanceEstimate self_label_cv(std::span<const LabeledSample> labeled, std::span<const UnlabeledSample> pool,
                                  int k, const ClassifierConfig& config, RandomStream& rng) {
  if (labeled.empty()) throw std::invalid_argument("self-labeling: at least one labeled instance required");
  if (pool.empty()) {
    auto fallback = kfold_cv(labeled, k, config, rng);
    fallback.add_flag("empty-pool");
    return fallback;
  }
  const ParzenModel model = fit({labeled.begin(), labeled.end()}, config);
  std::vector<LabeledSample> combined(labeled.begin(), labeled.end());
  combined.reserve(labeled.size() + pool.size());
  for (const auto& u : pool) combined.push_back({u.x, model.predict(u.x), 1.0});
  return subsampled_cv(combined, k, labeled.size(), config, rng);
}

LocalLabelStatistics local_label_statistics(std::span<const LabeledSample> labeled, double x, double bandwidth,
                                            NearbyCount mode) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("local label statistics: bandwidth must be > 0");
  double total = 0.0;
  double positive = 0.0;
  for (const auto& s : labeled) {
    double w = 0.0;
    if (mode == NearbyCount::Kernel) {
      w = gaussian_kernel(x, s.x, bandwidth);
    } else {
      w = std::abs(x - s.x) <= bandwidth ? 1.0 : 0.0;
    }
    total += w;
    if (s.y == 2) positive += w;
  }
  LocalLabelStatistics stats;
  stats.n = total;
  stats.p_hat = total > 0.0 ? std::clamp(positive / total, 0.0, 1.0) : 0.5;
  return stats;
}

BetaComponent local_accuracy_distribution(const LocalLabelStatistics& stats) {
  const double positive = stats.n * stats.p_hat;
  const double negative = stats.n * (1.0 - stats.p_hat);
  return {1.0 + std::max(positive, negative), 1.0 + std::min(positive, negative)};
}

PerformanceEstimate probabilistic_performance(std::span<const LabeledSample> labeled,
                                              std::span<const UnlabeledSample> eval, double bandwidth,
                                              NearbyCount mode) {
  if (eval.empty()) throw std::invalid_argument("no evaluation instances");
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (labeled[i].y != 1 && labeled[i].y != 2)
      throw std::invalid_argument("probabilistic performance supports two classes only (instance " +
                                  std::to_string(i) + ")");
  }
  std::vector<BetaComponent> components;
  components.reserve(eval.size());
  for (const auto& u : eval)
    components.push_back(local_accuracy_distribution(local_label_statistics(labeled, u.x, bandwidth, mode)));
  return PerformanceEstimate::beta_mixture(std::move(components));
}

PerformanceEstimate true_baseline(const Predictor& predict, const TaskModel& task, std::size_t eval_size,
                                  RandomStream& rng) {
  if (eval_size < 1) throw std::invalid_argument("true baseline: eval_size must be >= 1");
  const auto eval = draw_labeled(task, SamplingDistribution::data_marginal(), eval_size, rng);
  std::size_t hits = 0;
  for (const auto& s : eval) hits += predict(s.x) == s.y;
  return PerformanceEstimate::point(static_cast<double>(hits) / static_cast<double>(eval_size));
}

PerformanceEstimate true_baseline(const ParzenModel& model, const TaskModel& task, std::size_t eval_size,
                                  RandomStream& rng) {
  return true_baseline([&model](double x) { return model.predict(x); }, task, eval_size, rng);
}

PerformanceEstimate subsample_baseline(const Predictor& predict, const TaskModel& task, std::size_t budget,
                                       std::size_t reps, RandomStream& rng) {
  if (budget < 1) throw std::invalid_argument("subsample baseline: budget must be >= 1");
  if (reps < 1) throw std::invalid_argument("subsample baseline: reps must be >= 1");
  std::vector<double> accuracies;
  accuracies.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto eval = draw_labeled(task, SamplingDistribution::data_marginal(), budget, rng);
    std::size_t hits = 0;
    for (const auto& s : eval) hits += predict(s.x) == s.y;
    accuracies.push_back(static_cast<double>(hits) / static_cast<double>(budget));
  }
  return PerformanceEstimate::empirical(std::move(accuracies));
}

PerformanceEstimate subsample_baseline(const ParzenModel& model, const TaskModel& task, std::size_t budget,
                                       std::size_t reps, RandomStream& rng) {
  return subsample_baseline([&model](double x) { return model.predict(x); }, task, budget, reps, rng);
}

}  // namespace alperf
